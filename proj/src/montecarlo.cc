// Copyright 2026 The nlaphase Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nlaphase/montecarlo.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>

#include "nlaphase/errors.h"
#include "nlaphase/fisher.h"

namespace nlaphase {

namespace {

constexpr double kProbabilitySumTol = 1e-9;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Estimate (or NaN when dropped) and heralded success count, indexed by run.
struct RunOutput {
    double estimate;
    std::int64_t n_s;
};

// Evaluates body(run) for every run, in contiguous blocks across threads.
std::vector<RunOutput> run_all(std::int64_t runs, unsigned workers,
                               const std::function<RunOutput(std::int64_t)> &body) {
    std::vector<RunOutput> out(static_cast<std::size_t>(runs));
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(
                                                           std::min<std::int64_t>(runs, 1024))));
    auto block = [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            out[i] = body(i);
        }
    };
    if (workers == 1) {
        block(0, runs);
        return out;
    }
    std::vector<std::thread> threads;
    const std::int64_t chunk = (runs + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::int64_t begin = std::min<std::int64_t>(runs, w * chunk);
        const std::int64_t end = std::min<std::int64_t>(runs, begin + chunk);
        threads.emplace_back(block, begin, end);
    }
    for (auto &t : threads) {
        t.join();
    }
    return out;
}

SimulationResult summarize(const std::vector<RunOutput> &outputs, const SimConfig &config) {
    std::vector<double> estimates;
    estimates.reserve(outputs.size());
    double fraction_sum = 0;
    double fraction_sq = 0;
    for (const auto &o : outputs) {
        if (!std::isnan(o.estimate)) {
            estimates.push_back(o.estimate);
        }
        const double f = static_cast<double>(o.n_s) / static_cast<double>(config.m);
        fraction_sum += f;
        fraction_sq += f * f;
    }
    if (estimates.empty()) {
        throw NoData("every run was dropped for lack of informative counts");
    }
    SimulationResult result;
    result.report = precision_from_samples(estimates, config.theta_true, config.m);
    result.runs_dropped = static_cast<std::int64_t>(outputs.size() - estimates.size());
    const double n = static_cast<double>(outputs.size());
    result.success_fraction = fraction_sum / n;
    const double var = std::max(0.0, fraction_sq / n - result.success_fraction *
                                                            result.success_fraction);
    result.success_fraction_stderr = std::sqrt(var / n);
    return result;
}

std::size_t config_cutoff(const SimConfig &config) {
    // Cutoff for the probe at theta_true; |theta| does not change the Poisson tail.
    return choose_cutoff({config.r, 0.0}, config.n0, config.gain);
}

}  // namespace

void SimConfig::validate() const {
    CoherentParams{r, theta_true}.validate();
    NlaParams{gain, n0}.validate();
    if (m < 1) {
        throw InvalidArgument("m must be >= 1");
    }
    if (runs < 1) {
        throw InvalidArgument("runs must be >= 1");
    }
}

RandomStream run_stream(std::uint64_t seed, std::uint64_t run) {
    const std::uint64_t key = splitmix64(seed + (run + 1) * 0x9e3779b97f4a7c15ULL);
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(run)};
    return RandomStream(seq);
}

std::vector<std::int64_t> sample_multinomial(std::span<const double> probs, std::int64_t m,
                                             RandomStream &stream) {
    if (probs.empty()) {
        throw InvalidArgument("multinomial needs at least one category");
    }
    if (m < 1) {
        throw InvalidArgument("multinomial needs m >= 1");
    }
    double total = 0;
    for (double p : probs) {
        if (!(p >= 0) || !std::isfinite(p)) {
            throw InvalidArgument("multinomial probabilities must be finite and >= 0");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kProbabilitySumTol) {
        throw InvalidArgument("multinomial probabilities sum to " + std::to_string(total));
    }

    std::size_t last = probs.size() - 1;
    while (last > 0 && probs[last] == 0) {
        --last;
    }
    std::vector<std::int64_t> counts(probs.size(), 0);
    std::int64_t remaining = m;
    double mass = total;
    for (std::size_t i = 0; i < last && remaining > 0; ++i) {
        if (probs[i] == 0) {
            continue;
        }
        const double q = std::clamp(probs[i] / mass, 0.0, 1.0);
        std::binomial_distribution<std::int64_t> draw(remaining, q);
        counts[i] = draw(stream);
        remaining -= counts[i];
        mass -= probs[i];
        if (mass <= 0) {
            break;
        }
    }
    counts[last] += remaining;
    return counts;
}

PrecisionReport precision_from_samples(std::span<const double> estimates, double theta_true,
                                       std::int64_t m) {
    if (estimates.empty()) {
        throw InvalidArgument("precision needs at least one estimate");
    }
    if (m < 1) {
        throw InvalidArgument("m must be >= 1");
    }
    const double n = static_cast<double>(estimates.size());
    double sum = 0;
    double sq_err = 0;
    for (double e : estimates) {
        sum += e;
        sq_err += (e - theta_true) * (e - theta_true);
    }
    PrecisionReport rep;
    rep.runs_used = static_cast<std::int64_t>(estimates.size());
    rep.mean_estimate = sum / n;
    rep.mse = sq_err / n;

    double spread = 0;  // sum of (sq error - mse)^2
    double centered = 0;
    for (double e : estimates) {
        const double s = (e - theta_true) * (e - theta_true) - rep.mse;
        spread += s * s;
        centered += (e - rep.mean_estimate) * (e - rep.mean_estimate);
    }
    rep.variance = estimates.size() > 1 ? centered / (n - 1) : 0.0;

    if (rep.mse == 0) {
        rep.precision = std::numeric_limits<double>::infinity();
        rep.stderr_precision = 0;
        return rep;
    }
    const double md = static_cast<double>(m);
    rep.precision = 1.0 / (md * rep.mse);
    const double stderr_mse = estimates.size() > 1 ? std::sqrt(spread / (n - 1) / n) : 0.0;
    rep.stderr_precision = rep.precision * stderr_mse / rep.mse;
    return rep;
}

SimulationResult simulate_direct(const SimConfig &config, unsigned workers) {
    config.validate();
    const std::size_t cutoff = config_cutoff(config);
    const EstimatorObservable obs = coherent_observable(config.r, cutoff);
    const OutcomeProbs p =
        outcome_probabilities(obs, coherent_state({config.r, config.theta_true}, cutoff));
    const double probs[] = {p.p_plus, p.p_minus, p.p_null};

    auto body = [&](std::int64_t run) {
        RandomStream stream = run_stream(config.seed, static_cast<std::uint64_t>(run));
        const auto counts = sample_multinomial(probs, config.m, stream);
        if (counts[0] + counts[1] == 0) {
            return RunOutput{std::numeric_limits<double>::quiet_NaN(), config.m};
        }
        return RunOutput{mle_direct(counts[0], counts[1], obs.lambda), config.m};
    };
    return summarize(run_all(config.runs, workers, body), config);
}

SimulationResult simulate_nla(const SimConfig &config, unsigned workers) {
    config.validate();
    const NlaParams nla{config.gain, config.n0};
    const std::size_t cutoff = config_cutoff(config);
    const auto obs_s = branch_observable(config.r, nla, Branch::kSuccess, cutoff);
    if (!obs_s) {
        throw DegenerateObservable("success branch carries no phase information");
    }
    const auto obs_f = branch_observable(config.r, nla, Branch::kFailure, cutoff);
    const FiveOutcomeProbs p =
        five_outcome_probs({config.r, config.theta_true}, nla, *obs_s, obs_f);
    // Null outcomes are drawn per herald so the heralded success count is
    // available; the estimator only sees their sum.
    const double probs[] = {p.p_s_plus, p.p_s_minus, p.p_null_success,
                            p.p_f_plus, p.p_f_minus, p.p_null_failure};
    const double lambda_s = obs_s->lambda;
    const std::optional<double> lambda_f =
        obs_f ? std::optional<double>(obs_f->lambda) : std::nullopt;

    auto body = [&](std::int64_t run) {
        RandomStream stream = run_stream(config.seed, static_cast<std::uint64_t>(run));
        const auto c = sample_multinomial(probs, config.m, stream);
        const TrialCounts counts{c[0], c[1], c[3], c[4], c[2] + c[5]};
        const std::int64_t heralded = c[0] + c[1] + c[2];
        const bool informative = counts.n_s() > 0 || (lambda_f && counts.n_f() > 0);
        if (!informative) {
            return RunOutput{std::numeric_limits<double>::quiet_NaN(), heralded};
        }
        return RunOutput{mle_nla(counts, lambda_s, lambda_f), heralded};
    };
    return summarize(run_all(config.runs, workers, body), config);
}

}  // namespace nlaphase
