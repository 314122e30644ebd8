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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nlaphase/cli.h"
#include "nlaphase/cost.h"
#include "nlaphase/errors.h"
#include "nlaphase/estimator.h"
#include "nlaphase/fisher.h"
#include "nlaphase/montecarlo.h"

using namespace nlaphase;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<Outcome()> check;
};

std::string fmt(const char *pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

const std::vector<double> kGrid2Gains = {1.0, 1.5, 2.0, 4.0, 8.0};
const std::vector<double> kGrid2Amplitudes = {0.0, 0.1, 0.25, 0.5, 1.0};

Outcome analytic_qfi() {
    double worst = 0;
    for (double r : {0.1, 0.25, 0.5, 1.0}) {
        const CoherentParams p{r, 0.0};
        const std::size_t cutoff = choose_cutoff(p, 1, 1.0, Tolerance{1e-16, 1e-10});
        const FockVector psi = coherent_state(p, cutoff);
        worst = std::max(worst, std::abs(qfi_pure(psi, phase_derivative(psi)) - 4 * r * r));
    }
    return {worst < 1e-9, "max |J - 4r^2| = " + fmt("%.3g", worst)};
}

Outcome completeness() {
    double worst_p = 0, worst_op = 0;
    for (double r : kGrid2Amplitudes) {
        for (double g : kGrid2Gains) {
            for (int n0 = 1; n0 <= 5; ++n0) {
                const NlaParams nla{g, n0};
                worst_p = std::max(worst_p, std::abs(success_probability(r, nla) +
                                                     failure_probability(r, nla) - 1.0));
                const std::size_t cutoff = choose_cutoff({r, 0.0}, n0, g);
                const auto es = success_operator(nla, cutoff);
                const auto ef = failure_operator(nla, cutoff);
                for (std::size_t n = 0; n <= cutoff; ++n) {
                    worst_op = std::max(worst_op, std::abs(es[n] * es[n] + ef[n] * ef[n] - 1.0));
                }
            }
        }
    }
    return {worst_p < 1e-12 && worst_op < 1e-14,
            "max |p_s + p_f - 1| = " + fmt("%.3g", worst_p) +
                ", max |E_s^2 + E_f^2 - 1| = " + fmt("%.3g", worst_op)};
}

Outcome degenerate_failure() {
    double worst_j = 0, worst_vac = 0;
    for (double r : {0.1, 0.25, 0.5, 1.0}) {
        for (double g : {1.5, 2.0, 4.0, 8.0}) {
            const NlaParams nla{g, 1};
            worst_j = std::max(worst_j, std::abs(branch_breakdown(r, nla).j_f));
            const std::size_t cutoff = choose_cutoff({r, 0.0}, 1, g);
            const auto f = apply_branch({r, 0.0}, nla, Branch::kFailure, cutoff);
            double off_vacuum = std::abs(std::abs(f.state[0]) - 1.0);
            for (std::size_t n = 1; n <= cutoff; ++n) {
                off_vacuum = std::max(off_vacuum, std::abs(f.state[n]));
            }
            worst_vac = std::max(worst_vac, off_vacuum);
        }
    }
    return {worst_j < 1e-12 && worst_vac < 1e-12,
            "max J_f = " + fmt("%.3g", worst_j) +
                ", max deviation from vacuum = " + fmt("%.3g", worst_vac)};
}

// The gain sweep at the reference amplitude r = 0.25, 40 log-spaced gains in
// [1, 8] and n0 = 1..5.
Outcome ordering() {
    int violations = 0, points = 0;
    double max_gap = -INFINITY;
    for (int n0 = 1; n0 <= 5; ++n0) {
        for (double g : default_gain_grid()) {
            const auto b = branch_breakdown(0.25, {g, n0});
            ++points;
            if (g == 1.0) {
                if (b.j_s != b.j_alpha || b.j_nla_asymptotic != b.j_alpha) ++violations;
                continue;
            }
            const bool ok = b.j_s >= b.j_alpha && b.j_alpha >= b.j_f &&
                            b.j_nla_asymptotic < b.j_alpha;
            if (!ok) ++violations;
            max_gap = std::max(max_gap, b.j_nla_asymptotic / b.j_alpha);
        }
    }
    return {violations == 0, std::to_string(points) + " points, " + std::to_string(violations) +
                                 " violations, max J_NLA/J_alpha at g > 1 = " +
                                 fmt("%.6f", max_gap)};
}

Outcome crossing_numbers() {
    const auto b = branch_breakdown(0.25, {2.0, 2});
    const std::int64_t n_s = min_ns_exceeding(1000, b);
    const double tail = binomial_tail(1000, b.p_s, 90);
    return {n_s == 90 && std::abs(tail - 0.0468) <= 0.0005,
            "min n_s = " + std::to_string(n_s) + ", P(n_s >= 90) = " + fmt("%.6f", tail)};
}

Outcome observable() {
    Outcome out;
    double worst_lambda = 0, worst_trace = 0, worst_second = 0;
    auto check = [&](const EstimatorObservable &obs, const FockVector &psi) {
        const double j = qfi_pure(psi, phase_derivative(psi));
        worst_lambda = std::max(worst_lambda, std::abs(obs.lambda - 1.0 / std::sqrt(j)));
        const double trace =
            obs.lambda * (obs.c_plus.squared_norm() - obs.c_minus.squared_norm());
        worst_trace = std::max(worst_trace, std::abs(trace));
        worst_second = std::max(worst_second,
                                std::abs(obs.second_moment(psi) - obs.lambda * obs.lambda));
    };
    const double r = 0.25;
    const std::size_t cutoff = choose_cutoff({r, 0.0}, 2, 2.0);
    const auto coherent = coherent_observable(r, cutoff);
    check(coherent, coherent_state({r, 0.0}, cutoff));
    for (Branch branch : {Branch::kSuccess, Branch::kFailure}) {
        const auto obs = branch_observable(r, {2.0, 2}, branch, cutoff);
        if (!obs) return {false, "branch observable unexpectedly degenerate"};
        check(*obs, apply_branch({r, 0.0}, {2.0, 2}, branch, cutoff).state);
    }

    // Bias e(theta) = <C>_theta - theta of the coherent estimator.
    auto bias = [&](double theta) {
        return std::abs(coherent.mean(coherent_state({r, theta}, cutoff)) - theta);
    };
    bool ratio_ok = true;
    std::string ratios;
    for (double theta : {5e-4, 1e-3}) {
        const double ratio = bias(2 * theta) / bias(theta);
        ratio_ok = ratio_ok && ratio >= 3.5 && ratio <= 4.5;
        ratios += " e(2*" + fmt("%g", theta) + ")/e(" + fmt("%g", theta) +
                  ") = " + fmt("%.7f", ratio) + ";";
    }
    out.pass = worst_lambda < 1e-10 && worst_trace < 1e-10 && worst_second < 1e-10 && ratio_ok;
    out.detail = "|lambda - 1/sqrt(J)| = " + fmt("%.3g", worst_lambda) +
                 ", |tr C| = " + fmt("%.3g", worst_trace) +
                 ", |tr(rho C^2) - lambda^2| = " + fmt("%.3g", worst_second) + ";" + ratios +
                 " required in [3.5, 4.5]";
    return out;
}

SimConfig reference_config() {
    SimConfig c;
    c.r = 0.25;
    c.theta_true = 0.01;
    c.m = 1000;
    c.runs = 100000;
    c.seed = 1;
    return c;
}

Outcome monte_carlo_precision() {
    const SimConfig base = reference_config();
    const double j_alpha = qfi_coherent(base.r);
    const auto direct = simulate_direct(base, workers()).report;
    const double norm_direct = direct.precision / j_alpha;
    const double se_direct = direct.stderr_precision / j_alpha;
    bool pass = std::abs(norm_direct - 1.0) <= 3 * se_direct;
    std::ostringstream detail;
    detail << "direct " << fmt("%.4f", norm_direct) << " +- " << fmt("%.4f", se_direct) << ";";
    for (int n0 : {1, 2, 3}) {
        for (double g : {1.5, 2.0, 3.0}) {
            SimConfig c = base;
            c.gain = g;
            c.n0 = n0;
            const auto nla = simulate_nla(c, workers()).report;
            const double norm_nla = nla.precision / j_alpha;
            pass = pass && norm_nla < norm_direct;
            detail << " (g=" << g << ",n0=" << n0 << ") " << fmt("%.4f", norm_nla);
        }
    }
    return {pass, detail.str()};
}

Outcome identity_device() {
    SimConfig c = reference_config();
    c.gain = 1.0;
    c.n0 = 2;
    const auto direct = simulate_direct(c, workers()).report;
    const auto nla = simulate_nla(c, workers()).report;
    const double diff = std::abs(direct.precision - nla.precision);
    const double se = std::hypot(direct.stderr_precision, nla.stderr_precision);
    return {diff <= 3 * se, "|P_direct - P_nla| = " + fmt("%.3g", diff) +
                                ", 3 combined SE = " + fmt("%.3g", 3 * se)};
}

Outcome cost_breakeven() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int valid = 0;
    double worst = 0;
    while (valid < 1000) {
        const double j_alpha = 0.05 + 2 * unit(rng);
        const double j_s = j_alpha * (1.1 + 2 * unit(rng));
        const double p_s = 0.05 + 0.95 * unit(rng);
        const double x = 5 * unit(rng);
        const double z = 5 * unit(rng);
        const double eps = 0.1 + 5 * unit(rng);
        const double y = breakeven_y(x, z, j_alpha, j_s, p_s);
        if (y < 0) continue;  // no nonnegative measurement cost balances this draw
        ++valid;
        const CostParams c{x, y, z, eps};
        worst = std::max(worst, std::abs(cost_postselect(c, j_s, p_s) - cost_direct(c, j_alpha)));
    }
    const double y = breakeven_y(1, 1, 0.25, 0.5, 0.1);
    bool example_ok = std::abs(y - 18.0) < 1e-10;
    for (double eps : {1.0, 2.5}) {
        const CostParams c{1, y, 1, eps};
        example_ok = example_ok && std::abs(cost_direct(c, 0.25) - 76 * eps) < 1e-10 &&
                     std::abs(cost_postselect(c, 0.5, 0.1) - 76 * eps) < 1e-10;
    }
    return {worst <= 1e-10 && example_ok,
            "1000 draws, max |cost difference| at y* = " + fmt("%.3g", worst) +
                "; worked example y* = " + fmt("%.15g", y)};
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() /
                         ("nlaphase_acceptance_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    const std::vector<std::vector<std::string>> commands = {
        {"probabilities"},
        {"fisher-sweep"},
        {"fraction"},
        {"fraction", "--format", "json"},
        {"simulate", "--runs", "3000"},
        {"cost", "--y", "3"},
    };
    std::ostringstream sink;
    bool pass = true;
    std::string detail;
    int index = 0;
    for (auto args : commands) {
        const std::string out = (dir / ("run" + std::to_string(index++))).string();
        args.insert(args.end(), {"--workers", "1", "-o", out});
        const bool ran = cli::run(args, sink, sink) == cli::kExitOk;
        bool same = ran;
        for (const char *w : {"2", "4"}) {
            const std::string replayed = out + ".replay" + w;
            same = same && cli::run({"replay", cli::manifest_path(out), "--workers", w, "-o",
                                     replayed},
                                    sink, sink) == cli::kExitOk &&
                   slurp(out) == slurp(replayed);
        }
        pass = pass && same;
        detail += args.front() + (same ? " identical; " : " DIFFERS; ");
    }
    fs::remove_all(dir);
    return {pass, detail};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "analytic QFI of the coherent family", 1, analytic_qfi},
        {2, "probability and operator completeness", 1, completeness},
        {3, "degenerate failure branch at n0 = 1", 1, degenerate_failure},
        {4, "Fisher information ordering", 5, ordering},
        {5, "crossing sample count and binomial tail", 1, crossing_numbers},
        {6, "optimal observable", 1, observable},
        {7, "Monte Carlo precision, direct vs NLA", 300, monte_carlo_precision},
        {8, "identity-device equivalence", 60, identity_device},
        {9, "cost break-even", 1, cost_breakeven},
        {10, "manifest replay determinism", 60, determinism},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > c.budget_seconds) {
            o.pass = false;
            o.detail += " (over the " + fmt("%g", c.budget_seconds) + " s budget)";
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %d: %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), o.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
