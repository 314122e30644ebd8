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

#include "nlaphase/fisher.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlaphase/errors.h"

namespace nlaphase {

namespace {

constexpr double kImaginaryOverlapTol = 1e-10;

}  // namespace

double qfi_pure(const FockVector &psi, const FockVector &dpsi) {
    const Complex overlap = inner_product(psi, dpsi);
    if (std::abs(overlap.real()) >= kImaginaryOverlapTol) {
        throw PreconditionViolation("<psi|dpsi> has real part " + std::to_string(overlap.real()) +
                                    "; dpsi is not a phase derivative of psi");
    }
    const double j = 4.0 * (dpsi.squared_norm() - std::norm(overlap));
    return std::max(j, 0.0);
}

double qfi_coherent(double r) {
    if (!std::isfinite(r) || r < 0) {
        throw InvalidArgument("coherent amplitude r must be finite and >= 0");
    }
    return 4.0 * r * r;
}

FisherBreakdown branch_breakdown(double r, const NlaParams &params, const Tolerance &tol) {
    params.validate();
    const CoherentParams input{r, 0.0};
    // The QFI is a second moment of the photon distribution, so a probability
    // tail of tail_tol leaves an error of order n^2 * tail_tol. Truncate much
    // further out than the probabilities alone would need.
    Tolerance fisher_tol = tol;
    fisher_tol.tail_tol = tol.tail_tol * 1e-8;
    const std::size_t cutoff = choose_cutoff(input, params.n0, params.gain, fisher_tol);

    FisherBreakdown out;
    out.r = r;
    out.nla = params;
    out.j_alpha = qfi_coherent(r);
    out.j_ideal = qfi_coherent(params.gain * r);
    out.p_s = success_probability(r, params);
    out.p_f = failure_probability(r, params);

    const BranchOutcome success = apply_branch(input, params, Branch::kSuccess, cutoff, tol);
    out.j_s = qfi_pure(success.state, branch_derivative(success));
    if (out.p_f == 0) {
        // Identity device: the success branch is the input state itself. Snap
        // the roundoff so comparisons against j_alpha see exact equality.
        if (std::abs(out.j_s - out.j_alpha) > tol.norm_tol * std::max(1.0, out.j_alpha)) {
            throw InvalidArgument("identity-device QFI disagrees with 4 r^2");
        }
        out.j_s = out.j_alpha;
    }
    if (out.p_f > 0) {
        const BranchOutcome failure = apply_branch(input, params, Branch::kFailure, cutoff, tol);
        out.j_f = qfi_pure(failure.state, branch_derivative(failure));
    }
    out.j_nla_asymptotic = out.p_s * out.j_s + out.p_f * out.j_f;
    return out;
}

double j_nla_conditional(std::int64_t n_s, std::int64_t n_f, const FisherBreakdown &breakdown) {
    if (n_s < 0 || n_f < 0) {
        throw InvalidArgument("branch counts must be nonnegative");
    }
    const std::int64_t m = n_s + n_f;
    if (m == 0) {
        throw InvalidArgument("sample size n_s + n_f must be >= 1");
    }
    return (static_cast<double>(n_s) * breakdown.j_s + static_cast<double>(n_f) * breakdown.j_f) /
           static_cast<double>(m);
}

std::int64_t min_ns_exceeding(std::int64_t m, const FisherBreakdown &breakdown) {
    if (m < 1) {
        throw InvalidArgument("sample size m must be >= 1");
    }
    if (!(breakdown.j_s > breakdown.j_alpha)) {
        throw NoCrossing("j_s <= j_alpha: conditional information never exceeds j_alpha");
    }
    // j_nla_conditional is monotone in n_s when j_s > j_f; start just below
    // the real-valued crossing and step to the first integer that exceeds it.
    const double span = breakdown.j_s - breakdown.j_f;
    std::int64_t n_s = 0;
    if (span > 0) {
        const double estimate = m * (breakdown.j_alpha - breakdown.j_f) / span;
        n_s = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(estimate)) - 2, 0, m);
    }
    while (n_s > 0 && j_nla_conditional(n_s, m - n_s, breakdown) > breakdown.j_alpha) {
        --n_s;
    }
    while (j_nla_conditional(n_s, m - n_s, breakdown) <= breakdown.j_alpha) {
        ++n_s;
    }
    return n_s;
}

namespace {

// Binomial pmf over j = 0..m, scaled by an arbitrary positive constant.
// Starts at the mode (largest term, computed in log space) and walks outwards
// with pmf(j+1)/pmf(j) = (m-j)/(j+1) * p/(1-p). Requires 0 < p < 1.
std::vector<double> scaled_binomial_pmf(std::int64_t m, double p) {
    const double md = static_cast<double>(m);
    const auto mode =
        std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((md + 1) * p)), 0, m);
    const double odds = p / (1 - p);
    const double log_mode = std::lgamma(md + 1) - std::lgamma(mode + 1.0) -
                            std::lgamma(md - mode + 1) + mode * std::log(p) +
                            (md - mode) * std::log1p(-p);

    std::vector<double> pmf(static_cast<std::size_t>(m) + 1, 0.0);
    pmf[mode] = std::exp(log_mode);
    if (pmf[mode] == 0) {
        pmf[mode] = 1;  // only ratios matter below
    }
    for (std::int64_t j = mode; j < m && pmf[j] > 0; ++j) {
        pmf[j + 1] = pmf[j] * (md - j) / (j + 1.0) * odds;
    }
    for (std::int64_t j = mode; j > 0 && pmf[j] > 0; --j) {
        pmf[j - 1] = pmf[j] * j / (md - j + 1.0) / odds;
    }
    return pmf;
}

void require_binomial(std::int64_t m, double p) {
    if (m < 0 || !(p >= 0 && p <= 1)) {
        throw InvalidArgument("binomial needs m >= 0 and p in [0, 1]");
    }
}

}  // namespace

double binomial_tail(std::int64_t m, double p, std::int64_t k) {
    require_binomial(m, p);
    if (k <= 0) {
        return 1.0;
    }
    if (k > m || p == 0) {
        return 0.0;
    }
    if (p == 1) {
        return 1.0;
    }
    const std::vector<double> pmf = scaled_binomial_pmf(m, p);
    // Both sides summed smallest-first, then divided by the total mass.
    double upper = 0;
    for (std::int64_t j = m; j >= k; --j) {
        upper += pmf[j];
    }
    double lower = 0;
    for (std::int64_t j = 0; j < k; ++j) {
        lower += pmf[j];
    }
    return upper / (upper + lower);
}

std::vector<double> binomial_tails(std::int64_t m, double p) {
    require_binomial(m, p);
    std::vector<double> tails(static_cast<std::size_t>(m) + 1, 0.0);
    if (p == 0 || p == 1) {
        for (std::int64_t k = 0; k <= m; ++k) {
            tails[k] = binomial_tail(m, p, k);
        }
        return tails;
    }
    const std::vector<double> pmf = scaled_binomial_pmf(m, p);
    double running = 0;
    for (std::int64_t k = m; k >= 0; --k) {
        running += pmf[k];
        tails[k] = running;
    }
    const double total = running;
    for (auto &t : tails) {
        t /= total;
    }
    tails[0] = 1.0;
    return tails;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    if (!(lo > 0) || !(hi >= lo) || count < 1) {
        throw InvalidArgument("log_spaced needs 0 < lo <= hi and count >= 1");
    }
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double step = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) {
        out[i] = lo * std::exp(step * i);
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> default_gain_grid() {
    return log_spaced(1.0, 8.0, 40);
}

std::vector<FisherBreakdown> sweep_gain(double r, std::span<const int> n0_list,
                                        std::span<const double> gains, const Tolerance &tol) {
    if (n0_list.empty() || gains.empty()) {
        throw InvalidArgument("gain sweep needs a nonempty gain grid and n0 list");
    }
    std::vector<FisherBreakdown> rows;
    rows.reserve(n0_list.size() * gains.size());
    for (int n0 : n0_list) {
        for (double g : gains) {
            rows.push_back(branch_breakdown(r, NlaParams{g, n0}, tol));
        }
    }
    return rows;
}

FractionSweep sweep_fraction(std::int64_t m, const FisherBreakdown &breakdown) {
    if (m < 1) {
        throw InvalidArgument("sample size m must be >= 1");
    }
    FractionSweep out;
    out.m = m;
    out.rows.reserve(static_cast<std::size_t>(m) + 1);
    const double md = static_cast<double>(m);
    for (std::int64_t n_s = 0; n_s <= m; ++n_s) {
        const std::int64_t n_f = m - n_s;
        out.rows.push_back(FractionRow{
            n_s,
            n_s / md,
            n_s * breakdown.j_s / md,
            n_f * breakdown.j_f / md,
            j_nla_conditional(n_s, n_f, breakdown),
        });
    }
    out.most_likely_ns = static_cast<std::int64_t>(std::llround(md * breakdown.p_s));
    if (breakdown.j_s > breakdown.j_alpha) {
        out.crossing = min_ns_exceeding(m, breakdown);
    }
    return out;
}

}  // namespace nlaphase
