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

#ifndef NLAPHASE_FISHER_H
#define NLAPHASE_FISHER_H

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nlaphase/fock.h"
#include "nlaphase/nla.h"

namespace nlaphase {

/// Per-sample quantum Fisher information of a coherent probe with and without
/// the amplifier, split by heralded branch.
struct FisherBreakdown {
    double r = 0;
    NlaParams nla;

    double j_alpha = 0;  ///< 4 r^2, no amplifier
    double j_s = 0;      ///< success branch
    double j_f = 0;      ///< failure branch; 0 when the branch never occurs
    double j_ideal = 0;  ///< 4 g^2 r^2, the state |g alpha>
    double p_s = 0;
    double p_f = 0;
    double j_nla_asymptotic = 0;  ///< p_s j_s + p_f j_f

    double success_share() const { return p_s * j_s; }
    double failure_share() const { return p_f * j_f; }
};

/// 4(<dpsi|dpsi> - |<psi|dpsi>|^2) for a normalized pure state. The overlap
/// must be purely imaginary (|Re| < 1e-10), in which case this equals
/// 4(<dpsi|dpsi> + <psi|dpsi>^2); otherwise PreconditionViolation.
double qfi_pure(const FockVector &psi, const FockVector &dpsi);

/// 4 r^2.
double qfi_coherent(double r);

/// Evaluated at theta = 0, truncated where the amplified Poisson tail is
/// below tol.tail_tol * 1e-8.
FisherBreakdown branch_breakdown(double r, const NlaParams &params, const Tolerance &tol = {});

/// (n_s j_s + n_f j_f) / (n_s + n_f).
double j_nla_conditional(std::int64_t n_s, std::int64_t n_f, const FisherBreakdown &breakdown);

/// Smallest n_s with j_nla_conditional(n_s, m - n_s) > j_alpha. Throws
/// NoCrossing when j_s <= j_alpha.
std::int64_t min_ns_exceeding(std::int64_t m, const FisherBreakdown &breakdown);

/// P(X >= k) for X ~ Binomial(m, p).
double binomial_tail(std::int64_t m, double p, std::int64_t k);

/// P(X >= k) for every k = 0..m, from a single pass over the pmf.
std::vector<double> binomial_tails(std::int64_t m, double p);

/// 40 log-spaced gains in [1, 8].
std::vector<double> default_gain_grid();

/// `count` log-spaced points in [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int count);

/// One breakdown per (n0, gain), n0-major in the order given.
std::vector<FisherBreakdown> sweep_gain(double r, std::span<const int> n0_list,
                                        std::span<const double> gains, const Tolerance &tol = {});

struct FractionRow {
    std::int64_t n_s;
    double fraction;      ///< n_s / m
    double success_part;  ///< n_s j_s / m
    double failure_part;  ///< n_f j_f / m
    double j_nla;
};

struct FractionSweep {
    std::int64_t m;
    std::vector<FractionRow> rows;         ///< n_s = 0..m
    std::int64_t most_likely_ns;           ///< round(m p_s)
    std::optional<std::int64_t> crossing;  ///< min_ns_exceeding, if any
};

FractionSweep sweep_fraction(std::int64_t m, const FisherBreakdown &breakdown);

}  // namespace nlaphase

#endif  // NLAPHASE_FISHER_H
