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

#ifndef NLAPHASE_ESTIMATOR_H
#define NLAPHASE_ESTIMATOR_H

#include <cstdint>
#include <optional>

#include "nlaphase/fock.h"
#include "nlaphase/nla.h"

namespace nlaphase {

/// Locally optimal phase observable C = lambda^2 L with
/// L = 2(|psi0><dpsi0| + |dpsi0><psi0|). C has rank two and spectral form
/// lambda |c+><c+| - lambda |c-><c-| with lambda = 1/sqrt(J).
///
/// Phase convention: <psi0|c+> is real and positive, and so is <psi0|c->
/// when nonzero.
struct EstimatorObservable {
    double lambda = 0;
    FockVector c_plus;
    FockVector c_minus;

    std::size_t cutoff() const { return c_plus.cutoff(); }

    /// tr(rho C) = lambda (p+ - p-) for the pure state rho = |state><state|.
    double mean(const FockVector &state) const;
    /// tr(rho C^2) = lambda^2 (p+ + p-).
    double second_moment(const FockVector &state) const;
};

struct OutcomeProbs {
    double p_plus = 0;
    double p_minus = 0;
    double p_null = 0;
};

/// Outcome probabilities of the NLA followed by the branch observables:
/// {E_s|c_s+-><c_s+-|E_s, E_f|c_f+-><c_f+-|E_f, E_0}.
///
/// When the failure branch carries no phase information (n0 = 1) or never
/// occurs (g = 1), `four_outcome` is set and the failure outcome is a single
/// aggregate stored in p_f_plus with p_f_minus = 0.
struct FiveOutcomeProbs {
    double p_s_plus = 0;
    double p_s_minus = 0;
    double p_f_plus = 0;
    double p_f_minus = 0;
    double p_null = 0;
    bool four_outcome = false;

    /// p_null split by herald: the success-heralded part p_s - p_s+ - p_s-
    /// and the failure-heralded remainder. The measurement itself cannot
    /// tell them apart; the split is kept for sampling the herald.
    double p_null_success = 0;
    double p_null_failure = 0;
};

/// Builds C from a normalized state and its phase derivative. Throws
/// PreconditionViolation if <psi0|dpsi0> is not imaginary and
/// DegenerateObservable when the state carries no phase information.
EstimatorObservable build_observable(const FockVector &psi0, const FockVector &dpsi0);

/// Observable for the given branch at theta = 0. Returns nullopt when the
/// branch is degenerate (never occurs, or carries no information).
std::optional<EstimatorObservable> branch_observable(double r, const NlaParams &params,
                                                     Branch branch, std::size_t cutoff);

/// Observable for the bare coherent state at theta = 0.
EstimatorObservable coherent_observable(double r, std::size_t cutoff);

OutcomeProbs outcome_probabilities(const EstimatorObservable &obs, const FockVector &state);

FiveOutcomeProbs five_outcome_probs(const CoherentParams &input, const NlaParams &params,
                                    const EstimatorObservable &obs_s,
                                    const std::optional<EstimatorObservable> &obs_f);

/// beta = V_f / (V_s + V_f), the weight on the success-branch estimator.
double combine_weight(double v_s, double v_f);

/// lambda (n+ - n-) / (n+ + n-). Throws NoData when n+ + n- = 0.
double mle_direct(std::int64_t n_plus, std::int64_t n_minus, double lambda);

/// Outcome counts of one experiment of m probes. In four-outcome mode
/// n_f_plus holds the aggregate failure count and n_f_minus is 0.
struct TrialCounts {
    std::int64_t n_s_plus = 0;
    std::int64_t n_s_minus = 0;
    std::int64_t n_f_plus = 0;
    std::int64_t n_f_minus = 0;
    std::int64_t n_null = 0;

    std::int64_t n_s() const { return n_s_plus + n_s_minus; }
    std::int64_t n_f() const { return n_f_plus + n_f_minus; }
    std::int64_t total() const { return n_s() + n_f() + n_null; }
};

/// Inverse-variance combination of the two branch estimates,
///   (n_s lf^2 th_s + n_f ls^2 th_f) / (n_s lf^2 + n_f ls^2).
/// An empty branch drops out. With lambda_f = nullopt the failure counts are
/// ignored. Throws NoData when no informative counts remain.
double mle_nla(const TrialCounts &counts, double lambda_s, std::optional<double> lambda_f);

}  // namespace nlaphase

#endif  // NLAPHASE_ESTIMATOR_H
