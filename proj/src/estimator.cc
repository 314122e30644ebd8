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

#include "nlaphase/estimator.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlaphase/errors.h"
#include "nlaphase/fisher.h"

namespace nlaphase {

namespace {

// Below this the state has no usable phase information and lambda = 1/sqrt(J)
// is meaningless.
constexpr double kMinInformation = 1e-14;

// a * x + b * y
FockVector combine(Complex a, const FockVector &x, Complex b, const FockVector &y) {
    std::vector<Complex> out(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
        out[n] = a * x[n] + b * y[n];
    }
    return FockVector(std::move(out));
}

// Rotates v so that <reference|v> is real and nonnegative.
FockVector fix_phase(const FockVector &v, const FockVector &reference, const FockVector &fallback) {
    Complex overlap = inner_product(reference, v);
    if (std::abs(overlap) < 1e-12) {
        overlap = inner_product(fallback, v);
    }
    if (std::abs(overlap) == 0) {
        return v;
    }
    return v.scaled(std::conj(overlap) / std::abs(overlap));
}

}  // namespace

double EstimatorObservable::mean(const FockVector &state) const {
    return lambda * (std::norm(inner_product(c_plus, state)) -
                     std::norm(inner_product(c_minus, state)));
}

double EstimatorObservable::second_moment(const FockVector &state) const {
    return lambda * lambda *
           (std::norm(inner_product(c_plus, state)) + std::norm(inner_product(c_minus, state)));
}

EstimatorObservable build_observable(const FockVector &psi0, const FockVector &dpsi0) {
    if (!psi0.is_normalized()) {
        throw InvalidArgument("reference state must be normalized, squared norm " +
                              std::to_string(psi0.squared_norm()));
    }
    const double info = qfi_pure(psi0, dpsi0);
    if (info <= kMinInformation) {
        throw DegenerateObservable("state carries no phase information (J = " +
                                   std::to_string(info) + ")");
    }

    // Orthonormal basis {e1, e2} of span{psi0, dpsi0}.
    const FockVector &e1 = psi0;
    const Complex a = inner_product(psi0, dpsi0);
    const FockVector residual = combine(1.0, dpsi0, -a, psi0);
    const FockVector e2 = residual.scaled(1.0 / std::sqrt(residual.squared_norm()));

    // L restricted to the span: <ei|L|ej> = 2(<ei|psi><dpsi|ej> + <ei|dpsi><psi|ej>).
    auto element = [&](const FockVector &ei, const FockVector &ej) {
        return 2.0 * (inner_product(ei, psi0) * inner_product(dpsi0, ej) +
                      inner_product(ei, dpsi0) * inner_product(psi0, ej));
    };
    const double l11 = element(e1, e1).real();
    const double l22 = element(e2, e2).real();
    const Complex l12 = element(e1, e2);

    // Closed-form eigenvectors of the Hermitian 2x2 block: rotation angle
    // from tan(2t) = |l12| / ((l11 - l22)/2), phase from arg(l12).
    const double half_gap = 0.5 * (l11 - l22);
    const double t = 0.5 * std::atan2(std::abs(l12), half_gap);
    const Complex phase = std::abs(l12) > 0 ? std::conj(l12) / std::abs(l12) : Complex{1.0, 0.0};
    const Complex up0 = std::cos(t), up1 = phase * std::sin(t);
    const Complex dn0 = -std::sin(t), dn1 = phase * std::cos(t);

    EstimatorObservable obs{
        1.0 / std::sqrt(info),
        fix_phase(combine(up0, e1, up1, e2), psi0, e2),
        fix_phase(combine(dn0, e1, dn1, e2), psi0, e2),
    };
    return obs;
}

std::optional<EstimatorObservable> branch_observable(double r, const NlaParams &params,
                                                     Branch branch, std::size_t cutoff) {
    try {
        const BranchOutcome outcome = apply_branch({r, 0.0}, params, branch, cutoff);
        return build_observable(outcome.state, branch_derivative(outcome));
    } catch (const DegenerateBranch &) {
        return std::nullopt;
    } catch (const DegenerateObservable &) {
        return std::nullopt;
    }
}

EstimatorObservable coherent_observable(double r, std::size_t cutoff) {
    const FockVector psi = coherent_state({r, 0.0}, cutoff);
    return build_observable(psi, phase_derivative(psi));
}

OutcomeProbs outcome_probabilities(const EstimatorObservable &obs, const FockVector &state) {
    OutcomeProbs p;
    p.p_plus = std::norm(inner_product(obs.c_plus, state));
    p.p_minus = std::norm(inner_product(obs.c_minus, state));
    p.p_null = std::max(0.0, 1.0 - p.p_plus - p.p_minus);
    return p;
}

FiveOutcomeProbs five_outcome_probs(const CoherentParams &input, const NlaParams &params,
                                    const EstimatorObservable &obs_s,
                                    const std::optional<EstimatorObservable> &obs_f) {
    const std::size_t cutoff = obs_s.cutoff();
    const FockVector probe = coherent_state(input, cutoff);

    FiveOutcomeProbs p;
    const FockVector amplified = success_operator(params, cutoff).apply(probe);
    p.p_s_plus = std::norm(inner_product(obs_s.c_plus, amplified));
    p.p_s_minus = std::norm(inner_product(obs_s.c_minus, amplified));
    if (obs_f) {
        const FockVector degraded = failure_operator(params, cutoff).apply(probe);
        p.p_f_plus = std::norm(inner_product(obs_f->c_plus, degraded));
        p.p_f_minus = std::norm(inner_product(obs_f->c_minus, degraded));
    } else {
        p.four_outcome = true;
        p.p_f_plus = failure_probability(input.r, params);
    }
    p.p_null = std::max(0.0, 1.0 - p.p_s_plus - p.p_s_minus - p.p_f_plus - p.p_f_minus);
    const double p_s = success_probability(input.r, params);
    p.p_null_success = std::clamp(p_s - p.p_s_plus - p.p_s_minus, 0.0, p.p_null);
    p.p_null_failure = p.p_null - p.p_null_success;
    return p;
}

double combine_weight(double v_s, double v_f) {
    if (!(v_s >= 0) || !(v_f >= 0)) {
        throw InvalidArgument("variances must be nonnegative");
    }
    if (v_s == 0 && v_f == 0) {
        throw InvalidArgument("cannot weight two zero-variance estimators");
    }
    return v_f / (v_s + v_f);
}

double mle_direct(std::int64_t n_plus, std::int64_t n_minus, double lambda) {
    if (n_plus < 0 || n_minus < 0) {
        throw InvalidArgument("outcome counts must be nonnegative");
    }
    const std::int64_t informative = n_plus + n_minus;
    if (informative == 0) {
        throw NoData("no +/- outcomes to estimate from");
    }
    return lambda * static_cast<double>(n_plus - n_minus) / static_cast<double>(informative);
}

double mle_nla(const TrialCounts &counts, double lambda_s, std::optional<double> lambda_f) {
    const std::int64_t n_s = counts.n_s();
    const std::int64_t n_f = lambda_f ? counts.n_f() : 0;
    if (n_s == 0 && n_f == 0) {
        throw NoData("no informative counts in either branch");
    }
    if (n_f == 0) {
        return mle_direct(counts.n_s_plus, counts.n_s_minus, lambda_s);
    }
    if (n_s == 0) {
        return mle_direct(counts.n_f_plus, counts.n_f_minus, *lambda_f);
    }
    const double theta_s = mle_direct(counts.n_s_plus, counts.n_s_minus, lambda_s);
    const double theta_f = mle_direct(counts.n_f_plus, counts.n_f_minus, *lambda_f);
    const double w_s = static_cast<double>(n_s) * *lambda_f * *lambda_f;
    const double w_f = static_cast<double>(n_f) * lambda_s * lambda_s;
    return (w_s * theta_s + w_f * theta_f) / (w_s + w_f);
}

}  // namespace nlaphase
