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

#include "nlaphase/nla.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlaphase/errors.h"

namespace nlaphase {

namespace {

void require_cutoff(const NlaParams &params, std::size_t cutoff) {
    params.validate();
    if (cutoff < static_cast<std::size_t>(params.n0)) {
        throw InvalidArgument("cutoff " + std::to_string(cutoff) + " is below n0 " +
                              std::to_string(params.n0));
    }
}

// g^(2(n - n0)), the squared success weight for n <= n0.
double squared_success_weight(const NlaParams &params, int n) {
    return std::pow(params.gain, 2.0 * (n - params.n0));
}

// 1 - g^(2(n - n0)) without cancellation for g close to 1.
double squared_failure_weight(const NlaParams &params, int n) {
    return -std::expm1(2.0 * (n - params.n0) * std::log(params.gain));
}

void require_amplitude(double r) {
    if (!std::isfinite(r) || r < 0) {
        throw InvalidArgument("coherent amplitude r must be finite and >= 0");
    }
}

}  // namespace

void NlaParams::validate() const {
    if (!std::isfinite(gain) || gain < 1) {
        throw InvalidArgument("NLA gain must be finite and >= 1, got " + std::to_string(gain));
    }
    if (n0 < 1) {
        throw InvalidArgument("NLA n0 must be >= 1, got " + std::to_string(n0));
    }
}

DiagonalOperator::DiagonalOperator(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw InvalidArgument("diagonal operator needs at least one level");
    }
    for (double w : weights_) {
        if (!(w >= 0 && w <= 1)) {
            throw InvalidArgument("diagonal operator weights must lie in [0, 1]");
        }
    }
}

FockVector DiagonalOperator::apply(const FockVector &v) const {
    if (v.size() != weights_.size()) {
        throw DimensionMismatch("operator cutoff " + std::to_string(cutoff()) +
                                " does not match vector cutoff " + std::to_string(v.cutoff()));
    }
    std::vector<Complex> out(v.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
        out[n] = weights_[n] * v[n];
    }
    return FockVector(std::move(out));
}

std::string_view branch_name(Branch b) {
    return b == Branch::kSuccess ? "success" : "failure";
}

DiagonalOperator success_operator(const NlaParams &params, std::size_t cutoff) {
    require_cutoff(params, cutoff);
    std::vector<double> w(cutoff + 1, 1.0);
    for (int n = 0; n < params.n0; ++n) {
        w[n] = std::pow(params.gain, n - params.n0);
    }
    return DiagonalOperator(std::move(w));
}

DiagonalOperator failure_operator(const NlaParams &params, std::size_t cutoff) {
    require_cutoff(params, cutoff);
    std::vector<double> w(cutoff + 1, 0.0);
    for (int n = 0; n < params.n0; ++n) {
        w[n] = std::sqrt(squared_failure_weight(params, n));
    }
    return DiagonalOperator(std::move(w));
}

double success_probability(double r, const NlaParams &params) {
    // The complement 1 - p_f is exact at the identity device (p_s = 1) but
    // loses relative accuracy when p_s is small; there the series
    // e^{-r^2} [sum_{n<=n0} g^{2(n-n0)} r^{2n}/n! + sum_{n>n0} r^{2n}/n!]
    // is summed directly.
    const double p_f = failure_probability(r, params);
    if (p_f <= 0.5) {
        return 1.0 - p_f;
    }
    const double mean = r * r;
    if (mean == 0) {
        return std::pow(params.gain, -2.0 * params.n0);
    }
    const double log_mean = std::log(mean);
    const double log_g = std::log(params.gain);
    auto log_poisson = [&](int n) { return -mean + n * log_mean - std::lgamma(n + 1.0); };
    double total = 0;
    for (int n = 0; n <= params.n0; ++n) {
        total += std::exp(log_poisson(n) + 2.0 * (n - params.n0) * log_g);
    }
    for (int n = params.n0 + 1;; ++n) {
        const double term = std::exp(log_poisson(n));
        total += term;
        if (n > mean && term <= 1e-18 * total) {
            break;
        }
    }
    return std::clamp(total, 0.0, 1.0);
}

double failure_probability(double r, const NlaParams &params) {
    require_amplitude(r);
    params.validate();
    const double mean = r * r;
    double total = 0;
    double term = 1;
    for (int n = 0; n < params.n0; ++n) {
        total += squared_failure_weight(params, n) * term;
        term *= mean / (n + 1);
    }
    return std::clamp(std::exp(-mean) * total, 0.0, 1.0);
}

BranchOutcome apply_branch(const CoherentParams &input, const NlaParams &params, Branch branch,
                           std::size_t cutoff, const Tolerance &tol) {
    input.validate();
    const bool success = branch == Branch::kSuccess;
    const double p =
        success ? success_probability(input.r, params) : failure_probability(input.r, params);
    if (p <= 0) {
        throw DegenerateBranch(std::string(branch_name(branch)) +
                               " branch has zero probability (gain = 1?)");
    }
    const DiagonalOperator op =
        success ? success_operator(params, cutoff) : failure_operator(params, cutoff);
    const FockVector projected = op.apply(coherent_state(input, cutoff));

    const double numeric = projected.squared_norm();
    if (std::abs(numeric - p) >= tol.tail_tol || std::abs(numeric / p - 1.0) > tol.norm_tol) {
        throw InvalidArgument("cutoff " + std::to_string(cutoff) + " truncates the " +
                              std::string(branch_name(branch)) + " branch");
    }
    return BranchOutcome{branch, p, projected.scaled(1.0 / std::sqrt(p))};
}

FockVector branch_derivative(const BranchOutcome &outcome) {
    return phase_derivative(outcome.state);
}

}  // namespace nlaphase
