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

#ifndef NLAPHASE_NLA_H
#define NLAPHASE_NLA_H

#include <cstddef>
#include <string_view>
#include <vector>

#include "nlaphase/fock.h"

namespace nlaphase {

/// Probabilistic noiseless linear amplifier with gain g >= 1 that amplifies
/// photon numbers up to n0. g = 1 is the identity device.
struct NlaParams {
    double gain = 2.0;
    int n0 = 2;

    void validate() const;
};

/// Operator that is diagonal in the Fock basis.
class DiagonalOperator {
   public:
    explicit DiagonalOperator(std::vector<double> weights);

    std::size_t cutoff() const { return weights_.size() - 1; }
    std::span<const double> weights() const { return weights_; }
    double operator[](std::size_t n) const { return weights_[n]; }

    FockVector apply(const FockVector &v) const;

   private:
    std::vector<double> weights_;
};

enum class Branch { kSuccess, kFailure };

std::string_view branch_name(Branch b);

struct BranchOutcome {
    Branch label;
    double probability;
    FockVector state;
};

/// E_s: weight g^(n - n0) for n <= n0 and 1 above.
DiagonalOperator success_operator(const NlaParams &params, std::size_t cutoff);

/// E_f = sqrt(1 - E_s^2): weight sqrt(1 - g^(2(n - n0))) for n <= n0 and 0 above.
DiagonalOperator failure_operator(const NlaParams &params, std::size_t cutoff);

/// tr(rho E_s^2) for |r e^{i theta}>, independent of theta. The part above n0
/// is the exact complement of a finite sum, so there is no truncation error.
double success_probability(double r, const NlaParams &params);

/// tr(rho E_f^2); a finite sum over n <= n0.
double failure_probability(double r, const NlaParams &params);

/// Normalized E|alpha>/sqrt(p) for the requested branch, renormalized with
/// the closed-form probability. Throws DegenerateBranch when p = 0 (the
/// failure branch at g = 1) and InvalidArgument when `cutoff` truncates
/// enough of the state that the numerical norm disagrees with p.
BranchOutcome apply_branch(const CoherentParams &input, const NlaParams &params, Branch branch,
                           std::size_t cutoff, const Tolerance &tol = {});

/// |psi_dot> of a branch state (unnormalized).
FockVector branch_derivative(const BranchOutcome &outcome);

}  // namespace nlaphase

#endif  // NLAPHASE_NLA_H
