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

#ifndef NLAPHASE_FOCK_H
#define NLAPHASE_FOCK_H

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace nlaphase {

using Complex = std::complex<double>;

/// Coherent-state amplitude alpha = r * exp(i * theta).
struct CoherentParams {
    double r = 0.0;
    double theta = 0.0;

    /// Throws InvalidArgument if r < 0 or either field is non-finite.
    void validate() const;
};

struct Tolerance {
    double tail_tol = 1e-12;
    double norm_tol = 1e-10;

    void validate() const;
};

/// State vector over photon numbers 0..cutoff. Amplitudes are always finite.
class FockVector {
   public:
    /// Vacuum-sized zero vector with the given cutoff.
    explicit FockVector(std::size_t cutoff);
    explicit FockVector(std::vector<Complex> amplitudes);

    std::size_t cutoff() const { return amplitudes_.size() - 1; }
    std::size_t size() const { return amplitudes_.size(); }

    std::span<const Complex> amplitudes() const { return amplitudes_; }
    const Complex &operator[](std::size_t n) const { return amplitudes_[n]; }

    double squared_norm() const;
    bool is_normalized(double norm_tol = Tolerance{}.norm_tol) const;

    /// Returns this vector multiplied by a scalar.
    FockVector scaled(Complex factor) const;

   private:
    std::vector<Complex> amplitudes_;
};

/// Smallest N >= n0 + 1 for which the Poisson tail with mean (gain*r)^2 beyond
/// N is below tol.tail_tol. The amplified mean bounds the tails of the input,
/// success and failure branches, so one cutoff serves all of them.
std::size_t choose_cutoff(const CoherentParams &params, int nla_n0, double gain,
                          const Tolerance &tol = {});

/// |alpha> truncated at `cutoff`, built with c_{n+1} = c_n * alpha / sqrt(n+1).
FockVector coherent_state(const CoherentParams &params, std::size_t cutoff);

/// <a|b>; throws DimensionMismatch for different cutoffs.
Complex inner_product(const FockVector &a, const FockVector &b);

/// d/dtheta for states whose phase enters as exp(i n theta): c_n -> i n c_n.
FockVector phase_derivative(const FockVector &v);

/// a - b; throws DimensionMismatch for different cutoffs.
FockVector subtract(const FockVector &a, const FockVector &b);

}  // namespace nlaphase

#endif  // NLAPHASE_FOCK_H
