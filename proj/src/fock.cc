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

#include "nlaphase/fock.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlaphase/errors.h"

namespace nlaphase {

namespace {

// Hard ceiling on the basis size; (g r)^2 would have to be in the thousands.
constexpr std::size_t kMaxCutoff = 1 << 16;

void require_same_cutoff(const FockVector &a, const FockVector &b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("Fock vectors have cutoffs " + std::to_string(a.cutoff()) +
                                " and " + std::to_string(b.cutoff()));
    }
}

}  // namespace

void CoherentParams::validate() const {
    if (!std::isfinite(r) || !std::isfinite(theta)) {
        throw InvalidArgument("coherent parameters must be finite");
    }
    if (r < 0) {
        throw InvalidArgument("coherent amplitude r must be >= 0, got " + std::to_string(r));
    }
}

void Tolerance::validate() const {
    auto ok = [](double t) { return t > 0 && t < 1e-3; };
    if (!ok(tail_tol) || !ok(norm_tol)) {
        throw InvalidArgument("tolerances must lie in (0, 1e-3)");
    }
}

FockVector::FockVector(std::size_t cutoff) : amplitudes_(cutoff + 1, Complex{0.0, 0.0}) {
}

FockVector::FockVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) {
        throw InvalidArgument("a Fock vector needs at least the vacuum amplitude");
    }
    for (const auto &c : amplitudes_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw InvalidArgument("Fock amplitudes must be finite");
        }
    }
}

double FockVector::squared_norm() const {
    double total = 0;
    for (const auto &c : amplitudes_) {
        total += std::norm(c);
    }
    return total;
}

bool FockVector::is_normalized(double norm_tol) const {
    return std::abs(squared_norm() - 1.0) <= norm_tol;
}

FockVector FockVector::scaled(Complex factor) const {
    std::vector<Complex> out(amplitudes_);
    for (auto &c : out) {
        c *= factor;
    }
    return FockVector(std::move(out));
}

std::size_t choose_cutoff(const CoherentParams &params, int nla_n0, double gain,
                          const Tolerance &tol) {
    params.validate();
    tol.validate();
    if (!std::isfinite(gain) || gain < 1) {
        throw InvalidArgument("gain must be finite and >= 1");
    }
    if (nla_n0 < 1) {
        throw InvalidArgument("n0 must be >= 1");
    }
    const std::size_t floor = static_cast<std::size_t>(nla_n0) + 1;
    const double amplified = gain * params.r;
    const double mean = amplified * amplified;
    if (mean == 0) {
        return floor;
    }

    // Poisson terms in log space; tail(N) = sum_{n>N} term(n) is accumulated
    // backwards from a point far enough out that the remainder is negligible.
    auto log_term = [&](std::size_t n) {
        return -mean + static_cast<double>(n) * std::log(mean) - std::lgamma(n + 1.0);
    };
    std::size_t last = static_cast<std::size_t>(std::ceil(mean + 40.0 * std::sqrt(mean) + 60.0));
    last = std::max(last, floor + 1);
    while (last < kMaxCutoff && log_term(last) > -800.0) {
        last *= 2;
    }
    if (last >= kMaxCutoff) {
        throw InvalidArgument("amplified mean photon number too large for a truncated basis");
    }

    // tails[n] = sum_{k > n} term(k) for n in [floor, last).
    std::vector<double> tails(last + 1, 0.0);
    double running = 0;
    for (std::size_t n = last; n-- > floor;) {
        running += std::exp(log_term(n + 1));
        tails[n] = running;
    }
    for (std::size_t n = floor; n < last; ++n) {
        if (tails[n] < tol.tail_tol) {
            return n;
        }
    }
    return last;
}

FockVector coherent_state(const CoherentParams &params, std::size_t cutoff) {
    params.validate();
    const Complex alpha = std::polar(params.r, params.theta);
    std::vector<Complex> amps(cutoff + 1);
    amps[0] = std::exp(-0.5 * params.r * params.r);
    for (std::size_t n = 0; n < cutoff; ++n) {
        amps[n + 1] = amps[n] * alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return FockVector(std::move(amps));
}

Complex inner_product(const FockVector &a, const FockVector &b) {
    require_same_cutoff(a, b);
    Complex total{0.0, 0.0};
    for (std::size_t n = 0; n < a.size(); ++n) {
        total += std::conj(a[n]) * b[n];
    }
    return total;
}

FockVector phase_derivative(const FockVector &v) {
    std::vector<Complex> out(v.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
        out[n] = Complex{0.0, static_cast<double>(n)} * v[n];
    }
    return FockVector(std::move(out));
}

FockVector subtract(const FockVector &a, const FockVector &b) {
    require_same_cutoff(a, b);
    std::vector<Complex> out(a.size());
    for (std::size_t n = 0; n < a.size(); ++n) {
        out[n] = a[n] - b[n];
    }
    return FockVector(std::move(out));
}

}  // namespace nlaphase
