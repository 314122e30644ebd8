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

#ifndef NLAPHASE_MONTECARLO_H
#define NLAPHASE_MONTECARLO_H

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "nlaphase/estimator.h"

namespace nlaphase {

struct SimConfig {
    double r = 0.25;
    double theta_true = 0.01;
    double gain = 2.0;
    int n0 = 2;
    std::int64_t m = 1000;
    std::int64_t runs = 100000;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Result of evaluating an estimator over many runs.
///
/// precision = 1 / (m * mse). stderr_precision comes from the sample
/// variance of the squared errors through the delta method. When mse is
/// exactly zero, precision is +infinity and its stderr is zero.
struct PrecisionReport {
    double mse = 0;
    double precision = 0;
    double stderr_precision = 0;
    std::int64_t runs_used = 0;
    double mean_estimate = 0;
    double variance = 0;  ///< sample variance of the estimates
};

struct SimulationResult {
    PrecisionReport report;
    std::int64_t runs_dropped = 0;  ///< runs with no informative counts
    /// Mean heralded-success fraction over all runs; 1 for the direct experiment.
    double success_fraction = 1;
    double success_fraction_stderr = 0;
};

using RandomStream = std::mt19937_64;

/// Stream for one run: splitmix64 applied to seed + (run + 1) * golden
/// gamma. Depends only on (seed, run), never on scheduling.
RandomStream run_stream(std::uint64_t seed, std::uint64_t run);

/// Multinomial draw as a chain of conditional binomials. Zero-probability
/// categories consume no randomness; the last positive category takes the
/// remainder.
std::vector<std::int64_t> sample_multinomial(std::span<const double> probs, std::int64_t m,
                                             RandomStream &stream);

PrecisionReport precision_from_samples(std::span<const double> estimates, double theta_true,
                                       std::int64_t m);

/// Runs may be split across `workers` threads; output does not depend on it.
SimulationResult simulate_direct(const SimConfig &config, unsigned workers = 1);
SimulationResult simulate_nla(const SimConfig &config, unsigned workers = 1);

}  // namespace nlaphase

#endif  // NLAPHASE_MONTECARLO_H
