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

#ifndef NLAPHASE_COST_H
#define NLAPHASE_COST_H

#include <optional>
#include <string_view>

#include "nlaphase/fisher.h"

namespace nlaphase {

/// Unit costs of acquiring a sample (x), measuring the estimator observable
/// on it (y) and running it through the amplifier (z). epsilon is the total
/// Fisher-information budget, so a strategy with per-sample information J
/// needs epsilon / J measured samples.
struct CostParams {
    double x = 1;
    double y = 0;
    double z = 0;
    double epsilon = 1;

    void validate() const;
};

/// epsilon (x + y) / j_alpha.
double cost_direct(const CostParams &params, double j_alpha);

/// Measure only heralded successes: epsilon / j_s measurements out of
/// epsilon / (p_s j_s) acquisitions, epsilon (x + z + p_s y) / (p_s j_s).
double cost_postselect(const CostParams &params, double j_s, double p_s);

/// Measurement cost y* at which both strategies cost the same,
///   [(j_alpha - p_s j_s) x + j_alpha z] / [p_s (j_s - j_alpha)].
/// Throws NoBreakeven when j_s <= j_alpha.
double breakeven_y(double x, double z, double j_alpha, double j_s, double p_s);

enum class Strategy { kDirect, kPostselect };

std::string_view strategy_name(Strategy s);

struct StrategyRecommendation {
    Strategy strategy = Strategy::kDirect;
    double cost_direct = 0;
    double cost_postselect = 0;
    std::optional<double> breakeven_y;  ///< absent when j_s <= j_alpha
};

/// Cheaper of the two strategies; ties go to direct.
StrategyRecommendation recommend_strategy(const CostParams &params,
                                          const FisherBreakdown &breakdown);

}  // namespace nlaphase

#endif  // NLAPHASE_COST_H
