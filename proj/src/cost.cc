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

#include "nlaphase/cost.h"

#include <algorithm>
#include <cmath>

#include "nlaphase/errors.h"

namespace nlaphase {

namespace {

constexpr double kTieTolerance = 1e-12;

}  // namespace

void CostParams::validate() const {
    for (double c : {x, y, z}) {
        if (!std::isfinite(c) || c < 0) {
            throw InvalidArgument("costs x, y, z must be finite and >= 0");
        }
    }
    if (!std::isfinite(epsilon) || epsilon <= 0) {
        throw InvalidArgument("epsilon must be finite and > 0");
    }
}

double cost_direct(const CostParams &params, double j_alpha) {
    params.validate();
    if (!(j_alpha > 0)) {
        throw InvalidArgument("j_alpha must be > 0");
    }
    return params.epsilon * (params.x + params.y) / j_alpha;
}

double cost_postselect(const CostParams &params, double j_s, double p_s) {
    params.validate();
    if (!(p_s > 0 && p_s <= 1)) {
        throw InvalidArgument("p_s must lie in (0, 1]");
    }
    if (!(j_s > 0)) {
        throw InvalidArgument("j_s must be > 0");
    }
    return params.epsilon * (params.x + params.z + p_s * params.y) / (p_s * j_s);
}

double breakeven_y(double x, double z, double j_alpha, double j_s, double p_s) {
    if (!(p_s > 0 && p_s <= 1) || !(j_alpha > 0)) {
        throw InvalidArgument("breakeven needs p_s in (0, 1] and j_alpha > 0");
    }
    if (!(j_s > j_alpha)) {
        throw NoBreakeven("j_s <= j_alpha: post-selection never becomes cheaper");
    }
    return ((j_alpha - p_s * j_s) * x + j_alpha * z) / (p_s * (j_s - j_alpha));
}

std::string_view strategy_name(Strategy s) {
    return s == Strategy::kDirect ? "direct" : "postselect";
}

StrategyRecommendation recommend_strategy(const CostParams &params,
                                          const FisherBreakdown &breakdown) {
    StrategyRecommendation rec;
    rec.cost_direct = cost_direct(params, breakdown.j_alpha);
    rec.cost_postselect = cost_postselect(params, breakdown.j_s, breakdown.p_s);
    if (breakdown.j_s > breakdown.j_alpha) {
        rec.breakeven_y =
            breakeven_y(params.x, params.z, breakdown.j_alpha, breakdown.j_s, breakdown.p_s);
        // Costs within rounding of each other count as a tie.
        const double slack = kTieTolerance * std::max(rec.cost_direct, rec.cost_postselect);
        if (rec.cost_postselect < rec.cost_direct - slack) {
            rec.strategy = Strategy::kPostselect;
        }
    }
    return rec;
}

}  // namespace nlaphase
