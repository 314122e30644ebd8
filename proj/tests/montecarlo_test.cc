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

#include "nlaphase/montecarlo.h"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "nlaphase/errors.h"
#include "nlaphase/fisher.h"

using namespace nlaphase;

namespace {

SimConfig small_config() {
    SimConfig c;
    c.runs = 20000;
    c.seed = 42;
    return c;
}

bool same_report(const PrecisionReport &a, const PrecisionReport &b) {
    return a.mse == b.mse && a.precision == b.precision &&
           a.stderr_precision == b.stderr_precision && a.runs_used == b.runs_used &&
           a.mean_estimate == b.mean_estimate;
}

}  // namespace

TEST_CASE("sample_multinomial") {
    SUBCASE("certain outcome") {
        RandomStream s = run_stream(1, 0);
        const double probs[] = {1.0, 0.0, 0.0};
        CHECK(sample_multinomial(probs, 100, s) == std::vector<std::int64_t>{100, 0, 0});
    }
    SUBCASE("counts sum to m") {
        RandomStream s = run_stream(3, 0);
        const double probs[] = {0.2, 0.0, 0.5, 0.3};
        for (int i = 0; i < 100; ++i) {
            const auto c = sample_multinomial(probs, 37, s);
            CHECK(c[0] + c[1] + c[2] + c[3] == 37);
            CHECK(c[1] == 0);
        }
    }
    SUBCASE("binomial mean") {
        const double probs[] = {0.5, 0.5};
        const std::int64_t m = 40;
        const int draws = 100000;
        double sum = 0;
        for (int i = 0; i < draws; ++i) {
            RandomStream s = run_stream(11, static_cast<std::uint64_t>(i));
            sum += static_cast<double>(sample_multinomial(probs, m, s)[0]);
        }
        const double se = std::sqrt(m * 0.25 / draws);
        CHECK(std::abs(sum / draws - m / 2.0) < 4 * se);
    }
    SUBCASE("same stream state, same counts") {
        const double probs[] = {0.3, 0.3, 0.4};
        RandomStream a = run_stream(99, 5);
        RandomStream b = run_stream(99, 5);
        CHECK(sample_multinomial(probs, 1000, a) == sample_multinomial(probs, 1000, b));
    }
    SUBCASE("invalid probabilities") {
        RandomStream s = run_stream(1, 0);
        const double negative[] = {1.2, -0.2};
        const double short_sum[] = {0.2, 0.2};
        CHECK_THROWS_AS(sample_multinomial(negative, 10, s), InvalidArgument);
        CHECK_THROWS_AS(sample_multinomial(short_sum, 10, s), InvalidArgument);
        const double ok[] = {1.0};
        CHECK_THROWS_AS(sample_multinomial(ok, 0, s), InvalidArgument);
    }
}

TEST_CASE("precision_from_samples") {
    SUBCASE("exact estimates give the infinite sentinel") {
        const std::vector<double> e(5, 0.01);
        const auto rep = precision_from_samples(e, 0.01, 1000);
        CHECK(rep.mse == 0.0);
        CHECK(std::isinf(rep.precision));
    }
    SUBCASE("symmetric errors") {
        const std::vector<double> e{0.01 + 0.125, 0.01 - 0.125};
        const auto rep = precision_from_samples(e, 0.01, 4);
        CHECK(rep.mse == doctest::Approx(0.125 * 0.125).epsilon(1e-14));
        CHECK(rep.precision == doctest::Approx(1.0 / (4 * 0.125 * 0.125)).epsilon(1e-14));
        CHECK(rep.runs_used == 2);
    }
    SUBCASE("mse includes bias") {
        const std::vector<double> biased{0.3, 0.5, 0.4, 0.6};
        const auto rep = precision_from_samples(biased, 0.0, 1);
        const double n = 4;
        CHECK(rep.mse >= rep.variance * (n - 1) / n);
        const std::vector<double> centred{-0.1, 0.1, -0.2, 0.2};
        const auto rep0 = precision_from_samples(centred, 0.0, 1);
        CHECK(rep0.mse == doctest::Approx(rep0.variance * (n - 1) / n).epsilon(1e-14));
    }
    SUBCASE("empty input") {
        CHECK_THROWS_AS(precision_from_samples({}, 0.0, 10), InvalidArgument);
    }
}

TEST_CASE("simulate_direct") {
    SUBCASE("unbiased at theta = 0") {
        SimConfig c = small_config();
        c.theta_true = 0;
        const auto res = simulate_direct(c);
        const double se = std::sqrt(res.report.variance / res.report.runs_used);
        CHECK(std::abs(res.report.mean_estimate) < 4 * se);
        CHECK(res.runs_dropped == 0);
    }
    SUBCASE("attains the bound") {
        const auto res = simulate_direct(small_config());
        const double normalized = res.report.precision / qfi_coherent(0.25);
        const double se = res.report.stderr_precision / qfi_coherent(0.25);
        CHECK(std::abs(normalized - 1.0) < 3 * se);
    }
    SUBCASE("stderr shrinks with the number of runs") {
        SimConfig c = small_config();
        const double s1 = simulate_direct(c).report.stderr_precision;
        c.runs *= 2;
        const double s2 = simulate_direct(c).report.stderr_precision;
        const double ratio = (s1 * s1) / (s2 * s2);
        CHECK(ratio >= 1.8);
        CHECK(ratio <= 2.2);
    }
    SUBCASE("independent of worker count") {
        const SimConfig c = small_config();
        const auto a = simulate_direct(c, 1);
        const auto b = simulate_direct(c, 7);
        CHECK(same_report(a.report, b.report));
    }
    SUBCASE("invalid config") {
        SimConfig c = small_config();
        c.runs = 0;
        CHECK_THROWS_AS(simulate_direct(c), InvalidArgument);
        c = small_config();
        c.gain = 0.5;
        CHECK_THROWS_AS(simulate_direct(c), InvalidArgument);
    }
}

TEST_CASE("simulate_nla") {
    SUBCASE("identity device matches the direct experiment") {
        SimConfig c = small_config();
        c.gain = 1.0;
        const auto nla = simulate_nla(c);
        const auto direct = simulate_direct(c);
        const double combined = std::hypot(nla.report.stderr_precision,
                                           direct.report.stderr_precision);
        CHECK(std::abs(nla.report.precision - direct.report.precision) <= 3 * combined);
        CHECK(nla.success_fraction == 1.0);
    }
    SUBCASE("amplifier loses precision") {
        const SimConfig c = small_config();
        CHECK(simulate_nla(c).report.precision < simulate_direct(c).report.precision);
    }
    SUBCASE("n0 = 1 uses only the success branch") {
        SimConfig c = small_config();
        c.n0 = 1;
        const auto nla = simulate_nla(c);
        CHECK(nla.report.precision > 0);
        CHECK(nla.report.precision < simulate_direct(c).report.precision);
    }
    SUBCASE("heralded fraction tracks p_s") {
        const SimConfig c = small_config();
        const auto nla = simulate_nla(c);
        const double p_s = success_probability(c.r, {c.gain, c.n0});
        CHECK(std::abs(nla.success_fraction - p_s) < 4 * nla.success_fraction_stderr);
    }
    SUBCASE("approaches the asymptotic information") {
        SimConfig c = small_config();
        c.runs = 100000;
        const auto nla = simulate_nla(c);
        const double expected = branch_breakdown(c.r, {c.gain, c.n0}).j_nla_asymptotic;
        CHECK(std::abs(nla.report.precision / expected - 1.0) < 0.05);
    }
    SUBCASE("independent of worker count") {
        const SimConfig c = small_config();
        CHECK(same_report(simulate_nla(c, 1).report, simulate_nla(c, 5).report));
    }
}
