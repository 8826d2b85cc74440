// Copyright 2026 The sqec Authors
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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sqec/analysis.h"

using namespace sqec;

namespace {

constexpr double kZ = 1.959963984540054;

// A Wilson bound p solves (phat - p)^2 = z^2 p (1 - p) / n.
double wilson_residual(double phat, double p, double n) {
    return (phat - p) * (phat - p) - kZ * kZ * p * (1 - p) / n;
}

}  // namespace

TEST(analysis, wilson_interval_examples) {
    RatePoint r0 = logical_rate(0, 10000);
    EXPECT_EQ(r0.p_L, 0);
    EXPECT_EQ(r0.ci_low, 0);
    EXPECT_NEAR(r0.ci_high, kZ * kZ / (10000 + kZ * kZ), 1e-15);

    RatePoint r1 = logical_rate(100, 10000);
    EXPECT_DOUBLE_EQ(r1.p_L, 0.01);
    EXPECT_LT(r1.ci_low, 0.01);
    EXPECT_GT(r1.ci_high, 0.01);
    EXPECT_NEAR(wilson_residual(0.01, r1.ci_low, 1e4), 0, 1e-15);
    EXPECT_NEAR(wilson_residual(0.01, r1.ci_high, 1e4), 0, 1e-15);
    EXPECT_NEAR(r1.ci_low, 0.00822, 5e-5);
    EXPECT_NEAR(r1.ci_high, 0.01216, 5e-5);

    RatePoint r2 = logical_rate(10000, 10000);
    EXPECT_EQ(r2.p_L, 1);
    EXPECT_EQ(r2.ci_high, 1);
    EXPECT_NEAR(r2.ci_low, 10000 / (10000 + kZ * kZ), 1e-12);
}

TEST(analysis, wilson_bounds_solve_quadratic) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; t++) {
        size_t n = 1 + rng() % 100000;
        size_t f = rng() % (n + 1);
        RatePoint r = logical_rate(f, n);
        double ph = (double)f / (double)n;
        EXPECT_LE(r.ci_low, ph);
        EXPECT_GE(r.ci_high, ph);
        if (f > 0) {
            EXPECT_NEAR(wilson_residual(ph, r.ci_low, (double)n), 0, 1e-12);
        }
        if (f < n) {
            EXPECT_NEAR(wilson_residual(ph, r.ci_high, (double)n), 0, 1e-12);
        }
    }
    EXPECT_THROW(logical_rate(0, 0), std::invalid_argument);
    EXPECT_THROW(logical_rate(5, 4), std::invalid_argument);
}

TEST(analysis, per_round_rate_inverts_and_is_monotone) {
    double prev = -1;
    for (double P : {0.0, 1e-12, 1e-8, 1e-4, 0.01, 0.3, 0.9, 0.999}) {
        for (size_t k : {1, 3, 28}) {
            for (size_t d : {3, 8, 13}) {
                double r = per_round_per_qubit(P, k, d);
                EXPECT_NEAR(1 - std::pow(1 - r, (double)(k * d)), P, 1e-12 + 1e-9 * P);
            }
        }
        double r = per_round_per_qubit(P, 3, 8);
        EXPECT_GT(r, prev);
        prev = r;
    }
    // tiny rates keep their precision
    EXPECT_NEAR(per_round_per_qubit(3e-15, 1, 3) / 1e-15, 1.0, 1e-9);
    EXPECT_EQ(per_round_per_qubit(1, 2, 2), 1);
    EXPECT_THROW(per_round_per_qubit(-0.1, 1, 1), std::invalid_argument);
    EXPECT_THROW(per_round_per_qubit(0.1, 0, 1), std::invalid_argument);
}

TEST(analysis, fit_recovers_synthetic_curve) {
    FitResult truth;
    truth.A = 0.2;
    truth.alpha = 0.12;
    truth.beta = 0.004;
    truth.gamma = 0.55;
    truth.delta = 0.4;
    std::vector<std::pair<double, double>> pts;
    for (double d = 3; d <= 15; d += 2) {
        pts.emplace_back(d, truth.predict(d));
    }
    FitResult f = fit_trial(pts);
    for (const auto &[d, p] : pts) {
        EXPECT_NEAR(f.predict(d) / p, 1.0, 0.01) << "d=" << d;
    }
    EXPECT_EQ(f.lo_d, 3);
    EXPECT_EQ(f.hi_d, 15);
    EXPECT_LT(f.residual, 1e-6);
}

TEST(analysis, fit_with_noise_stays_close) {
    FitResult truth;
    truth.A = 0.05;
    truth.alpha = 0.2;
    truth.beta = 0.002;
    truth.gamma = 0.5;
    truth.delta = 0;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n(0, 0.05);
    std::vector<std::pair<double, double>> pts;
    for (double d = 3; d <= 13; d += 2) {
        pts.emplace_back(d, truth.predict(d) * std::exp(n(rng)));
    }
    FitResult f = fit_trial(pts);
    for (double d = 3; d <= 13; d += 2) {
        EXPECT_NEAR(std::log(f.predict(d) / truth.predict(d)), 0, 0.15) << d;
    }
}

TEST(analysis, fit_monotone_and_constant_inputs) {
    std::vector<std::pair<double, double>> dec;
    for (double d = 3; d <= 11; d += 2) {
        dec.emplace_back(d, 0.01 * std::pow(0.3, (d - 3) / 2));
    }
    FitResult f = fit_trial(dec);
    for (double d = 3; d < 11; d += 0.5) {
        EXPECT_GT(f.predict(d), f.predict(d + 0.5));
    }
    std::vector<std::pair<double, double>> flat;
    for (double d = 3; d <= 11; d += 2) {
        flat.emplace_back(d, 1e-3);
    }
    FitResult g = fit_trial(flat);
    for (double d = 3; d <= 11; d += 2) {
        EXPECT_NEAR(g.predict(d) / 1e-3, 1, 0.01);
    }
}

TEST(analysis, fit_rejects_degenerate_input) {
    std::vector<std::pair<double, double>> few = {{3, 1e-2}, {5, 1e-3}, {7, 1e-4}, {9, 1e-5}};
    EXPECT_THROW(fit_trial(few), std::invalid_argument);
    // five points but only three distances
    std::vector<std::pair<double, double>> narrow = {{3, 1e-2}, {3, 1.1e-2}, {5, 1e-3}, {5, 1.2e-3}, {7, 1e-4}};
    EXPECT_THROW(fit_trial(narrow), std::invalid_argument);
    // zero-failure points are dropped before counting
    std::vector<std::pair<double, double>> zeros = {{3, 1e-2}, {5, 1e-3}, {7, 1e-4}, {9, 0}, {11, 0}};
    EXPECT_THROW(fit_trial(zeros), std::invalid_argument);
}

TEST(analysis, select_distance_is_smallest_passing_odd_distance) {
    FitResult f;
    f.A = 0.03;
    f.alpha = 0.1;
    f.beta = 0.001;
    f.gamma = 0.5;
    f.delta = 0;
    for (double target : {1e-2, 1e-4, 1e-9, 3e-13, 1e-20}) {
        auto d = select_distance(f, target);
        ASSERT_TRUE(d.has_value());
        EXPECT_EQ(*d % 2, 1u);
        EXPECT_LE(f.predict((double)*d), target);
        if (*d > 3) {
            EXPECT_GT(f.predict((double)*d - 2), target);
        }
    }
    // a curve that turns upward never reaches a tiny target
    FitResult up = f;
    up.beta = 0.05;
    EXPECT_FALSE(select_distance(up, 1e-30).has_value());
}

TEST(analysis, nisq_resources) {
    ResourceReport r = resource_estimate(Scenario::NisqBeating, default_resource_config(Scenario::NisqBeating), {});
    EXPECT_EQ(r.patches, 130u);
    EXPECT_EQ(r.distance, 9u);
    EXPECT_EQ(r.data_qubits, 130.0 * 2 * 81);
    EXPECT_NEAR(r.data_qubits / 2e4, 1, 0.06);
    // p_sh = 4 d * 2 l_c l_dd / (v T2*)^2 at d = 9
    EXPECT_NEAR(r.p_sh, 36 * 1.5e-6, 1e-15);
    EXPECT_NEAR(r.p_mag, 1.054e-3, 1e-12);
    EXPECT_NEAR(r.distilled_15_to_1, 35 * std::pow(1.054e-3, 3), 1e-18);
    EXPECT_LT(r.distilled_15_to_1, 1e-4);
}

TEST(analysis, hubbard_resources) {
    ResourceConfig cfg = default_resource_config(Scenario::Hubbard6x6);
    EXPECT_THROW(resource_estimate(Scenario::Hubbard6x6, cfg, {}), std::invalid_argument);
    cfg.distance = 36;
    ResourceReport r = resource_estimate(Scenario::Hubbard6x6, cfg, {});
    EXPECT_EQ(r.patches, 288u);
    EXPECT_NEAR(r.target_p_L, 0.1 / (288 * 10.27e8), 1e-25);
    EXPECT_NEAR(r.target_p_L, 3e-13, 0.5e-13);
    EXPECT_EQ(r.physical_qubits, 1492992.0);
    EXPECT_NEAR(r.physical_qubits / 1.4e6, 1, 0.1);
    EXPECT_NEAR(r.cycles, 10.27 * 36 * 1e8, 1);
    double days = r.seconds / 86400;
    EXPECT_GT(days, 3.5);
    EXPECT_LT(days, 4.5);
    EXPECT_NEAR(r.p_sh, 4 * 36 * 1.5e-6, 1e-15);
    EXPECT_LT(r.p_mag, 1.22e-3);
    EXPECT_LT(r.distilled_116_to_12, 1e-10);

    // with a fit the distance comes from the curve
    FitResult f;
    f.A = 0.03;
    f.alpha = 0.1;
    f.beta = 0.001;
    f.gamma = 0.5;
    f.delta = 0;
    ResourceConfig c2 = default_resource_config(Scenario::Hubbard6x6);
    ResourceReport r2 = resource_estimate(Scenario::Hubbard6x6, c2, f);
    EXPECT_EQ(r2.distance, *select_distance(f, r2.target_p_L));
    FitResult up = f;
    up.beta = 0.05;
    ResourceReport r3 = resource_estimate(Scenario::Hubbard6x6, c2, up);
    EXPECT_FALSE(r3.distance_reachable);
}
