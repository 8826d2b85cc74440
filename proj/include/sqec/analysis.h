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

#ifndef SQEC_ANALYSIS_H
#define SQEC_ANALYSIS_H

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sqec {

struct RatePoint {
    size_t shots = 0;
    size_t failures = 0;
    double p_L = 0;
    double ci_low = 0;
    double ci_high = 0;
};

/// Point estimate with a 95% Wilson score interval.
RatePoint logical_rate(size_t failures, size_t shots);

/// Logical error rate per round per logical qubit: 1 - (1 - P_L)^(1/(k d)).
double per_round_per_qubit(double P_L, size_t k, size_t d);

struct FitResult {
    double A = 1, alpha = 0, beta = 0, gamma = 0, delta = 0;
    double residual = 0;
    double lo_d = 0, hi_d = 0;

    /// A (alpha + beta d)^(gamma d + delta).
    double predict(double d) const;
};

struct FitOptions {
    size_t restarts = 24;
    uint64_t seed = 1;
    size_t max_iterations = 20000;
    /// The base alpha + beta d must stay positive up to this distance.
    double domain_max = 99;
};

/// Least squares on log p_log with a derivative-free simplex and random
/// restarts. Needs at least 5 points with positive rates over 4 distances.
/// The curve is kept defined from the data up to opts.domain_max.
FitResult fit_trial(const std::vector<std::pair<double, double>> &points, const FitOptions &opts = {});

/// Smallest odd d (from 3) whose predicted rate is at most the target.
std::optional<size_t> select_distance(const FitResult &fit, double p_target, size_t cap = 99);

enum class Scenario { NisqBeating, Hubbard6x6 };

struct ResourceConfig {
    double p = 1e-3;
    /// Per-cycle shuttling dephasing at the chosen distance; computed from
    /// the noise parameters when negative.
    double p_sh = -1;
    double T2_star = 20e-6;
    double v = 10, l_c = 100e-9, l_dd = 300e-9;
    size_t logical_qubits = 0;
    size_t factory_patches = 0;
    double cycle_time = 10e-6;
    double t_gates = 1e8;
    /// Cycles per magic state: preparation plus consumption, in units of d.
    double cycles_per_state = 10.27;
    double failure_budget = 0.1;
    /// Fixed distance for the NISQ scenario.
    size_t distance = 9;
};

ResourceConfig default_resource_config(Scenario s);

struct ResourceReport {
    std::string scenario;
    size_t distance = 0;
    bool distance_reachable = true;
    double p_sh = 0;
    double p_mag = 0;
    double distilled_15_to_1 = 0;
    double distilled_116_to_12 = 0;
    size_t patches = 0;
    double data_qubits = 0;
    double physical_qubits = 0;
    double target_p_L = 0;
    double cycles = 0;
    double seconds = 0;
    std::vector<std::string> notes;
};

/// The fit is needed for the Hubbard scenario, which picks the distance.
ResourceReport resource_estimate(Scenario s, const ResourceConfig &cfg, const std::optional<FitResult> &fit);

}  // namespace sqec

#endif
