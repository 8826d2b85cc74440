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


#ifndef SQEC_EXPERIMENT_H
#define SQEC_EXPERIMENT_H

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqec/analysis.h"
#include "sqec/circuit.h"
#include "sqec/codes.h"
#include "sqec/layout.h"
#include "sqec/noise.h"

namespace sqec {

enum class CodeFamily { Rotated, Wide, Hgp, Generic };

struct CodeBundle {
    std::string spec;
    CodeFamily family = CodeFamily::Rotated;
    CssCode code;
    /// Nominal distance, also the default number of rounds.
    size_t distance = 0;
    /// Linear layout and sweep for the non-planar families.
    std::optional<LinearLayout> layout;
    std::optional<ShuttleSchedule> schedule;
    long band_width = 0;
    /// Shuttle increments per cycle.
    size_t shuttle_multiplier = 0;

    bool is_surface() const {
        return family == CodeFamily::Rotated || family == CodeFamily::Wide;
    }
};

/// Accepted specs: rsc-dN, wide-dN, hgp-234-3-8, gb-a2, or a path to a JSON
/// file with either {"l", "a", "b"} (generalised bicycle) or {"hx", "hz"}
/// (rows as 0/1 strings, or paths to plain-text matrix files). An optional
/// "d" field gives the nominal distance.
CodeBundle load_code(const std::string &spec);
std::vector<std::string> builtin_codes();

Circuit synth_memory(const CodeBundle &b, size_t rounds, Experiment exp);

class ConfigError : public std::runtime_error {
   public:
    ConfigError(const std::string &what, size_t line) : std::runtime_error(what), line_(line) {}
    /// 1-based line in the config text, 0 when unknown.
    size_t line() const {
        return line_;
    }

   private:
    size_t line_;
};

struct ExperimentConfig {
    std::string code;
    NoiseParams noise;
    /// p_idle as a fraction of p; overrides noise.p_idle when set.
    std::optional<double> p_idle_ratio;
    std::optional<size_t> rounds;
    size_t shots = 10000;
    uint64_t seed = 0;
    /// auto, mwpm or bposd.
    std::string decoder = "auto";
    Experiment experiment = Experiment::MemoryZErrors;
    size_t workers = 0;
    std::optional<std::string> output;
    /// Sweep axes (cartesian product, in this order): code, p, T2_star, p_idle_ratio.
    std::vector<std::string> sweep_code;
    std::vector<double> sweep_p;
    std::vector<double> sweep_T2_star;
    std::vector<double> sweep_p_idle_ratio;
};

/// Parses and validates a JSON config. Unknown keys and bad values raise
/// ConfigError carrying the line of the offending key when it can be found.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::string &path);
nlohmann::json config_to_json(const ExperimentConfig &cfg);

/// Effective noise for a code: shuttle multiplier, idle ratio and T2-derived
/// idle error filled in.
NoiseParams resolve_noise(const ExperimentConfig &cfg, const CodeBundle &b);

struct SimulationResult {
    std::string code;
    size_t n = 0, k = 0, d = 0, rounds = 0;
    std::string experiment;
    std::string decoder;
    NoiseParams noise;
    double p_sh = 0;
    size_t detectors = 0, faults = 0;
    uint64_t seed = 0;
    /// Whole-experiment failure rate.
    RatePoint rate;
    /// Per round per logical qubit, with the interval mapped through the same transform.
    double p_log = 0, p_log_low = 0, p_log_high = 0;
    double seconds = 0;
};

nlohmann::json result_to_json(const SimulationResult &r);

/// Synthesize, annotate, sample and decode one configuration.
SimulationResult simulate(const ExperimentConfig &cfg);

/// Runs every point of the sweep; point i uses a seed derived from (seed, i).
std::vector<SimulationResult> sweep(const ExperimentConfig &cfg);
uint64_t sweep_point_seed(uint64_t seed, size_t index);

void write_sweep_csv(std::ostream &out, const std::vector<SimulationResult> &rows);
/// (d, p_log) pairs from a sweep CSV, optionally restricted to one p value.
std::vector<std::pair<double, double>> read_sweep_points(std::istream &in, std::optional<double> p_filter = {});

}  // namespace sqec

#endif
