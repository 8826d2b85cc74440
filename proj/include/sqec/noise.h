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

#ifndef SQEC_NOISE_H
#define SQEC_NOISE_H

#include <cstdint>
#include <limits>
#include <vector>

#include "sqec/circuit.h"

namespace sqec {

struct NoiseParams {
    /// Gate, initialisation and measurement error probability.
    double p = 0.0;
    /// Depolarising probability per idle qubit per interaction layer.
    double p_idle = 0.0;
    double T2_star = std::numeric_limits<double>::infinity();
    double T2 = std::numeric_limits<double>::infinity();
    double T_gate = 0.0;
    double v = 10.0;
    double l_c = 100e-9;
    double l_dd = 300e-9;
    /// Shuttle increments per cycle.
    double shuttle_multiplier = 0.0;

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

/// Dephasing probability of a single one-pitch shuttle.
double p_shuttle_increment(const NoiseParams &np);
/// Per-cycle dephasing, using np.shuttle_multiplier increments.
double p_sh_cycle(const NoiseParams &np);
/// Per-cycle dephasing for a region-interleaved distance-d patch (4d increments).
double p_sh_cycle(const NoiseParams &np, size_t d);
double p_idle_from_times(double T_gate, double T2);

enum class ChannelType : uint8_t { DephaseZ, Depolarize1, Depolarize2, MeasFlip };

const char *channel_name(ChannelType t);

struct Channel {
    ChannelType type;
    double p;
    size_t layer;
    /// True when the channel acts before the layer, otherwise after it.
    bool before = false;
    /// Effective qubits (the first spin of a pair stands for the pair).
    std::vector<uint32_t> qubits;
    /// Measurement record flipped by MeasFlip.
    uint32_t record = 0;
};

struct NoisyCircuit {
    Circuit base;
    NoiseParams params;
    std::vector<Channel> channels;
};

/// The first spin of every pair, in qubit order, plus every data qubit.
std::vector<uint32_t> effective_qubits(const Circuit &c);

NoisyCircuit annotate(const Circuit &c, const NoiseParams &np);

}  // namespace sqec

#endif
