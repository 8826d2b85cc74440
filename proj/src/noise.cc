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

#include "sqec/noise.h"

#include <cmath>
#include <stdexcept>

namespace sqec {

void NoiseParams::validate() const {
    auto prob = [](double x, const char *name) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
        }
    };
    auto positive = [](double x, const char *name) {
        if (!(x > 0.0)) {
            throw std::invalid_argument(std::string(name) + " must be positive");
        }
    };
    prob(p, "p");
    prob(p_idle, "p_idle");
    positive(T2_star, "T2_star");
    positive(T2, "T2");
    positive(v, "v");
    if (!(T_gate >= 0.0) || !(l_c >= 0.0) || !(l_dd >= 0.0) || !(shuttle_multiplier >= 0.0)) {
        throw std::invalid_argument("T_gate, l_c, l_dd and shuttle_multiplier must be non-negative");
    }
    prob(p_sh_cycle(*this), "shuttle dephasing per cycle");
}

double p_shuttle_increment(const NoiseParams &np) {
    double vt = np.v * np.T2_star;
    if (!(vt > 0.0)) {
        throw std::invalid_argument("v * T2_star must be positive");
    }
    if (std::isinf(vt)) {
        return 0.0;
    }
    return 2.0 * np.l_c * np.l_dd / (vt * vt);
}

double p_sh_cycle(const NoiseParams &np) {
    return np.shuttle_multiplier * p_shuttle_increment(np);
}

double p_sh_cycle(const NoiseParams &np, size_t d) {
    return 4.0 * (double)d * p_shuttle_increment(np);
}

double p_idle_from_times(double T_gate, double T2) {
    if (!(T2 > 0.0)) {
        throw std::invalid_argument("T2 must be positive");
    }
    return -std::expm1(-T_gate / T2);
}

const char *channel_name(ChannelType t) {
    switch (t) {
        case ChannelType::DephaseZ:
            return "DEPHASE_Z";
        case ChannelType::Depolarize1:
            return "DEPOLARIZE1";
        case ChannelType::Depolarize2:
            return "DEPOLARIZE2";
        case ChannelType::MeasFlip:
            return "MEAS_FLIP";
    }
    return "?";
}

std::vector<uint32_t> effective_qubits(const Circuit &c) {
    std::vector<uint32_t> out;
    for (uint32_t q = 0; q < c.qubits.size(); q++) {
        int partner = c.qubits[q].partner;
        if (partner < 0 || (uint32_t)partner > q) {
            out.push_back(q);
        }
    }
    return out;
}

NoisyCircuit annotate(const Circuit &c, const NoiseParams &np) {
    np.validate();
    NoisyCircuit nc{c, np, {}};
    double p_sh = p_sh_cycle(np);
    auto eff = effective_qubits(c);
    auto add1 = [&](ChannelType t, double p, size_t layer, uint32_t q, bool before = false) {
        nc.channels.push_back(Channel{t, p, layer, before, {q}, 0});
    };
    uint32_t rec = 0;
    for (size_t l = 0; l < c.layers.size(); l++) {
        const Layer &layer = c.layers[l];
        if (layer.tags & TAG_CYCLE_START) {
            for (uint32_t q : eff) {
                if (c.qubits[q].rail == Rail::Data) {
                    add1(ChannelType::DephaseZ, p_sh, l, q, true);
                }
            }
        }
        for (const Op &op : layer.ops) {
            switch (op.type) {
                case OpType::INIT_Z:
                case OpType::H:
                case OpType::S:
                case OpType::S_DAG:
                case OpType::TWIRL:
                    for (uint32_t q : op.targets) {
                        add1(ChannelType::Depolarize1, np.p, l, q);
                    }
                    break;
                case OpType::INIT_SINGLET:
                    for (size_t i = 0; i < op.targets.size(); i += 2) {
                        add1(ChannelType::Depolarize1, np.p, l, op.targets[i]);
                    }
                    break;
                case OpType::IDLE:
                    for (uint32_t q : op.targets) {
                        add1(ChannelType::Depolarize1, np.p_idle, l, q);
                    }
                    break;
                case OpType::H_SEMIGLOBAL:
                    for (uint32_t q : eff) {
                        if (c.qubits[q].rail == op.rail) {
                            add1(ChannelType::Depolarize1, np.p, l, q);
                        }
                    }
                    break;
                case OpType::CZ:
                case OpType::CNOT:
                    nc.channels.push_back(Channel{ChannelType::Depolarize2, np.p, l, false, op.targets, 0});
                    break;
                case OpType::MEAS_Z:
                    for (uint32_t q : op.targets) {
                        nc.channels.push_back(Channel{ChannelType::MeasFlip, np.p, l, true, {q}, rec++});
                    }
                    break;
                case OpType::MEAS_ST:
                    for (size_t i = 0; i < op.targets.size(); i += 2) {
                        nc.channels.push_back(Channel{ChannelType::MeasFlip, np.p, l, true, {op.targets[i]}, rec++});
                    }
                    break;
                case OpType::SHUTTLE:
                    break;
            }
        }
    }
    return nc;
}

}  // namespace sqec
