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

#ifndef SQEC_SAMPLER_H
#define SQEC_SAMPLER_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sqec/noise.h"

namespace sqec {

/// Simulation-level circuit: each singlet-triplet pair becomes one qubit
/// initialised and measured in Z, and a CZ onto a pair becomes a CNOT onto it.
enum class LOpType : uint8_t { R, M, H, S, CZ, CNOT };

struct LoweredOp {
    LOpType type;
    uint32_t a;
    uint32_t b = 0;
    /// Measurement record of M.
    uint32_t record = 0;
};

struct LoweredCircuit {
    size_t n_qubits = 0;
    /// Circuit qubit -> lowered qubit; both spins of a pair share one.
    std::vector<uint32_t> index;
    std::vector<std::vector<LoweredOp>> layers;
    size_t n_measurements = 0;
};

LoweredCircuit lower(const Circuit &c);

struct Fault {
    double p;
    std::vector<uint32_t> detectors;
    std::vector<uint32_t> observables;
};

/// One Pauli term of one noise channel. For single-qubit channels `pauli`
/// holds x | z << 1, for two-qubit channels x0 | z0 << 1 | x1 << 2 | z1 << 3.
struct FaultSource {
    uint32_t channel;
    uint8_t pauli;
};

struct DetectorErrorModel {
    size_t n_detectors = 0;
    size_t n_observables = 0;
    std::vector<Fault> faults;
    /// Contributing channel terms for each fault; empty when not tracked.
    std::vector<std::vector<FaultSource>> provenance;
    /// Circuit detector / observable index of each model detector / observable.
    std::vector<uint32_t> detector_origin;
    std::vector<uint32_t> observable_origin;

    /// Parity-check matrix (detectors x faults).
    BitMatrix check_matrix() const;
    BitMatrix observable_matrix() const;
    std::vector<double> priors() const;
};

struct DemOptions {
    /// Keep detectors and observables of both check types.
    bool all_detectors = false;
    bool provenance = true;
};

/// Propagates every Pauli term of every channel to the detectors and
/// observables it flips. Unless all_detectors is set, only detectors and
/// observables of the type that sees the experiment's tracked errors are kept.
DetectorErrorModel build_dem(const NoisyCircuit &nc, Experiment exp, const DemOptions &opts = {});
DetectorErrorModel build_dem(const NoisyCircuit &nc, const DemOptions &opts = {});

/// Combined probability of two independent flips.
inline double xor_prob(double p, double q) {
    return p + q - 2 * p * q;
}

/// Forward propagation of a single Pauli term through the lowered circuit.
/// Returns the flipped measurement records.
std::vector<uint32_t> propagate_forward(const LoweredCircuit &lc, const Channel &ch, uint8_t pauli);

/// Flipped detector and observable indices (circuit numbering) for records.
void records_to_signature(const Circuit &c, const std::vector<uint32_t> &records, std::vector<uint32_t> &detectors,
                          std::vector<uint32_t> &observables);

struct SampleBatch {
    size_t shots = 0;
    size_t n_detectors = 0;
    size_t n_observables = 0;
    uint64_t seed = 0;
    std::vector<BitVector> syndromes;
    std::vector<BitVector> observable_flips;

    bool operator==(const SampleBatch &o) const;
};

/// Worker count from SQEC_WORKERS, else the hardware concurrency.
size_t default_workers();

/// Independent Bernoulli draw of every fault in every shot. Each shot has its
/// own random stream derived from (seed, shot index), so the output does not
/// depend on the number of workers. Shot s of the batch uses stream
/// first_shot + s, so a long run can be split into chunks.
SampleBatch sample(const DetectorErrorModel &dem, size_t shots, uint64_t seed, size_t workers = 0,
                   uint64_t first_shot = 0);

/// XOR of the listed faults' signatures.
std::pair<BitVector, BitVector> inject_and_check(const DetectorErrorModel &dem, const std::vector<size_t> &faults);

void write_dem(std::ostream &out, const DetectorErrorModel &dem);
DetectorErrorModel read_dem(std::istream &in);

/// Binary batch: 8-byte header (uint16 magic, uint16 detectors, uint32 shots)
/// followed by one byte-aligned little-endian bit row per shot holding the
/// detectors then the observables.
void write_batch(std::ostream &out, const SampleBatch &b);
SampleBatch read_batch(std::istream &in, size_t n_observables);

}  // namespace sqec

#endif
