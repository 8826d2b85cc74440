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

#ifndef SQEC_CIRCUIT_H
#define SQEC_CIRCUIT_H

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sqec/codes.h"
#include "sqec/layout.h"

namespace sqec {

enum class OpType : uint8_t {
    INIT_Z,
    INIT_SINGLET,
    MEAS_Z,
    MEAS_ST,
    CZ,
    CNOT,
    H,
    H_SEMIGLOBAL,
    S,
    S_DAG,
    SHUTTLE,
    IDLE,
    TWIRL,
};

const char *op_name(OpType t);

enum class Rail : uint8_t { Data = 0, Ancilla = 1 };

enum LayerTag : uint32_t {
    TAG_SET1 = 1,
    TAG_SET2 = 2,
    TAG_CANCELLED_H = 4,
    TAG_TWIRL = 8,
    TAG_CYCLE_START = 16,
    TAG_RETURN = 32,
    TAG_BASIS = 64,
};

/// Memory experiment flavour. MemoryZErrors prepares |+> data, tracks Z-type
/// physical errors through the X checks and reports X logical flips.
enum class Experiment : uint8_t { MemoryZErrors, MemoryXErrors };

struct Op {
    OpType type;
    /// INIT_SINGLET/MEAS_ST take the two spins of a pair. CZ/CNOT take
    /// (first, second); for CZ between rails the data qubit comes first.
    /// H_SEMIGLOBAL and SHUTTLE take no targets.
    std::vector<uint32_t> targets;
    /// SHUTTLE increment.
    long offset = 0;
    /// H_SEMIGLOBAL rail.
    Rail rail = Rail::Data;
};

struct Layer {
    std::vector<Op> ops;
    uint32_t tags = 0;
};

struct QubitInfo {
    Rail rail;
    long site;
    /// Other spin of a singlet-triplet pair, or -1.
    int partner = -1;
};

struct Detector {
    CheckType type;
    /// Indices into the measurement record.
    std::vector<uint32_t> records;
};

struct Observable {
    CheckType type;
    std::vector<uint32_t> records;
};

struct Circuit {
    std::vector<QubitInfo> qubits;
    std::vector<Layer> layers;
    std::vector<Detector> detectors;
    std::vector<Observable> observables;
    size_t rounds = 0;
    Experiment experiment = Experiment::MemoryZErrors;

    uint32_t add_qubit(Rail rail, long site);
    /// Adds two spins at the same ancilla site; returns the first.
    uint32_t add_pair(long site);
    size_t num_measurements() const;
    size_t count_ops(OpType t) const;
    /// Rail offset after every layer.
    std::vector<long> cumulative_offsets() const;
};

void write_circuit(std::ostream &out, const Circuit &c);
Circuit read_circuit(std::istream &in);

struct Violation {
    size_t layer;
    std::string what;
};

/// Checks device constraints: no local Hadamards, cross-rail alignment of
/// every two-qubit gate, no two-qubit gate within a rail, measurements only
/// after initialisation.
std::vector<Violation> validate_constraints(const Circuit &c);

enum class TemplateKind { Z, X, Dislocation, Twist };

/// Stabiliser measurement fragment on `paulis.size()` data qubits (qubits
/// 0..k-1) and a singlet-triplet pair (qubits k, k+1). Z parity uses CZ onto
/// the first spin, X parity wraps CZ in semi-global Hadamards, Y parity adds
/// S^dagger/S around them. With cnot_z_parity the Z parity uses CNOT instead.
Circuit parity_template(const std::string &paulis, bool cnot_z_parity = false);
/// Z: "ZZZZ", X: "XXXX", dislocation: "XZ", twist: "XYZ".
Circuit stabiliser_template(TemplateKind kind);

/// Full memory experiment on a planar code (rotated or wide) using the
/// interleaved four-step schedule.
Circuit synth_surface_cycle(const CssCode &code, size_t rounds, Experiment exp = Experiment::MemoryZErrors);
Circuit synth_surface_cycle(size_t d, size_t rounds, bool wide, Experiment exp = Experiment::MemoryZErrors);

/// Linear layout for a generic CSS code: rows[i] is the check at ancilla site
/// i, data_site[q] the site of data qubit q.
struct LinearLayout {
    std::vector<std::pair<CheckType, size_t>> rows;
    std::vector<size_t> data_site;
    /// Biadjacency matrix in site coordinates.
    BitMatrix h;
};
LinearLayout linear_layout(const HgpArrangement &arr);
LinearLayout linear_layout(const StackedLayout &st);

/// Memory experiment where each round follows `schedule` (pairs in layout
/// site coordinates) between ancilla initialisation and measurement.
Circuit synth_qldpc_cycle(const CssCode &code, const LinearLayout &layout, const ShuttleSchedule &schedule, size_t rounds,
                          Experiment exp = Experiment::MemoryZErrors);

}  // namespace sqec

#endif
