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

#ifndef SQEC_LAYOUT_H
#define SQEC_LAYOUT_H

#include <optional>
#include <string>
#include <vector>

#include "sqec/codes.h"
#include "sqec/gf2.h"

namespace sqec {

/// Nonzero diagonals of a biadjacency matrix. Entry (i, j) lies on offset j - i:
/// shifting the data rail by m aligns ancilla i with data qubit i + m.
struct DiagonalDecomposition {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<long> offsets;
    /// masks[k] has one bit per row: bit i set when (i, i + offsets[k]) is 1.
    std::vector<BitVector> masks;
};

DiagonalDecomposition diagonals(const BitMatrix &h);
BitMatrix reconstruct(const DiagonalDecomposition &dec);

/// One shuttle followed by one interaction layer.
struct ShuttleStep {
    long move = 0;
    /// Cumulative rail offset after the move.
    long offset = 0;
    /// Check types interacting in this layer.
    bool z_active = false;
    bool x_active = false;
    /// Plaquette corner served by each type (surface-code schedules only).
    std::optional<Corner> z_corner;
    std::optional<Corner> x_corner;
    /// (ancilla row, data column) pairs; each satisfies column - row = offset.
    std::vector<std::pair<size_t, size_t>> pairs;
    /// Appended to bring the rail back to its start (not an interaction layer).
    bool is_return = false;
};

struct ShuttleSchedule {
    std::vector<ShuttleStep> steps;
    size_t n_shuttles = 0;
    size_t total_distance = 0;
};

enum class SchedulePolicy { XThenZ, Interleaved };

/// Recomputes n_shuttles and total_distance from the steps.
void finalize_schedule(ShuttleSchedule &s);

/// Sweeps the Z-check diagonals in ascending offset order, then the X-check
/// diagonals in descending order, then returns to offset 0. With the
/// interleaved policy every offset is visited once in ascending order. An
/// empty row_types treats every row as a Z check.
ShuttleSchedule schedule_from_diagonals(const BitMatrix &h, const std::vector<CheckType> &row_types,
                                        SchedulePolicy policy = SchedulePolicy::XThenZ);

/// Four-step-per-round surface code schedule with staggered X checks.
/// Offsets are relative to each check's south-west corner, with stride d.
ShuttleSchedule surface_cycle_schedule(size_t d, size_t rounds);
/// Per-round increments when the logical ancilla bus is interleaved (4d).
size_t region_interleaved_distance(size_t d);
/// Per-round increments for a single patch (2d + 2).
size_t single_patch_distance(size_t d);

/// Gate times per Fig. 11 style labels: a..d are the Z ancilla's NW, NE, SW,
/// SE interaction times, e..h the X ancilla's NW, NE, SW, SE times.
struct OrderingAssignment {
    int a, b, c, d, e, f, g, h;
    int s = 4;
    bool operator==(const OrderingAssignment &) const = default;
};

struct OrderingReport {
    bool a1 = false;
    bool a2 = false;
    bool a3 = false;
    bool valid() const {
        return a1 && a2 && a3;
    }
    std::vector<std::string> violations() const;
};

OrderingReport check_ordering(const OrderingAssignment &o);
std::vector<OrderingAssignment> search_orderings(int s, int max_step);
/// The assignment used by the surface cycle synthesizer.
OrderingAssignment default_ordering();

/// Hypergraph product with a repetition seed, rearranged to banded form.
struct HgpArrangement {
    /// New data position j holds original data column data_perm[j].
    std::vector<size_t> data_perm;
    /// New ancilla position i holds (type, original row).
    std::vector<std::pair<CheckType, size_t>> rows;
    BitMatrix h;
    long min_offset = 0;
    long max_offset = 0;
    long band_width() const {
        return max_offset - min_offset;
    }
    std::vector<CheckType> row_types() const;
};

HgpArrangement rearrange_hgp(const CssCode &code, const ClassicalCode &a, const ClassicalCode &b);

/// Stacked biadjacency [Hx; Hz] with row types, the layout used for generic codes.
struct StackedLayout {
    BitMatrix h;
    std::vector<std::pair<CheckType, size_t>> rows;
    std::vector<CheckType> row_types() const;
};
StackedLayout stacked_layout(const CssCode &code);

/// Square diagonal form of a planar patch: ancilla sites and data sites on a
/// common index line, padded so that only four diagonals are nonzero.
struct SquareForm {
    size_t size = 0;
    size_t stride = 0;
    std::vector<size_t> data_site;
    /// Site of each PlanarCheck, in PlanarLayout order.
    std::vector<size_t> check_site;
    BitMatrix h;
    size_t padding_rows() const;
};
SquareForm planar_square_form(const CssCode &code);

}  // namespace sqec

#endif
