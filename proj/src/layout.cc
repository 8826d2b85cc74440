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

#include "sqec/layout.h"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace sqec {

DiagonalDecomposition diagonals(const BitMatrix &h) {
    std::map<long, BitVector> by_offset;
    for (const auto &[r, c] : h.entries()) {
        long m = (long)c - (long)r;
        auto it = by_offset.find(m);
        if (it == by_offset.end()) {
            it = by_offset.emplace(m, BitVector(h.rows())).first;
        }
        it->second.set(r);
    }
    DiagonalDecomposition dec;
    dec.rows = h.rows();
    dec.cols = h.cols();
    for (auto &[m, mask] : by_offset) {
        dec.offsets.push_back(m);
        dec.masks.push_back(std::move(mask));
    }
    return dec;
}

BitMatrix reconstruct(const DiagonalDecomposition &dec) {
    BitMatrix h(dec.rows, dec.cols);
    for (size_t k = 0; k < dec.offsets.size(); k++) {
        for (size_t r : dec.masks[k].ones()) {
            long c = (long)r + dec.offsets[k];
            if (c < 0 || c >= (long)dec.cols) {
                throw std::invalid_argument("diagonal entry outside the matrix");
            }
            h.set(r, (size_t)c);
        }
    }
    return h;
}

void finalize_schedule(ShuttleSchedule &s) {
    s.n_shuttles = 0;
    s.total_distance = 0;
    long offset = 0;
    for (auto &step : s.steps) {
        offset += step.move;
        if (offset != step.offset) {
            throw std::logic_error("schedule offsets inconsistent with moves");
        }
        if (step.move != 0) {
            s.n_shuttles++;
            s.total_distance += (size_t)std::abs(step.move);
        }
    }
}

ShuttleSchedule schedule_from_diagonals(const BitMatrix &h, const std::vector<CheckType> &row_types, SchedulePolicy policy) {
    if (!row_types.empty() && row_types.size() != h.rows()) {
        throw std::invalid_argument("row_types must have one entry per matrix row");
    }
    auto type_of = [&](size_t r) { return row_types.empty() ? CheckType::Z : row_types[r]; };
    // offset -> pairs, separately per type
    std::map<long, std::vector<std::pair<size_t, size_t>>> zmap, xmap;
    for (const auto &[r, c] : h.entries()) {
        long m = (long)c - (long)r;
        (type_of(r) == CheckType::Z ? zmap : xmap)[m].emplace_back(r, c);
    }
    ShuttleSchedule s;
    long cur = 0;
    auto visit = [&](long m, std::vector<std::pair<size_t, size_t>> pairs, bool z, bool x) {
        ShuttleStep step;
        step.move = m - cur;
        step.offset = m;
        step.z_active = z;
        step.x_active = x;
        step.pairs = std::move(pairs);
        s.steps.push_back(std::move(step));
        cur = m;
    };
    if (policy == SchedulePolicy::XThenZ) {
        for (auto &[m, pairs] : zmap) {
            visit(m, pairs, true, false);
        }
        for (auto it = xmap.rbegin(); it != xmap.rend(); ++it) {
            visit(it->first, it->second, false, true);
        }
    } else {
        std::set<long> all;
        for (auto &kv : zmap) {
            all.insert(kv.first);
        }
        for (auto &kv : xmap) {
            all.insert(kv.first);
        }
        for (long m : all) {
            std::vector<std::pair<size_t, size_t>> pairs;
            bool z = zmap.count(m), x = xmap.count(m);
            if (z) {
                pairs = zmap[m];
            }
            if (x) {
                pairs.insert(pairs.end(), xmap[m].begin(), xmap[m].end());
            }
            visit(m, pairs, z, x);
        }
    }
    if (cur != 0) {
        ShuttleStep back;
        back.move = -cur;
        back.offset = 0;
        back.is_return = true;
        s.steps.push_back(back);
    }
    finalize_schedule(s);
    return s;
}

namespace {

/// Offset of each corner relative to the south-west corner, for column-major
/// data indexing with the given column stride and row 0 at the top.
long corner_offset(Corner c, long stride) {
    switch (c) {
        case SW:
            return 0;
        case NE:
            return stride - 1;
        case SE:
            return stride;
        case NW:
            return -1;
    }
    return 0;
}

}  // namespace

ShuttleSchedule surface_cycle_schedule(size_t d, size_t rounds) {
    if (d < 3 || d % 2 == 0) {
        throw std::invalid_argument("surface cycle needs odd d >= 3");
    }
    if (rounds < 1) {
        throw std::invalid_argument("surface cycle needs at least one round");
    }
    // Z checks visit SW, NE, SE, NW at times 4r+1..4r+4; X checks visit SE, NW,
    // SW, NE at times 4r+3..4r+6, so they start two steps late.
    static const Corner order[4] = {SW, NE, SE, NW};
    ShuttleSchedule s;
    long cur = 0;
    size_t last = 4 * rounds + 2;
    for (size_t t = 1; t <= last; t++) {
        Corner corner = order[(t - 1) % 4];
        ShuttleStep step;
        step.offset = corner_offset(corner, (long)d);
        step.move = step.offset - cur;
        cur = step.offset;
        if (t <= 4 * rounds) {
            step.z_active = true;
            step.z_corner = corner;
        }
        if (t >= 3) {
            step.x_active = true;
            step.x_corner = corner;
        }
        s.steps.push_back(step);
    }
    finalize_schedule(s);
    return s;
}

size_t region_interleaved_distance(size_t d) {
    if (d < 3) {
        throw std::invalid_argument("distance must be at least 3");
    }
    return 4 * d;
}

size_t single_patch_distance(size_t d) {
    if (d < 3) {
        throw std::invalid_argument("distance must be at least 3");
    }
    return 2 * d + 2;
}

std::vector<std::string> OrderingReport::violations() const {
    std::vector<std::string> out;
    if (!a1) {
        out.push_back("A1");
    }
    if (!a2) {
        out.push_back("A2");
    }
    if (!a3) {
        out.push_back("A3");
    }
    return out;
}

OrderingReport check_ordering(const OrderingAssignment &o) {
    auto mod = [&](int x) { return ((x % o.s) + o.s) % o.s; };
    OrderingReport r;
    r.a1 = (o.b < o.e && o.d < o.g) || (o.b > o.e && o.d > o.g);
    r.a2 = mod(o.a) == mod(o.e) && mod(o.b) == mod(o.f) && mod(o.c) == mod(o.g) && mod(o.d) == mod(o.h);
    r.a3 = (o.c < o.b && o.b < o.d && o.d < o.a) && (o.h < o.e && o.e < o.g && o.g < o.f);
    return r;
}

std::vector<OrderingAssignment> search_orderings(int s, int max_step) {
    if (s < 1) {
        throw std::invalid_argument("shuttles per cycle must be positive");
    }
    std::vector<OrderingAssignment> out;
    auto congruent = [s](int x, int y) { return ((x - y) % s + s) % s == 0; };
    // Enumerate the Z chain c < b < d < a, then the X chain h < e < g < f
    // restricted by the congruences.
    for (int c = 1; c <= max_step; c++) {
        for (int b = c + 1; b <= max_step; b++) {
            for (int d = b + 1; d <= max_step; d++) {
                for (int a = d + 1; a <= max_step; a++) {
                    for (int h = 1; h <= max_step; h++) {
                        if (!congruent(h, d)) {
                            continue;
                        }
                        for (int e = h + 1; e <= max_step; e++) {
                            if (!congruent(e, a)) {
                                continue;
                            }
                            for (int g = e + 1; g <= max_step; g++) {
                                if (!congruent(g, c)) {
                                    continue;
                                }
                                for (int f = g + 1; f <= max_step; f++) {
                                    if (!congruent(f, b)) {
                                        continue;
                                    }
                                    OrderingAssignment o{a, b, c, d, e, f, g, h, s};
                                    if (check_ordering(o).valid()) {
                                        out.push_back(o);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

OrderingAssignment default_ordering() {
    // Z: SW=1, NE=2, SE=3, NW=4. X: SE=3, NW=4, SW=5, NE=6.
    return OrderingAssignment{4, 2, 1, 3, 4, 6, 5, 3, 4};
}

std::vector<CheckType> HgpArrangement::row_types() const {
    std::vector<CheckType> out;
    for (const auto &r : rows) {
        out.push_back(r.first);
    }
    return out;
}

HgpArrangement rearrange_hgp(const CssCode &code, const ClassicalCode &a, const ClassicalCode &b) {
    size_t na = a.h.cols(), ra = a.h.rows(), nb = b.h.cols(), rb = b.h.rows();
    if (ra + 1 != na || !(a.h == repetition_code(na).h)) {
        throw std::invalid_argument("rearrange_hgp requires a repetition-code first seed");
    }
    CssCode expect = hgp(a, b);
    if (!(code.hx == expect.hx) || !(code.hz == expect.hz)) {
        throw std::invalid_argument("code was not built as hgp(a, b)");
    }
    // Data columns: V_i = block i of the A (x) I part (nb columns), C_j = block j
    // of the I (x) B^T part (rb columns). Order V_0 C_0 V_1 C_1 ... V_{na-1}.
    HgpArrangement out;
    for (size_t i = 0; i < na; i++) {
        for (size_t q = 0; q < nb; q++) {
            out.data_perm.push_back(i * nb + q);
        }
        if (i < ra) {
            for (size_t q = 0; q < rb; q++) {
                out.data_perm.push_back(na * nb + i * rb + q);
            }
        }
    }
    // Checks: Hz block i (rb rows) then Hx block i (nb rows), alternating.
    for (size_t i = 0; i < na; i++) {
        for (size_t q = 0; q < rb; q++) {
            out.rows.emplace_back(CheckType::Z, i * rb + q);
        }
        if (i < ra) {
            for (size_t q = 0; q < nb; q++) {
                out.rows.emplace_back(CheckType::X, i * nb + q);
            }
        }
    }
    BitMatrix h(out.rows.size(), code.n);
    std::vector<size_t> inv(code.n);
    for (size_t j = 0; j < code.n; j++) {
        inv[out.data_perm[j]] = j;
    }
    for (size_t r = 0; r < out.rows.size(); r++) {
        const auto &[t, orig] = out.rows[r];
        const BitMatrix &src = t == CheckType::X ? code.hx : code.hz;
        for (size_t c : src.row_support(orig)) {
            h.set(r, inv[c]);
        }
    }
    out.h = std::move(h);
    DiagonalDecomposition dec = diagonals(out.h);
    out.min_offset = dec.offsets.front();
    out.max_offset = dec.offsets.back();
    return out;
}

std::vector<CheckType> StackedLayout::row_types() const {
    std::vector<CheckType> out;
    for (const auto &r : rows) {
        out.push_back(r.first);
    }
    return out;
}

StackedLayout stacked_layout(const CssCode &code) {
    StackedLayout out;
    out.h = vstack(code.hx, code.hz);
    for (size_t r = 0; r < code.hx.rows(); r++) {
        out.rows.emplace_back(CheckType::X, r);
    }
    for (size_t r = 0; r < code.hz.rows(); r++) {
        out.rows.emplace_back(CheckType::Z, r);
    }
    return out;
}

size_t SquareForm::padding_rows() const {
    return size - check_site.size();
}

SquareForm planar_square_form(const CssCode &code) {
    if (!code.planar) {
        throw std::invalid_argument("square form requires a planar code");
    }
    const PlanarLayout &pl = *code.planar;
    long h = (long)pl.height;
    // Each check sits at the site of its (possibly virtual) south-west corner.
    // With stride h the bottom-boundary checks collide with the top-boundary
    // checks of the next column, so the data rail is padded by one empty site
    // per column when needed.
    for (long stride : {h, h + 1}) {
        std::vector<long> anchors;
        std::set<long> seen;
        bool collide = false;
        for (const auto &chk : pl.checks) {
            long a = (long)(chk.c) * stride + (chk.y + 1);
            collide |= !seen.insert(a).second;
            anchors.push_back(a);
        }
        if (collide) {
            continue;
        }
        long lo = std::min(0L, *std::min_element(anchors.begin(), anchors.end()));
        long hi = std::max(*std::max_element(anchors.begin(), anchors.end()), (long)(pl.width - 1) * stride + h - 1);
        SquareForm sf;
        sf.stride = (size_t)stride;
        sf.size = (size_t)(hi - lo + 1);
        sf.data_site.resize(code.n);
        for (size_t c = 0; c < pl.width; c++) {
            for (size_t y = 0; y < pl.height; y++) {
                sf.data_site[pl.data_index(y, c)] = (size_t)((long)c * stride + (long)y - lo);
            }
        }
        for (long a : anchors) {
            sf.check_site.push_back((size_t)(a - lo));
        }
        sf.h = BitMatrix(sf.size, sf.size);
        for (size_t i = 0; i < pl.checks.size(); i++) {
            for (int q : pl.checks[i].corners) {
                if (q >= 0) {
                    sf.h.set(sf.check_site[i], sf.data_site[(size_t)q]);
                }
            }
        }
        return sf;
    }
    throw std::logic_error("no collision-free square form");
}

}  // namespace sqec
