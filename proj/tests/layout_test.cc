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

#include <random>

#include "gtest/gtest.h"

using namespace sqec;

TEST(layout, diagonals_examples) {
    BitMatrix h = BitMatrix::from_rows({"00001", "10000", "01000", "00100", "00010"});
    DiagonalDecomposition dh = diagonals(h);
    ASSERT_EQ(dh.offsets, (std::vector<long>{-1, 4}));
    BitMatrix hp = BitMatrix::from_rows({"01101", "00110", "11010", "01100", "00010"});
    ASSERT_EQ(diagonals(hp).offsets.size(), 5u);
    ASSERT_EQ(diagonals(BitMatrix::identity(6)).offsets, (std::vector<long>{0}));
}

TEST(layout, diagonals_roundtrip_random) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; t++) {
        size_t r = 1 + rng() % 20, c = 1 + rng() % 20;
        BitMatrix m(r, c);
        for (size_t i = 0; i < r; i++) {
            for (size_t j = 0; j < c; j++) {
                if (rng() % 5 == 0) {
                    m.set(i, j);
                }
            }
        }
        DiagonalDecomposition dec = diagonals(m);
        ASSERT_EQ(reconstruct(dec), m);
        ASSERT_TRUE(std::is_sorted(dec.offsets.begin(), dec.offsets.end()));
        ASSERT_EQ(std::adjacent_find(dec.offsets.begin(), dec.offsets.end()), dec.offsets.end());
    }
}

TEST(layout, rearrange_hgp_paper_code) {
    ClassicalCode a = repetition_code(8), b = appendix_b_code();
    CssCode code = hgp(a, b);
    HgpArrangement arr = rearrange_hgp(code, a, b);
    ASSERT_LE(arr.band_width(), 2 * 17);
    // Rows of the arranged matrix are the original checks under the column permutation.
    for (size_t r = 0; r < arr.rows.size(); r++) {
        const auto &[t, orig] = arr.rows[r];
        const BitMatrix &src = t == CheckType::X ? code.hx : code.hz;
        std::vector<size_t> got;
        for (size_t c : arr.h.row_support(r)) {
            got.push_back(arr.data_perm[c]);
        }
        std::sort(got.begin(), got.end());
        ASSERT_EQ(got, src.row_support(orig));
    }
    ASSERT_EQ(arr.rows.size(), code.hx.rows() + code.hz.rows());
    std::vector<size_t> perm = arr.data_perm;
    std::sort(perm.begin(), perm.end());
    for (size_t i = 0; i < perm.size(); i++) {
        ASSERT_EQ(perm[i], i);
    }
}

TEST(layout, rearrange_hgp_small_and_errors) {
    ClassicalCode r2 = repetition_code(2);
    HgpArrangement arr = rearrange_hgp(hgp(r2, r2), r2, r2);
    ASSERT_LE(arr.band_width(), 4);
    ClassicalCode b = appendix_b_code();
    ASSERT_THROW(rearrange_hgp(hgp(b, r2), b, r2), std::invalid_argument);
    ASSERT_THROW(rearrange_hgp(hgp(r2, r2), repetition_code(3), r2), std::invalid_argument);
}

TEST(layout, schedule_from_diagonals_examples) {
    ShuttleSchedule s0 = schedule_from_diagonals(BitMatrix::identity(4), {});
    ASSERT_EQ(s0.n_shuttles, 0u);
    ASSERT_EQ(s0.total_distance, 0u);
    BitMatrix h = BitMatrix::from_rows({"00001", "10000", "01000", "00100", "00010"});
    ShuttleSchedule s = schedule_from_diagonals(h, {});
    ASSERT_EQ(s.total_distance, 10u);
    ShuttleSchedule si = schedule_from_diagonals(h, {}, SchedulePolicy::Interleaved);
    ASSERT_EQ(si.total_distance, 10u);
}

TEST(layout, schedule_invariants) {
    ClassicalCode a = repetition_code(8), b = appendix_b_code();
    HgpArrangement arr = rearrange_hgp(hgp(a, b), a, b);
    for (auto policy : {SchedulePolicy::XThenZ, SchedulePolicy::Interleaved}) {
        ShuttleSchedule s = schedule_from_diagonals(arr.h, arr.row_types(), policy);
        long cum = 0;
        size_t dist = 0, shuttles = 0, pairs = 0;
        for (const auto &step : s.steps) {
            cum += step.move;
            ASSERT_EQ(cum, step.offset);
            dist += std::abs(step.move);
            shuttles += step.move != 0;
            for (const auto &[r, c] : step.pairs) {
                ASSERT_EQ((long)c - (long)r, step.offset);
                ASSERT_TRUE(arr.h.get(r, c));
            }
            pairs += step.pairs.size();
        }
        ASSERT_EQ(cum, 0);
        ASSERT_EQ(dist, s.total_distance);
        ASSERT_EQ(shuttles, s.n_shuttles);
        ASSERT_EQ(pairs, arr.h.nnz());
    }
}

TEST(layout, generalised_bicycle_distance_linear_in_l) {
    std::vector<size_t> dist, ndiag;
    for (size_t l : {7, 14, 28}) {
        CssCode gb = generalised_bicycle(l, {0, 1, 3}, {0, 2, 5});
        StackedLayout st = stacked_layout(gb);
        ShuttleSchedule s = schedule_from_diagonals(st.h, st.row_types());
        dist.push_back(s.total_distance);
        ndiag.push_back(diagonals(st.h).offsets.size());
    }
    // Constant diagonal count, shuttle distance linear in l.
    ASSERT_EQ(ndiag[0], ndiag[1]);
    ASSERT_EQ(ndiag[1], ndiag[2]);
    ASSERT_GT(dist[1], dist[0]);
    ASSERT_EQ(2 * (dist[1] - dist[0]), dist[2] - dist[1]);
}

TEST(layout, surface_cycle_schedule_formulas) {
    ShuttleSchedule s = surface_cycle_schedule(3, 1);
    std::vector<long> moves;
    for (const auto &st : s.steps) {
        if (st.move != 0) {
            moves.push_back(st.move);
        }
    }
    ASSERT_EQ(moves, (std::vector<long>{2, 1, -4, 1, 2}));
    ASSERT_EQ(s.n_shuttles, 5u);
    ASSERT_EQ(s.total_distance, 10u);
    ShuttleSchedule s9 = surface_cycle_schedule(9, 9);
    ASSERT_EQ(s9.n_shuttles, 37u);
    ASSERT_EQ(s9.total_distance, 188u);
    for (size_t d = 3; d <= 13; d += 2) {
        for (size_t r = 1; r <= 13; r++) {
            ShuttleSchedule x = surface_cycle_schedule(d, r);
            ASSERT_EQ(x.n_shuttles, 4 * r + 1);
            ASSERT_EQ(x.total_distance, r * (2 * d + 2) + d - 1);
            ASSERT_GE(x.n_shuttles, 4 * r);
            ASSERT_GE(x.total_distance, r * (2 * d + 2));
            // Each complete round returns the rail to its start.
            for (size_t k = 0; k < r; k++) {
                long sum = 0;
                for (size_t j = 1; j <= 4; j++) {
                    sum += x.steps[4 * k + j].move;
                }
                ASSERT_EQ(sum, 0);
            }
        }
    }
}

TEST(layout, region_interleaved_distance) {
    ASSERT_EQ(region_interleaved_distance(9), 36u);
    ASSERT_EQ(region_interleaved_distance(3), 12u);
    ASSERT_EQ(single_patch_distance(9), 20u);
}

TEST(layout, ordering_conditions) {
    OrderingAssignment fig = default_ordering();
    ASSERT_TRUE(check_ordering(fig).valid());
    OrderingAssignment swapped = fig;
    std::swap(swapped.b, swapped.d);
    OrderingReport r = check_ordering(swapped);
    ASSERT_FALSE(r.a3);
    ASSERT_FALSE(r.valid());
}

TEST(layout, ordering_search_matches_brute_force) {
    const int s = 4, max_step = 8;
    auto found = search_orderings(s, max_step);
    ASSERT_FALSE(found.empty());
    ASSERT_NE(std::find(found.begin(), found.end(), default_ordering()), found.end());
    size_t brute = 0;
    int v[8];
    for (long idx = 0; idx < (1L << 24); idx++) {
        long x = idx;
        for (int i = 0; i < 8; i++) {
            v[i] = 1 + (int)(x & 7);
            x >>= 3;
        }
        OrderingAssignment o{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], s};
        if (check_ordering(o).valid()) {
            brute++;
            ASSERT_NE(std::find(found.begin(), found.end(), o), found.end());
        }
    }
    ASSERT_EQ(brute, found.size());
}

TEST(layout, square_form_has_four_diagonals) {
    for (size_t d : {3, 5, 7, 9}) {
        CssCode c = rotated_surface_code(d);
        SquareForm sf = planar_square_form(c);
        ASSERT_EQ(sf.h.rows(), sf.h.cols());
        ASSERT_EQ(diagonals(sf.h).offsets.size(), 4u);
        ASSERT_EQ(sf.h.nnz(), c.hx.nnz() + c.hz.nnz());
        ASSERT_GT(sf.padding_rows(), 0u);
    }
}
