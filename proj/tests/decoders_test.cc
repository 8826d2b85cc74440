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

#include "sqec/decoders.h"

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "gtest/gtest.h"

using namespace sqec;

namespace {

DetectorErrorModel surface_dem(size_t d, bool wide, double p, Experiment exp = Experiment::MemoryZErrors) {
    NoiseParams np;
    np.p = p;
    np.p_idle = p / 10;
    np.T2_star = 20e-6;
    np.shuttle_multiplier = 4.0 * d;
    return build_dem(annotate(synth_surface_cycle(d, d, wide, exp), np));
}

/// Brute-force maximum weight matching: (cardinality, weight) of the best.
std::pair<size_t, int64_t> brute_matching(size_t n, const std::vector<std::tuple<size_t, size_t, int64_t>> &edges,
                                          bool maxcard) {
    std::pair<size_t, int64_t> best{0, 0};
    size_t m = edges.size();
    for (uint64_t mask = 0; mask < (uint64_t{1} << m); mask++) {
        std::vector<bool> used(n, false);
        bool ok = true;
        size_t card = 0;
        int64_t w = 0;
        for (size_t k = 0; k < m && ok; k++) {
            if (mask >> k & 1) {
                auto [i, j, wt] = edges[k];
                ok = !used[i] && !used[j];
                used[i] = used[j] = true;
                card++;
                w += wt;
            }
        }
        if (!ok) {
            continue;
        }
        std::pair<size_t, int64_t> cand = maxcard ? std::make_pair(card, w) : std::make_pair(size_t{0}, w);
        if (cand > best) {
            best = cand;
        }
    }
    return best;
}

/// Minimum-weight fault subset with a given syndrome: (weight, observable mask, unique).
struct MinResult {
    double weight = std::numeric_limits<double>::infinity();
    uint64_t obs = 0;
    bool unique = true;
};

MinResult brute_min_weight(const DetectorErrorModel &dem, uint64_t syndrome) {
    MinResult best;
    size_t n = dem.faults.size();
    for (uint64_t mask = 0; mask < (uint64_t{1} << n); mask++) {
        uint64_t det = 0, obs = 0;
        double w = 0;
        for (size_t k = 0; k < n; k++) {
            if (mask >> k & 1) {
                for (uint32_t d : dem.faults[k].detectors) {
                    det ^= uint64_t{1} << d;
                }
                for (uint32_t o : dem.faults[k].observables) {
                    obs ^= uint64_t{1} << o;
                }
                w += std::log((1 - dem.faults[k].p) / dem.faults[k].p);
            }
        }
        if (det != syndrome) {
            continue;
        }
        if (w < best.weight - 1e-9) {
            best = {w, obs, true};
        } else if (std::abs(w - best.weight) <= 1e-9 && obs != best.obs) {
            best.unique = false;
        }
    }
    return best;
}

DetectorErrorModel random_graph_dem(std::mt19937_64 &rng, size_t n_det, size_t n_faults) {
    DetectorErrorModel dem;
    dem.n_detectors = n_det;
    dem.n_observables = 2;
    // Log-uniform over the range circuit-level models produce.
    std::uniform_real_distribution<double> up(std::log(1e-4), std::log(1e-2));
    for (size_t k = 0; k < n_faults; k++) {
        Fault f;
        f.p = std::exp(up(rng));
        uint32_t a = (uint32_t)(rng() % n_det);
        uint32_t b = (uint32_t)(rng() % (n_det + 1));
        if (b == a || b == n_det) {
            f.detectors = {a};
        } else {
            f.detectors = {std::min(a, b), std::max(a, b)};
        }
        for (uint32_t o = 0; o < 2; o++) {
            if (rng() % 4 == 0) {
                f.observables.push_back(o);
            }
        }
        dem.faults.push_back(f);
    }
    // Make sure every detector can reach the boundary.
    for (uint32_t d = 0; d < n_det; d++) {
        dem.faults.push_back(Fault{0.002, {d}, {}});
    }
    // Identical signatures merge, as in a circuit-derived model.
    DetectorErrorModel merged = dem;
    merged.faults.clear();
    for (const auto &f : dem.faults) {
        bool found = false;
        for (auto &g : merged.faults) {
            if (g.detectors == f.detectors && g.observables == f.observables) {
                g.p = xor_prob(g.p, f.p);
                found = true;
            }
        }
        if (!found) {
            merged.faults.push_back(f);
        }
    }
    return merged;
}

}  // namespace

TEST(decoders, blossom_matches_brute_force) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 400; trial++) {
        size_t n = 2 + rng() % 7;
        std::vector<std::tuple<size_t, size_t, int64_t>> edges;
        for (size_t i = 0; i < n; i++) {
            for (size_t j = i + 1; j < n; j++) {
                if (rng() % 3 != 0 && edges.size() < 14) {
                    edges.emplace_back(i, j, (int64_t)(rng() % 20) + 1);
                }
            }
        }
        for (bool maxcard : {false, true}) {
            auto mate = max_weight_matching(n, edges, maxcard);
            size_t card = 0;
            int64_t w = 0;
            for (size_t v = 0; v < n; v++) {
                if (mate[v] >= 0) {
                    ASSERT_EQ(mate[(size_t)mate[v]], (long)v);
                    if ((size_t)mate[v] > v) {
                        card++;
                        bool found = false;
                        for (auto [i, j, wt] : edges) {
                            if ((i == v && j == (size_t)mate[v]) || (j == v && i == (size_t)mate[v])) {
                                w += wt;
                                found = true;
                                break;
                            }
                        }
                        ASSERT_TRUE(found);
                    }
                }
            }
            auto expect = brute_matching(n, edges, maxcard);
            if (maxcard) {
                ASSERT_EQ(card, expect.first);
            }
            ASSERT_EQ(w, expect.second) << "trial " << trial;
        }
    }
}

TEST(decoders, blossom_on_larger_complete_graphs) {
    // Compare against a subset dynamic program for perfect matchings.
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; trial++) {
        size_t n = 2 * (1 + rng() % 7);
        std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n));
        std::vector<std::tuple<size_t, size_t, int64_t>> edges;
        for (size_t i = 0; i < n; i++) {
            for (size_t j = i + 1; j < n; j++) {
                w[i][j] = w[j][i] = (int64_t)(rng() % 1000);
                edges.emplace_back(i, j, w[i][j]);
            }
        }
        std::vector<int64_t> dp(size_t{1} << n, std::numeric_limits<int64_t>::min());
        dp[0] = 0;
        for (size_t mask = 0; mask < dp.size(); mask++) {
            if (dp[mask] == std::numeric_limits<int64_t>::min()) {
                continue;
            }
            size_t i = 0;
            while (i < n && (mask >> i & 1)) {
                i++;
            }
            if (i == n) {
                continue;
            }
            for (size_t j = i + 1; j < n; j++) {
                if (!(mask >> j & 1)) {
                    size_t nm = mask | size_t{1} << i | size_t{1} << j;
                    dp[nm] = std::max(dp[nm], dp[mask] + w[i][j]);
                }
            }
        }
        auto mate = max_weight_matching(n, edges, true);
        int64_t total = 0;
        for (size_t v = 0; v < n; v++) {
            ASSERT_GE(mate[v], 0);
            if ((size_t)mate[v] > v) {
                total += w[v][(size_t)mate[v]];
            }
        }
        ASSERT_EQ(total, dp.back());
    }
}

TEST(decoders, zero_syndrome_predicts_nothing) {
    auto dem = decompose_graphlike(surface_dem(3, false, 1e-3));
    MwpmDecoder m(dem);
    EXPECT_FALSE(m.decode(BitVector(dem.n_detectors)).any());
    BpOsdDecoder bp(dem);
    auto r = bp.solve(BitVector(dem.n_detectors));
    EXPECT_FALSE(r.errors.any());
    EXPECT_TRUE(r.bp_converged);
}

TEST(decoders, mwpm_rejects_hyperedges) {
    DetectorErrorModel dem;
    dem.n_detectors = 3;
    dem.faults = {{0.01, {0, 1, 2}, {}}};
    EXPECT_FALSE(is_matchable(dem));
    try {
        MwpmDecoder m(dem);
        FAIL();
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find("bposd_decode"), std::string::npos);
    }
}

TEST(decoders, decomposition_keeps_signatures) {
    for (bool wide : {false, true}) {
        auto dem = surface_dem(5, wide, 1e-3);
        auto g = decompose_graphlike(dem);
        EXPECT_TRUE(is_matchable(g));
        EXPECT_EQ(g.n_detectors, dem.n_detectors);
        // Every original graphlike fault survives with at least its probability.
        for (const auto &f : dem.faults) {
            if (f.detectors.size() <= 2) {
                bool found = false;
                for (const auto &h : g.faults) {
                    if (h.detectors == f.detectors && h.observables == f.observables) {
                        found = h.p >= f.p;
                    }
                }
                EXPECT_TRUE(found);
            }
        }
    }
}

TEST(decoders, single_faults_on_small_surface_codes) {
    for (auto exp : {Experiment::MemoryZErrors, Experiment::MemoryXErrors}) {
        for (bool wide : {false, true}) {
            auto dem = surface_dem(3, wide, 1e-3, exp);
            MwpmDecoder m(decompose_graphlike(dem));
            for (size_t i = 0; i < dem.faults.size(); i++) {
                auto [s, o] = inject_and_check(dem, {i});
                EXPECT_EQ(m.decode(s), o) << "fault " << i;
            }
        }
    }
}

TEST(decoders, two_separated_faults_on_d5) {
    // Two data dephasing faults far apart in space and time.
    Circuit c = synth_surface_cycle(5, 5, false);
    NoiseParams np;
    np.T2_star = 20e-6;
    np.shuttle_multiplier = 20;
    NoisyCircuit nc = annotate(c, np);
    DetectorErrorModel dem = build_dem(nc);
    MwpmDecoder m(decompose_graphlike(surface_dem(5, false, 1e-3)));
    ASSERT_EQ(m.decode(BitVector(dem.n_detectors)).size(), dem.n_observables);
    // Pick the fault of qubit 6 in the first cycle and qubit 18 in the fourth.
    size_t a = SIZE_MAX, b = SIZE_MAX;
    size_t cycle_a = 0, cycle_b = 0;
    for (size_t f = 0; f < dem.faults.size(); f++) {
        for (const auto &src : dem.provenance[f]) {
            const Channel &ch = nc.channels[src.channel];
            size_t cyc = 0;
            for (size_t l = 0; l <= ch.layer; l++) {
                cyc += (c.layers[l].tags & TAG_CYCLE_START) != 0;
            }
            if (ch.qubits[0] == 6 && cyc == 2) {
                a = f;
                cycle_a = cyc;
            }
            if (ch.qubits[0] == 18 && cyc == 4) {
                b = f;
                cycle_b = cyc;
            }
        }
    }
    ASSERT_NE(a, SIZE_MAX);
    ASSERT_NE(b, SIZE_MAX);
    EXPECT_NE(cycle_a, cycle_b);
    // The dephasing-only model shares detector numbering with the full one.
    auto [s, o] = inject_and_check(dem, {a, b});
    EXPECT_EQ(s.popcount(), dem.faults[a].detectors.size() + dem.faults[b].detectors.size());
    EXPECT_EQ(m.decode(s), o);
}

TEST(decoders, mwpm_agrees_with_exhaustive_oracle) {
    std::mt19937_64 rng(3);
    size_t cases = 0, ml_agree = 0;
    for (int trial = 0; trial < 300; trial++) {
        size_t n_det = 3 + rng() % 5;
        DetectorErrorModel dem = random_graph_dem(rng, n_det, 1 + rng() % (18 - n_det));
        ASSERT_LE(dem.faults.size(), 20u);
        MwpmDecoder m(dem);
        ExhaustiveDecoder ex(dem);
        for (int shot = 0; shot < 4; shot++) {
            std::vector<size_t> set;
            for (size_t k = 0; k < dem.faults.size(); k++) {
                if (rng() % 5 == 0) {
                    set.push_back(k);
                }
            }
            auto [s, o] = inject_and_check(dem, set);
            MinResult best = brute_min_weight(dem, s.data()[0]);
            if (!best.unique) {
                continue;
            }
            cases++;
            BitVector pred = m.decode(s);
            uint64_t pm = pred.size() ? pred.data()[0] : 0;
            ASSERT_EQ(pm, best.obs);
            EXPECT_NEAR(m.matching_weight(s), best.weight, 1e-4);
            ml_agree += pred == ex.decode(s);
        }
    }
    ASSERT_GT(cases, 500u);
    EXPECT_GE((double)ml_agree / (double)cases, 0.99);
}

TEST(decoders, exhaustive_limits_and_basics) {
    DetectorErrorModel dem;
    dem.n_detectors = 2;
    dem.n_observables = 1;
    dem.faults = {{0.1, {0}, {0}}, {0.01, {0, 1}, {}}, {0.01, {1}, {}}};
    BitVector s(2);
    s.set(0);
    // Single fault with p=0.1 beats the two-fault path.
    EXPECT_TRUE(exhaustive_decode(dem, s).get(0));
    auto weights = ExhaustiveDecoder(dem).class_weights(s);
    double total = 0;
    for (auto [m, w] : weights) {
        total += w;
    }
    EXPECT_GT(total, 0.09);
    for (int i = 0; i < 30; i++) {
        dem.faults.push_back({0.01, {0}, {}});
    }
    EXPECT_THROW(ExhaustiveDecoder{dem}, std::invalid_argument);
}

TEST(decoders, bposd_always_satisfies_syndrome) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 60; trial++) {
        size_t rows = 5 + rng() % 30, cols = rows + rng() % 40;
        std::vector<std::pair<size_t, size_t>> e;
        for (size_t j = 0; j < cols; j++) {
            size_t w = 1 + rng() % 3;
            std::set<size_t> used;
            for (size_t k = 0; k < w; k++) {
                used.insert(rng() % rows);
            }
            for (size_t i : used) {
                e.push_back({i, j});
            }
        }
        BitMatrix h = BitMatrix::from_entries(rows, cols, e);
        std::vector<double> priors(cols);
        for (auto &p : priors) {
            p = 0.001 + (double)(rng() % 100) / 1000.0;
        }
        BpOsdDecoder dec(h, priors);
        for (int shot = 0; shot < 10; shot++) {
            BitVector err(cols);
            for (size_t j = 0; j < cols; j++) {
                if (rng() % 8 == 0) {
                    err.set(j);
                }
            }
            BitVector s = matvec(h, err);
            auto r = dec.solve(s);
            ASSERT_TRUE(r.satisfiable);
            ASSERT_EQ(matvec(h, r.errors), s);
            ASSERT_EQ(dec.solve(s).errors, r.errors);
        }
        // A syndrome outside the column space is flagged.
        BitMatrix zero(3, 4);
        BitVector bad(3);
        bad.set(1);
        std::vector<double> pr(4, 0.1);
        EXPECT_FALSE(bposd_decode(zero, pr, bad).satisfiable);
    }
}

TEST(decoders, bposd_solutions_on_surface_model) {
    auto dem = surface_dem(3, false, 1e-3);
    BpOsdDecoder dec(dem);
    BitMatrix h = dem.check_matrix();
    for (size_t i = 0; i < dem.faults.size(); i++) {
        for (size_t j = i; j < dem.faults.size(); j += 7) {
            auto [s, o] = inject_and_check(dem, {i, j});
            auto r = dec.solve(s);
            ASSERT_TRUE(r.satisfiable);
            ASSERT_EQ(matvec(h, r.errors), s);
        }
    }
}

TEST(decoders, bposd_single_faults_on_hgp_model) {
    ClassicalCode a = repetition_code(8), b = appendix_b_code();
    CssCode code = hgp(a, b);
    HgpArrangement arr = rearrange_hgp(code, a, b);
    ShuttleSchedule sch = schedule_from_diagonals(arr.h, arr.row_types());
    NoiseParams np;
    np.p = 1e-3;
    np.T2_star = 20e-6;
    np.shuttle_multiplier = (double)sch.total_distance;
    auto dem = build_dem(annotate(synth_qldpc_cycle(code, linear_layout(arr), sch, 2), np));
    BpOsdDecoder dec(dem);
    BitMatrix h = dem.check_matrix();
    size_t fails = 0;
    for (size_t i = 0; i < dem.faults.size(); i++) {
        auto [s, o] = inject_and_check(dem, {i});
        auto r = dec.solve(s);
        ASSERT_EQ(matvec(h, r.errors), s);
        fails += !(dec.decode(s) == o);
    }
    EXPECT_EQ(fails, 0u);
}

TEST(decoders, zero_noise_batch_has_no_failures) {
    auto dem = surface_dem(3, false, 1e-3);
    SampleBatch b;
    b.shots = 50;
    b.n_detectors = dem.n_detectors;
    b.n_observables = dem.n_observables;
    b.syndromes.assign(50, BitVector(dem.n_detectors));
    b.observable_flips.assign(50, BitVector(dem.n_observables));
    EXPECT_EQ(count_failures(MwpmDecoder(decompose_graphlike(dem)), b), 0u);
    EXPECT_EQ(count_failures(BpOsdDecoder(dem), b), 0u);
}

TEST(decoders, decoding_is_deterministic) {
    auto dem = surface_dem(5, false, 3e-3);
    SampleBatch b = sample(dem, 500, 17);
    MwpmDecoder m(decompose_graphlike(dem));
    BpOsdDecoder bp(dem);
    EXPECT_EQ(count_failures(m, b, 1), count_failures(m, b, 4));
    EXPECT_EQ(count_failures(bp, b, 1), count_failures(bp, b, 3));
}
