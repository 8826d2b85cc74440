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

#include "sqec/gf2.h"

#include <numeric>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "sqec/codes.h"

using namespace sqec;

namespace {

/// Independent rank oracle over plain integer rows.
size_t naive_rank(std::vector<std::vector<int>> m) {
    size_t r = 0;
    size_t cols = m.empty() ? 0 : m[0].size();
    for (size_t c = 0; c < cols && r < m.size(); c++) {
        size_t p = r;
        while (p < m.size() && !m[p][c]) {
            p++;
        }
        if (p == m.size()) {
            continue;
        }
        std::swap(m[p], m[r]);
        for (size_t i = 0; i < m.size(); i++) {
            if (i != r && m[i][c]) {
                for (size_t j = 0; j < cols; j++) {
                    m[i][j] ^= m[r][j];
                }
            }
        }
        r++;
    }
    return r;
}

std::vector<std::vector<int>> to_ints(const BitMatrix &m) {
    std::vector<std::vector<int>> out(m.rows(), std::vector<int>(m.cols()));
    for (size_t r = 0; r < m.rows(); r++) {
        for (size_t c = 0; c < m.cols(); c++) {
            out[r][c] = m.get(r, c);
        }
    }
    return out;
}

BitMatrix random_matrix(std::mt19937_64 &rng, size_t rows, size_t cols, double density = 0.3) {
    std::bernoulli_distribution bit(density);
    BitMatrix m(rows, cols);
    for (size_t r = 0; r < rows; r++) {
        for (size_t c = 0; c < cols; c++) {
            if (bit(rng)) {
                m.set(r, c);
            }
        }
    }
    return m;
}

}  // namespace

TEST(gf2, rank_examples) {
    ASSERT_EQ(rank(BitMatrix::identity(5)), 5u);
    ASSERT_EQ(rank(BitMatrix(3, 7)), 0u);
    BitMatrix b = appendix_b_code().h;
    ASSERT_EQ(b.rows(), 14u);
    ASSERT_EQ(b.cols(), 17u);
    ASSERT_EQ(naive_rank(to_ints(b)), 14u);
    ASSERT_EQ(rank(b), 14u);
}

TEST(gf2, nullspace_examples) {
    ASSERT_EQ(nullspace_basis(BitMatrix::identity(4)).rows(), 0u);
    BitMatrix one = BitMatrix::from_rows({"11"});
    BitMatrix ns = nullspace_basis(one);
    ASSERT_EQ(ns.rows(), 1u);
    ASSERT_EQ(ns.row(0).str(), "11");
    BitMatrix rep = repetition_code(8).h;
    ASSERT_EQ(rep.rows(), 7u);
    BitMatrix ns8 = nullspace_basis(rep);
    ASSERT_EQ(ns8.rows(), 1u);
    ASSERT_EQ(ns8.row(0).str(), "11111111");
    ASSERT_FALSE(matvec(rep, ns8.row(0)).any());
}

TEST(gf2, kron_examples) {
    ASSERT_EQ(kron(BitMatrix::identity(2), BitMatrix::identity(3)), BitMatrix::identity(6));
    BitMatrix k = kron(repetition_code(8).h, BitMatrix::identity(3));
    ASSERT_EQ(k.rows(), 21u);
    ASSERT_EQ(k.cols(), 24u);
    ASSERT_EQ(k.nnz(), 42u);
}

TEST(gf2, dimension_mismatch_errors) {
    ASSERT_THROW(matmul(BitMatrix(2, 3), BitMatrix(2, 3)), std::invalid_argument);
    ASSERT_THROW(hstack(BitMatrix(2, 3), BitMatrix(3, 3)), std::invalid_argument);
    ASSERT_THROW(vstack(BitMatrix(2, 3), BitMatrix(2, 4)), std::invalid_argument);
    ASSERT_THROW(matvec(BitMatrix(2, 3), BitVector(2)), std::invalid_argument);
    ASSERT_THROW(solve_affine(BitMatrix(2, 3), BitVector(3)), std::invalid_argument);
    std::vector<size_t> bad{0, 0};
    ASSERT_THROW(permute_rows(BitMatrix(2, 2), bad), std::invalid_argument);
}

TEST(gf2, solve_affine_consistent_and_inconsistent) {
    BitMatrix m = BitMatrix::from_rows({"110", "011"});
    auto x = solve_affine(m, BitVector::from_string("10"));
    ASSERT_TRUE(x.has_value());
    ASSERT_EQ(matvec(m, *x).str(), "10");
    BitMatrix dup = BitMatrix::from_rows({"11", "11"});
    ASSERT_FALSE(solve_affine(dup, BitVector::from_string("10")).has_value());
}

TEST(gf2, random_properties) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; trial++) {
        size_t rows = 1 + rng() % 12, cols = 1 + rng() % 70;
        BitMatrix m = random_matrix(rng, rows, cols);
        size_t r = rank(m);
        ASSERT_EQ(r, naive_rank(to_ints(m)));
        ASSERT_EQ(r, rank(transpose(m)));
        BitMatrix ns = nullspace_basis(m);
        ASSERT_EQ(ns.rows() + r, cols);
        ASSERT_EQ(rank(ns), ns.rows());
        ASSERT_TRUE(matmul(m, transpose(ns)).is_zero());

        std::vector<size_t> rp(rows), cp(cols);
        std::iota(rp.begin(), rp.end(), 0);
        std::iota(cp.begin(), cp.end(), 0);
        std::shuffle(rp.begin(), rp.end(), rng);
        std::shuffle(cp.begin(), cp.end(), rng);
        ASSERT_EQ(rank(permute_cols(permute_rows(m, rp), cp)), r);

        BitVector x(cols);
        for (size_t i = 0; i < cols; i++) {
            x.set(i, rng() & 1);
        }
        BitVector s = matvec(m, x);
        auto sol = solve_affine(m, s);
        ASSERT_TRUE(sol.has_value());
        ASSERT_EQ(matvec(m, *sol), s);
    }
}

TEST(gf2, kron_properties) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; trial++) {
        size_t a1 = 1 + rng() % 4, a2 = 1 + rng() % 4, b1 = 1 + rng() % 4, b2 = 1 + rng() % 4;
        size_t c2 = 1 + rng() % 4, d2 = 1 + rng() % 4;
        BitMatrix A = random_matrix(rng, a1, a2, 0.5);
        BitMatrix B = random_matrix(rng, b1, b2, 0.5);
        BitMatrix C = random_matrix(rng, a2, c2, 0.5);
        BitMatrix D = random_matrix(rng, b2, d2, 0.5);
        BitMatrix E = random_matrix(rng, 1 + rng() % 3, 1 + rng() % 3, 0.5);
        ASSERT_EQ(kron(kron(A, B), E), kron(A, kron(B, E)));
        ASSERT_EQ(matmul(kron(A, B), kron(C, D)), kron(matmul(A, C), matmul(B, D)));
    }
}

TEST(gf2, inverse_roundtrip) {
    std::mt19937_64 rng(3);
    int found = 0;
    for (int trial = 0; trial < 100; trial++) {
        BitMatrix m = random_matrix(rng, 6, 6, 0.5);
        auto inv = inverse(m);
        ASSERT_EQ(inv.has_value(), rank(m) == 6);
        if (inv) {
            found++;
            ASSERT_EQ(matmul(m, *inv), BitMatrix::identity(6));
        }
    }
    ASSERT_GT(found, 0);
}

TEST(gf2, text_roundtrip) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; trial++) {
        BitMatrix m = random_matrix(rng, 1 + rng() % 30, 1 + rng() % 90, 0.1);
        std::stringstream ss;
        write_matrix(ss, m);
        ASSERT_EQ(read_matrix(ss), m);
    }
    std::stringstream bad("2 2\n0 5\n");
    ASSERT_THROW(read_matrix(bad), std::invalid_argument);
    std::stringstream dup("2 2\n0 1\n0 1\n");
    ASSERT_THROW(read_matrix(dup), std::invalid_argument);
}
