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

#ifndef SQEC_GF2_H
#define SQEC_GF2_H

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sqec {

/// A fixed-length vector over GF(2), packed 64 bits per word.
class BitVector {
   public:
    BitVector() = default;
    explicit BitVector(size_t n);
    static BitVector from_indices(size_t n, std::span<const size_t> ones);
    static BitVector from_string(const std::string &bits);

    size_t size() const {
        return n_;
    }
    size_t num_words() const {
        return words_.size();
    }
    bool get(size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }
    void set(size_t i, bool v = true) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= m;
        } else {
            words_[i >> 6] &= ~m;
        }
    }
    void flip(size_t i) {
        words_[i >> 6] ^= uint64_t{1} << (i & 63);
    }
    void clear();

    uint64_t *data() {
        return words_.data();
    }
    const uint64_t *data() const {
        return words_.data();
    }

    BitVector &operator^=(const BitVector &other);
    bool operator==(const BitVector &other) const = default;

    bool any() const;
    size_t popcount() const;
    /// Parity of the overlap with another vector of the same length.
    bool dot(const BitVector &other) const;
    std::vector<size_t> ones() const;
    std::string str() const;

   private:
    size_t n_ = 0;
    std::vector<uint64_t> words_;
};

/// A binary matrix over GF(2). Rows are stored bit-packed so that row
/// operations are word-parallel XORs.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols);

    static BitMatrix identity(size_t n);
    static BitMatrix from_entries(size_t rows, size_t cols, std::span<const std::pair<size_t, size_t>> entries);
    /// Each string is one row of '0'/'1' characters.
    static BitMatrix from_rows(const std::vector<std::string> &rows);
    static BitMatrix from_vectors(size_t cols, const std::vector<BitVector> &rows);

    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }
    size_t words_per_row() const {
        return stride_;
    }

    bool get(size_t r, size_t c) const {
        return (data_[r * stride_ + (c >> 6)] >> (c & 63)) & 1;
    }
    void set(size_t r, size_t c, bool v = true);
    void flip(size_t r, size_t c) {
        data_[r * stride_ + (c >> 6)] ^= uint64_t{1} << (c & 63);
    }

    uint64_t *row_data(size_t r) {
        return data_.data() + r * stride_;
    }
    const uint64_t *row_data(size_t r) const {
        return data_.data() + r * stride_;
    }
    /// row[dst] ^= row[src]
    void xor_row(size_t src, size_t dst);
    void swap_rows(size_t a, size_t b);

    BitVector row(size_t r) const;
    BitVector col(size_t c) const;
    std::vector<size_t> row_support(size_t r) const;
    size_t row_weight(size_t r) const;
    size_t col_weight(size_t c) const;
    size_t nnz() const;
    std::vector<std::pair<size_t, size_t>> entries() const;
    bool is_zero() const;

    bool operator==(const BitMatrix &other) const = default;

    std::string str() const;

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    size_t stride_ = 0;
    std::vector<uint64_t> data_;
};

BitMatrix transpose(const BitMatrix &m);
BitMatrix matmul(const BitMatrix &a, const BitMatrix &b);
BitVector matvec(const BitMatrix &m, const BitVector &v);
BitMatrix kron(const BitMatrix &a, const BitMatrix &b);
BitMatrix hstack(const BitMatrix &a, const BitMatrix &b);
BitMatrix vstack(const BitMatrix &a, const BitMatrix &b);
/// Row i of the result is row perm[i] of m.
BitMatrix permute_rows(const BitMatrix &m, std::span<const size_t> perm);
/// Column j of the result is column perm[j] of m.
BitMatrix permute_cols(const BitMatrix &m, std::span<const size_t> perm);

/// Reduced row echelon form. Pivots are chosen at the leftmost nonzero column,
/// using the first available row. Returns the pivot column of each nonzero row.
std::vector<size_t> rref(BitMatrix &m);

size_t rank(const BitMatrix &m);
/// Rows form a basis of {v : m v = 0}.
BitMatrix nullspace_basis(const BitMatrix &m);
/// Returns x with m x = s, or nullopt when the system is inconsistent.
std::optional<BitVector> solve_affine(const BitMatrix &m, const BitVector &s);
/// Inverse of a square full-rank matrix; nullopt when singular.
std::optional<BitMatrix> inverse(const BitMatrix &m);
/// True when v lies in the row space of m.
bool in_rowspace(const BitMatrix &m, const BitVector &v);

/// Plain text: "rows cols" followed by one "r c" line per nonzero entry.
void write_matrix(std::ostream &out, const BitMatrix &m);
BitMatrix read_matrix(std::istream &in);

}  // namespace sqec

#endif
