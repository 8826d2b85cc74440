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

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sqec {

namespace {

size_t words_for(size_t n) {
    return (n + 63) >> 6;
}

}  // namespace

BitVector::BitVector(size_t n) : n_(n), words_(words_for(n), 0) {
}

BitVector BitVector::from_indices(size_t n, std::span<const size_t> ones) {
    BitVector v(n);
    for (size_t i : ones) {
        if (i >= n) {
            throw std::invalid_argument("BitVector index out of range");
        }
        v.flip(i);
    }
    return v;
}

BitVector BitVector::from_string(const std::string &bits) {
    BitVector v(bits.size());
    for (size_t i = 0; i < bits.size(); i++) {
        if (bits[i] == '1') {
            v.set(i);
        } else if (bits[i] != '0') {
            throw std::invalid_argument("BitVector string must contain only 0 and 1");
        }
    }
    return v;
}

void BitVector::clear() {
    std::fill(words_.begin(), words_.end(), 0);
}

BitVector &BitVector::operator^=(const BitVector &other) {
    if (other.n_ != n_) {
        throw std::invalid_argument("BitVector length mismatch");
    }
    for (size_t i = 0; i < words_.size(); i++) {
        words_[i] ^= other.words_[i];
    }
    return *this;
}

bool BitVector::any() const {
    for (uint64_t w : words_) {
        if (w) {
            return true;
        }
    }
    return false;
}

size_t BitVector::popcount() const {
    size_t c = 0;
    for (uint64_t w : words_) {
        c += std::popcount(w);
    }
    return c;
}

bool BitVector::dot(const BitVector &other) const {
    if (other.n_ != n_) {
        throw std::invalid_argument("BitVector length mismatch");
    }
    uint64_t acc = 0;
    for (size_t i = 0; i < words_.size(); i++) {
        acc ^= words_[i] & other.words_[i];
    }
    return std::popcount(acc) & 1;
}

std::vector<size_t> BitVector::ones() const {
    std::vector<size_t> out;
    for (size_t w = 0; w < words_.size(); w++) {
        uint64_t x = words_[w];
        while (x) {
            out.push_back((w << 6) + std::countr_zero(x));
            x &= x - 1;
        }
    }
    return out;
}

std::string BitVector::str() const {
    std::string s(n_, '0');
    for (size_t i = 0; i < n_; i++) {
        if (get(i)) {
            s[i] = '1';
        }
    }
    return s;
}

BitMatrix::BitMatrix(size_t rows, size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * words_for(cols), 0) {
}

BitMatrix BitMatrix::identity(size_t n) {
    BitMatrix m(n, n);
    for (size_t i = 0; i < n; i++) {
        m.set(i, i);
    }
    return m;
}

BitMatrix BitMatrix::from_entries(size_t rows, size_t cols, std::span<const std::pair<size_t, size_t>> entries) {
    BitMatrix m(rows, cols);
    for (const auto &[r, c] : entries) {
        if (r >= rows || c >= cols) {
            throw std::invalid_argument("matrix entry out of bounds");
        }
        if (m.get(r, c)) {
            throw std::invalid_argument("duplicate matrix entry");
        }
        m.set(r, c);
    }
    return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<std::string> &rows) {
    size_t cols = rows.empty() ? 0 : rows[0].size();
    BitMatrix m(rows.size(), cols);
    for (size_t r = 0; r < rows.size(); r++) {
        if (rows[r].size() != cols) {
            throw std::invalid_argument("ragged matrix rows");
        }
        for (size_t c = 0; c < cols; c++) {
            if (rows[r][c] == '1') {
                m.set(r, c);
            } else if (rows[r][c] != '0') {
                throw std::invalid_argument("matrix rows must contain only 0 and 1");
            }
        }
    }
    return m;
}

BitMatrix BitMatrix::from_vectors(size_t cols, const std::vector<BitVector> &rows) {
    BitMatrix m(rows.size(), cols);
    for (size_t r = 0; r < rows.size(); r++) {
        if (rows[r].size() != cols) {
            throw std::invalid_argument("row length mismatch");
        }
        std::copy(rows[r].data(), rows[r].data() + m.stride_, m.row_data(r));
    }
    return m;
}

void BitMatrix::set(size_t r, size_t c, bool v) {
    uint64_t &w = data_[r * stride_ + (c >> 6)];
    uint64_t mask = uint64_t{1} << (c & 63);
    if (v) {
        w |= mask;
    } else {
        w &= ~mask;
    }
}

void BitMatrix::xor_row(size_t src, size_t dst) {
    const uint64_t *s = row_data(src);
    uint64_t *d = row_data(dst);
    for (size_t i = 0; i < stride_; i++) {
        d[i] ^= s[i];
    }
}

void BitMatrix::swap_rows(size_t a, size_t b) {
    if (a == b) {
        return;
    }
    std::swap_ranges(row_data(a), row_data(a) + stride_, row_data(b));
}

BitVector BitMatrix::row(size_t r) const {
    BitVector v(cols_);
    std::copy(row_data(r), row_data(r) + stride_, v.data());
    return v;
}

BitVector BitMatrix::col(size_t c) const {
    BitVector v(rows_);
    for (size_t r = 0; r < rows_; r++) {
        if (get(r, c)) {
            v.set(r);
        }
    }
    return v;
}

std::vector<size_t> BitMatrix::row_support(size_t r) const {
    std::vector<size_t> out;
    const uint64_t *p = row_data(r);
    for (size_t w = 0; w < stride_; w++) {
        uint64_t x = p[w];
        while (x) {
            out.push_back((w << 6) + std::countr_zero(x));
            x &= x - 1;
        }
    }
    return out;
}

size_t BitMatrix::row_weight(size_t r) const {
    size_t c = 0;
    const uint64_t *p = row_data(r);
    for (size_t w = 0; w < stride_; w++) {
        c += std::popcount(p[w]);
    }
    return c;
}

size_t BitMatrix::col_weight(size_t c) const {
    size_t n = 0;
    for (size_t r = 0; r < rows_; r++) {
        n += get(r, c);
    }
    return n;
}

size_t BitMatrix::nnz() const {
    size_t c = 0;
    for (uint64_t w : data_) {
        c += std::popcount(w);
    }
    return c;
}

std::vector<std::pair<size_t, size_t>> BitMatrix::entries() const {
    std::vector<std::pair<size_t, size_t>> out;
    for (size_t r = 0; r < rows_; r++) {
        for (size_t c : row_support(r)) {
            out.emplace_back(r, c);
        }
    }
    return out;
}

bool BitMatrix::is_zero() const {
    for (uint64_t w : data_) {
        if (w) {
            return false;
        }
    }
    return true;
}

std::string BitMatrix::str() const {
    std::string s;
    for (size_t r = 0; r < rows_; r++) {
        for (size_t c = 0; c < cols_; c++) {
            s.push_back(get(r, c) ? '1' : '.');
        }
        s.push_back('\n');
    }
    return s;
}

BitMatrix transpose(const BitMatrix &m) {
    BitMatrix t(m.cols(), m.rows());
    for (size_t r = 0; r < m.rows(); r++) {
        for (size_t c : m.row_support(r)) {
            t.set(c, r);
        }
    }
    return t;
}

BitMatrix matmul(const BitMatrix &a, const BitMatrix &b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul dimension mismatch");
    }
    BitMatrix out(a.rows(), b.cols());
    size_t stride = out.words_per_row();
    for (size_t r = 0; r < a.rows(); r++) {
        uint64_t *dst = out.row_data(r);
        for (size_t k : a.row_support(r)) {
            const uint64_t *src = b.row_data(k);
            for (size_t w = 0; w < stride; w++) {
                dst[w] ^= src[w];
            }
        }
    }
    return out;
}

BitVector matvec(const BitMatrix &m, const BitVector &v) {
    if (m.cols() != v.size()) {
        throw std::invalid_argument("matvec dimension mismatch");
    }
    BitVector out(m.rows());
    for (size_t r = 0; r < m.rows(); r++) {
        const uint64_t *p = m.row_data(r);
        uint64_t acc = 0;
        for (size_t w = 0; w < m.words_per_row(); w++) {
            acc ^= p[w] & v.data()[w];
        }
        if (std::popcount(acc) & 1) {
            out.set(r);
        }
    }
    return out;
}

BitMatrix kron(const BitMatrix &a, const BitMatrix &b) {
    BitMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    auto be = b.entries();
    for (const auto &[ar, ac] : a.entries()) {
        for (const auto &[br, bc] : be) {
            out.set(ar * b.rows() + br, ac * b.cols() + bc);
        }
    }
    return out;
}

BitMatrix hstack(const BitMatrix &a, const BitMatrix &b) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("hstack row count mismatch");
    }
    BitMatrix out(a.rows(), a.cols() + b.cols());
    for (const auto &[r, c] : a.entries()) {
        out.set(r, c);
    }
    for (const auto &[r, c] : b.entries()) {
        out.set(r, a.cols() + c);
    }
    return out;
}

BitMatrix vstack(const BitMatrix &a, const BitMatrix &b) {
    if (a.cols() != b.cols()) {
        throw std::invalid_argument("vstack column count mismatch");
    }
    BitMatrix out(a.rows() + b.rows(), a.cols());
    for (size_t r = 0; r < a.rows(); r++) {
        std::copy(a.row_data(r), a.row_data(r) + a.words_per_row(), out.row_data(r));
    }
    for (size_t r = 0; r < b.rows(); r++) {
        std::copy(b.row_data(r), b.row_data(r) + b.words_per_row(), out.row_data(a.rows() + r));
    }
    return out;
}

namespace {

void check_permutation(std::span<const size_t> perm, size_t n) {
    if (perm.size() != n) {
        throw std::invalid_argument("permutation length mismatch");
    }
    std::vector<bool> seen(n, false);
    for (size_t p : perm) {
        if (p >= n || seen[p]) {
            throw std::invalid_argument("not a permutation");
        }
        seen[p] = true;
    }
}

}  // namespace

BitMatrix permute_rows(const BitMatrix &m, std::span<const size_t> perm) {
    check_permutation(perm, m.rows());
    BitMatrix out(m.rows(), m.cols());
    for (size_t r = 0; r < m.rows(); r++) {
        std::copy(m.row_data(perm[r]), m.row_data(perm[r]) + m.words_per_row(), out.row_data(r));
    }
    return out;
}

BitMatrix permute_cols(const BitMatrix &m, std::span<const size_t> perm) {
    check_permutation(perm, m.cols());
    BitMatrix out(m.rows(), m.cols());
    for (size_t r = 0; r < m.rows(); r++) {
        for (size_t c = 0; c < m.cols(); c++) {
            if (m.get(r, perm[c])) {
                out.set(r, c);
            }
        }
    }
    return out;
}

std::vector<size_t> rref(BitMatrix &m) {
    std::vector<size_t> pivots;
    size_t next = 0;
    for (size_t c = 0; c < m.cols() && next < m.rows(); c++) {
        size_t w = c >> 6;
        uint64_t bit = uint64_t{1} << (c & 63);
        size_t found = m.rows();
        for (size_t r = next; r < m.rows(); r++) {
            if (m.row_data(r)[w] & bit) {
                found = r;
                break;
            }
        }
        if (found == m.rows()) {
            continue;
        }
        m.swap_rows(found, next);
        for (size_t r = 0; r < m.rows(); r++) {
            if (r != next && (m.row_data(r)[w] & bit)) {
                m.xor_row(next, r);
            }
        }
        pivots.push_back(c);
        next++;
    }
    return pivots;
}

size_t rank(const BitMatrix &m) {
    BitMatrix copy = m;
    return rref(copy).size();
}

BitMatrix nullspace_basis(const BitMatrix &m) {
    BitMatrix r = m;
    std::vector<size_t> pivots = rref(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t p : pivots) {
        is_pivot[p] = true;
    }
    BitMatrix basis(m.cols() - pivots.size(), m.cols());
    size_t row = 0;
    for (size_t f = 0; f < m.cols(); f++) {
        if (is_pivot[f]) {
            continue;
        }
        basis.set(row, f);
        for (size_t i = 0; i < pivots.size(); i++) {
            if (r.get(i, f)) {
                basis.set(row, pivots[i]);
            }
        }
        row++;
    }
    return basis;
}

std::optional<BitVector> solve_affine(const BitMatrix &m, const BitVector &s) {
    if (s.size() != m.rows()) {
        throw std::invalid_argument("solve_affine: syndrome length must equal row count");
    }
    BitMatrix aug(m.rows(), m.cols() + 1);
    for (size_t r = 0; r < m.rows(); r++) {
        std::copy(m.row_data(r), m.row_data(r) + m.words_per_row(), aug.row_data(r));
        if (s.get(r)) {
            aug.set(r, m.cols());
        }
    }
    std::vector<size_t> pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) {
        return std::nullopt;
    }
    BitVector x(m.cols());
    for (size_t i = 0; i < pivots.size(); i++) {
        if (aug.get(i, m.cols())) {
            x.set(pivots[i]);
        }
    }
    return x;
}

std::optional<BitMatrix> inverse(const BitMatrix &m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("inverse requires a square matrix");
    }
    size_t n = m.rows();
    BitMatrix aug = hstack(m, BitMatrix::identity(n));
    std::vector<size_t> pivots = rref(aug);
    if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) {
        return std::nullopt;
    }
    BitMatrix out(n, n);
    for (size_t r = 0; r < n; r++) {
        for (size_t c = 0; c < n; c++) {
            if (aug.get(r, n + c)) {
                out.set(r, c);
            }
        }
    }
    return out;
}

bool in_rowspace(const BitMatrix &m, const BitVector &v) {
    return solve_affine(transpose(m), v).has_value();
}

void write_matrix(std::ostream &out, const BitMatrix &m) {
    out << m.rows() << " " << m.cols() << "\n";
    for (const auto &[r, c] : m.entries()) {
        out << r << " " << c << "\n";
    }
}

BitMatrix read_matrix(std::istream &in) {
    std::string line;
    size_t rows = 0, cols = 0;
    bool have_header = false;
    std::vector<std::pair<size_t, size_t>> entries;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream ss(line);
        long long a, b;
        if (!(ss >> a)) {
            continue;
        }
        std::string rest;
        if (!(ss >> b) || (ss >> rest) || a < 0 || b < 0) {
            throw std::invalid_argument("matrix file line " + std::to_string(line_no) + ": expected two non-negative integers");
        }
        if (!have_header) {
            rows = (size_t)a;
            cols = (size_t)b;
            have_header = true;
        } else {
            entries.emplace_back((size_t)a, (size_t)b);
        }
    }
    if (!have_header) {
        throw std::invalid_argument("matrix file has no header line");
    }
    return BitMatrix::from_entries(rows, cols, entries);
}

}  // namespace sqec
