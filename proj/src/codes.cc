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

#include "sqec/codes.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sqec {

ClassicalCode make_classical(BitMatrix h, std::string name) {
    ClassicalCode code;
    code.n = h.cols();
    code.k = h.cols() - rank(h);
    code.h = std::move(h);
    code.name = std::move(name);
    return code;
}

ClassicalCode repetition_code(size_t n) {
    if (n < 2) {
        throw std::invalid_argument("repetition code needs n >= 2");
    }
    BitMatrix h(n - 1, n);
    for (size_t i = 0; i + 1 < n; i++) {
        h.set(i, i);
        h.set(i, i + 1);
    }
    ClassicalCode code = make_classical(std::move(h), "rep-" + std::to_string(n));
    code.d = n;
    return code;
}

ClassicalCode appendix_b_code() {
    BitMatrix h = BitMatrix::from_rows({
        "01000000000101000",
        "10001001000010100",
        "10000110000000000",
        "00100000000000100",
        "00000000100001000",
        "00000001000000000",
        "00001000000100000",
        "00000100010000000",
        "00000100000000010",
        "00001000000010001",
        "00000000001000000",
        "01011000000000000",
        "11000000000000000",
        "00000000010001001",
    });
    ClassicalCode code = make_classical(std::move(h), "seed-17-3-8");
    code.d = 8;
    return code;
}

std::pair<BitMatrix, BitMatrix> compute_logicals(const BitMatrix &hx, const BitMatrix &hz) {
    size_t n = hx.cols();
    // Extend a basis of rowspace(s) by vectors of ker(other) to find representatives.
    auto extend = [n](const BitMatrix &stab, const BitMatrix &commute_with) {
        BitMatrix kernel = nullspace_basis(commute_with);
        BitMatrix span = stab;
        size_t r = rank(span);
        std::vector<BitVector> picked;
        for (size_t i = 0; i < kernel.rows(); i++) {
            BitVector v = kernel.row(i);
            BitMatrix trial = vstack(span, BitMatrix::from_vectors(n, {v}));
            size_t r2 = rank(trial);
            if (r2 > r) {
                picked.push_back(v);
                span = std::move(trial);
                r = r2;
            }
        }
        return BitMatrix::from_vectors(n, picked);
    };
    BitMatrix lx = extend(hx, hz);
    BitMatrix lz = extend(hz, hx);
    if (lx.rows() != lz.rows()) {
        throw std::logic_error("logical operator count mismatch");
    }
    if (lx.rows() == 0) {
        return {lx, lz};
    }
    BitMatrix m = matmul(lx, transpose(lz));
    auto inv = inverse(m);
    if (!inv) {
        throw std::logic_error("logical operators are not symplectically paired");
    }
    lz = matmul(transpose(*inv), lz);
    return {lx, lz};
}

CssCode make_css(std::string name, BitMatrix hx, BitMatrix hz) {
    if (hx.cols() != hz.cols()) {
        throw std::invalid_argument("Hx and Hz must have the same number of columns");
    }
    if (!matmul(hx, transpose(hz)).is_zero()) {
        throw std::invalid_argument("CSS condition violated: Hx Hz^T != 0");
    }
    CssCode code;
    code.name = std::move(name);
    code.n = hx.cols();
    code.k = code.n - rank(hx) - rank(hz);
    auto [lx, lz] = compute_logicals(hx, hz);
    code.hx = std::move(hx);
    code.hz = std::move(hz);
    code.lx = std::move(lx);
    code.lz = std::move(lz);
    return code;
}

namespace {

enum class Side { Top, Bottom, Left, Right };

/// Builds a checkerboard patch. A plaquette with NW corner (y, c) has type X
/// when y + c is even. Weight-two boundary plaquettes are kept when their type
/// matches boundary_type(side, position).
template <typename F>
CssCode build_planar(std::string name, size_t h, size_t w, F boundary_type) {
    PlanarLayout layout;
    layout.height = h;
    layout.width = w;
    std::vector<std::vector<size_t>> xs, zs;
    int H = (int)h, W = (int)w;
    auto index = [&](int y, int c) -> int {
        if (y < 0 || y >= H || c < 0 || c >= W) {
            return -1;
        }
        return c * H + y;
    };
    for (int y = -1; y < H; y++) {
        for (int c = -1; c < W; c++) {
            std::array<int, 4> corners{};
            corners[SW] = index(y + 1, c);
            corners[NE] = index(y, c + 1);
            corners[SE] = index(y + 1, c + 1);
            corners[NW] = index(y, c);
            std::vector<size_t> support;
            for (int q : corners) {
                if (q >= 0) {
                    support.push_back((size_t)q);
                }
            }
            CheckType type = ((y + c) % 2 == 0) ? CheckType::X : CheckType::Z;
            if (support.size() == 2) {
                Side side;
                int pos;
                if (y == -1) {
                    side = Side::Top;
                    pos = c;
                } else if (y == H - 1) {
                    side = Side::Bottom;
                    pos = c;
                } else if (c == -1) {
                    side = Side::Left;
                    pos = y;
                } else {
                    side = Side::Right;
                    pos = y;
                }
                if (boundary_type(side, pos) != type) {
                    continue;
                }
            } else if (support.size() != 4) {
                continue;
            }
            std::sort(support.begin(), support.end());
            auto &list = type == CheckType::X ? xs : zs;
            layout.checks.push_back(PlanarCheck{type, list.size(), y, c, corners});
            list.push_back(std::move(support));
        }
    }
    auto to_matrix = [&](const std::vector<std::vector<size_t>> &rows) {
        BitMatrix m(rows.size(), h * w);
        for (size_t r = 0; r < rows.size(); r++) {
            for (size_t q : rows[r]) {
                m.set(r, q);
            }
        }
        return m;
    };
    CssCode code = make_css(std::move(name), to_matrix(xs), to_matrix(zs));
    code.planar = std::move(layout);
    return code;
}

void check_odd_distance(size_t d) {
    if (d < 3 || d % 2 == 0) {
        throw std::invalid_argument("surface code distance must be odd and at least 3");
    }
}

}  // namespace

CssCode rotated_surface_code(size_t d) {
    check_odd_distance(d);
    CssCode code = build_planar("rsc-d" + std::to_string(d), d, d, [](Side side, int) {
        return (side == Side::Top || side == Side::Bottom) ? CheckType::X : CheckType::Z;
    });
    code.d_estimate = d;
    return code;
}

CssCode wide_surface_code(size_t d) {
    check_odd_distance(d);
    int D = (int)d;
    // Four boundary segments: the bottom edge is split between an X segment
    // (left half) and a Z segment (right half), so that both logical types end
    // on the shuttling-adjacent edge.
    CssCode code = build_planar("wide-d" + std::to_string(d), d, 2 * d, [D](Side side, int pos) {
        switch (side) {
            case Side::Bottom:
                if (pos <= D - 2) {
                    return CheckType::X;
                }
                return pos <= 2 * D - 2 ? CheckType::Z : CheckType::X;
            case Side::Right:
                return CheckType::X;
            default:
                return CheckType::Z;
        }
    });
    code.d_estimate = d;
    return code;
}

CssCode hgp(const ClassicalCode &a, const ClassicalCode &b) {
    const BitMatrix &A = a.h;
    const BitMatrix &B = b.h;
    size_t ra = A.rows(), na = A.cols(), rb = B.rows(), nb = B.cols();
    BitMatrix hx = hstack(kron(A, BitMatrix::identity(nb)), kron(BitMatrix::identity(ra), transpose(B)));
    BitMatrix hz = hstack(kron(BitMatrix::identity(na), B), kron(transpose(A), BitMatrix::identity(rb)));
    return make_css("hgp(" + a.name + "," + b.name + ")", std::move(hx), std::move(hz));
}

BitMatrix circulant(size_t l, const std::vector<size_t> &exponents) {
    BitMatrix m(l, l);
    for (size_t e : exponents) {
        if (e >= l) {
            throw std::invalid_argument("circulant exponent out of range");
        }
        for (size_t i = 0; i < l; i++) {
            m.flip(i, (i + l - e) % l);
        }
    }
    return m;
}

CssCode generalised_bicycle(const BitMatrix &c, const BitMatrix &d, std::string name) {
    if (c.rows() != c.cols() || d.rows() != d.cols() || c.rows() != d.rows()) {
        throw std::invalid_argument("generalised bicycle blocks must be square and of equal size");
    }
    if (!(matmul(c, d) == matmul(d, c))) {
        throw std::invalid_argument("generalised bicycle blocks do not commute");
    }
    return make_css(std::move(name), hstack(c, d), hstack(transpose(d), transpose(c)));
}

CssCode generalised_bicycle(size_t l, const std::vector<size_t> &a, const std::vector<size_t> &b, std::string name) {
    return generalised_bicycle(circulant(l, a), circulant(l, b), std::move(name));
}

namespace {

/// Elimination over the columns in the given order; returns the reduced rows.
void rref_in_order(BitMatrix &m, const std::vector<size_t> &order) {
    size_t next = 0;
    for (size_t c : order) {
        if (next == m.rows()) {
            break;
        }
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
        next++;
    }
}

uint64_t signature(const BitMatrix &dual, const uint64_t *v) {
    uint64_t sig = 0;
    for (size_t r = 0; r < dual.rows(); r++) {
        const uint64_t *p = dual.row_data(r);
        uint64_t acc = 0;
        for (size_t w = 0; w < dual.words_per_row(); w++) {
            acc ^= p[w] & v[w];
        }
        sig |= uint64_t(std::popcount(acc) & 1) << r;
    }
    return sig;
}

size_t weight_of(const uint64_t *v, size_t words) {
    size_t c = 0;
    for (size_t w = 0; w < words; w++) {
        c += std::popcount(v[w]);
    }
    return c;
}

/// Minimum weight of a vector in the row span of `gen` whose signature against
/// `dual` is nonzero (or, when dual is empty-rowed and `any_nonzero`, any nonzero vector).
DistanceResult min_weight_search(const BitMatrix &gen, const BitMatrix &dual, bool any_nonzero, const DistanceOptions &opts) {
    size_t n = gen.cols();
    if (dual.rows() > 64) {
        throw std::invalid_argument("distance search supports at most 64 logical qubits");
    }
    DistanceResult best;
    best.weight = SIZE_MAX;
    auto accept = [&](const uint64_t *v) {
        bool ok = any_nonzero ? weight_of(v, gen.words_per_row()) > 0 : signature(dual, v) != 0;
        if (!ok) {
            return;
        }
        size_t w = weight_of(v, gen.words_per_row());
        if (w < best.weight) {
            best.weight = w;
            best.witness = BitVector(n);
            std::copy(v, v + gen.words_per_row(), best.witness.data());
        }
    };
    size_t K = gen.rows();
    if (K == 0) {
        best.weight = 0;
        best.exact = true;
        best.witness = BitVector(n);
        return best;
    }
    if (K < 63 && (uint64_t{1} << K) <= opts.exhaustive_limit) {
        std::vector<uint64_t> v(gen.words_per_row(), 0);
        for (uint64_t i = 1; i < (uint64_t{1} << K); i++) {
            size_t b = std::countr_zero(i);
            const uint64_t *row = gen.row_data(b);
            for (size_t w = 0; w < v.size(); w++) {
                v[w] ^= row[w];
            }
            accept(v.data());
        }
        best.exact = true;
        return best;
    }
    std::mt19937_64 rng(opts.seed);
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    BitMatrix work;
    for (size_t t = 0; t < opts.trials; t++) {
        std::shuffle(order.begin(), order.end(), rng);
        work = gen;
        rref_in_order(work, order);
        for (size_t r = 0; r < work.rows(); r++) {
            accept(work.row_data(r));
        }
    }
    best.exact = false;
    return best;
}

}  // namespace

DistanceResult estimate_distance(const CssCode &code, CheckType pauli, const DistanceOptions &opts) {
    // X logicals live in ker(hz) and are detected by pairing with Lz.
    const BitMatrix &checks = pauli == CheckType::X ? code.hz : code.hx;
    const BitMatrix &dual = pauli == CheckType::X ? code.lz : code.lx;
    if (dual.rows() == 0) {
        throw std::invalid_argument("code has no logical qubits");
    }
    return min_weight_search(nullspace_basis(checks), dual, false, opts);
}

DistanceResult estimate_distance(const CssCode &code, const DistanceOptions &opts) {
    DistanceResult x = estimate_distance(code, CheckType::X, opts);
    DistanceResult z = estimate_distance(code, CheckType::Z, opts);
    bool exact = x.exact && z.exact;
    DistanceResult best = z.weight < x.weight ? std::move(z) : std::move(x);
    best.exact = exact;
    return best;
}

DistanceResult classical_distance(const BitMatrix &h, const DistanceOptions &opts) {
    return min_weight_search(nullspace_basis(h), BitMatrix(0, h.cols()), true, opts);
}

}  // namespace sqec
