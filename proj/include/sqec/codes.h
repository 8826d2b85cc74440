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

#ifndef SQEC_CODES_H
#define SQEC_CODES_H

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqec/gf2.h"

namespace sqec {

enum class CheckType : uint8_t { X = 0, Z = 1 };

struct ClassicalCode {
    BitMatrix h;
    size_t n = 0;
    size_t k = 0;
    std::optional<size_t> d;
    std::string name;
};

/// Corner slots of a plaquette in the order the surface cycle visits them.
enum Corner : uint8_t { SW = 0, NE = 1, SE = 2, NW = 3 };

/// One stabiliser of a planar (rotated surface) patch. Data qubit (y, c) has
/// index c * height + y, with y = 0 the top row and c = 0 the left column.
struct PlanarCheck {
    CheckType type;
    /// Row index within hx or hz.
    size_t row;
    /// Coordinates of the plaquette's NW corner (may be -1 on the boundary).
    int y;
    int c;
    /// Data qubit index per Corner, or -1 when the corner lies off the patch.
    std::array<int, 4> corners;
};

struct PlanarLayout {
    size_t height = 0;
    size_t width = 0;
    std::vector<PlanarCheck> checks;

    size_t data_index(size_t y, size_t c) const {
        return c * height + y;
    }
};

struct CssCode {
    std::string name;
    size_t n = 0;
    size_t k = 0;
    BitMatrix hx;
    BitMatrix hz;
    BitMatrix lx;
    BitMatrix lz;
    std::optional<size_t> d_estimate;
    std::optional<PlanarLayout> planar;
};

ClassicalCode make_classical(BitMatrix h, std::string name);
ClassicalCode repetition_code(size_t n);
/// The 14x17 seed matrix of the [17,3,8] classical LDPC code.
ClassicalCode appendix_b_code();

/// Validates commutation, computes k and logical operators.
CssCode make_css(std::string name, BitMatrix hx, BitMatrix hz);

CssCode rotated_surface_code(size_t d);
/// A height d by width 2d patch with both logical types reaching the bottom boundary.
CssCode wide_surface_code(size_t d);
CssCode hgp(const ClassicalCode &a, const ClassicalCode &b);

BitMatrix circulant(size_t l, const std::vector<size_t> &exponents);
CssCode generalised_bicycle(const BitMatrix &c, const BitMatrix &d, std::string name = "gb");
/// Generalised bicycle code from the exponent sets of two circulants of size l.
CssCode generalised_bicycle(size_t l, const std::vector<size_t> &a, const std::vector<size_t> &b, std::string name = "gb");

/// Returns (Lx, Lz) with Lx Lz^T = I.
std::pair<BitMatrix, BitMatrix> compute_logicals(const BitMatrix &hx, const BitMatrix &hz);

struct DistanceResult {
    size_t weight = 0;
    bool exact = false;
    /// A logical operator attaining the weight.
    BitVector witness;
};

struct DistanceOptions {
    /// Exhaustive search is used when the number of enumerated vectors is at most this.
    uint64_t exhaustive_limit = uint64_t{1} << 24;
    size_t trials = 100000;
    uint64_t seed = 1;
};

/// Minimum weight of a logical with the given Pauli type. An X logical is a
/// vector in ker(hz) outside rowspace(hx).
DistanceResult estimate_distance(const CssCode &code, CheckType pauli, const DistanceOptions &opts = {});
/// Minimum over both Pauli types.
DistanceResult estimate_distance(const CssCode &code, const DistanceOptions &opts = {});
/// Minimum weight of a nonzero codeword of a classical code.
DistanceResult classical_distance(const BitMatrix &h, const DistanceOptions &opts = {});

}  // namespace sqec

#endif
