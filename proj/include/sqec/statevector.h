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

#ifndef SQEC_STATEVECTOR_H
#define SQEC_STATEVECTOR_H

#include <complex>
#include <cstdint>
#include <vector>

#include "sqec/circuit.h"

namespace sqec {

/// Dense state over n qubits; bit q of the amplitude index is qubit q.
class StateVector {
   public:
    explicit StateVector(size_t n);
    /// Computational basis state; bit q of `bits` is qubit q.
    static StateVector basis(size_t n, uint64_t bits);

    size_t num_qubits() const {
        return n_;
    }
    std::vector<std::complex<double>> &amplitudes() {
        return amp_;
    }
    const std::vector<std::complex<double>> &amplitudes() const {
        return amp_;
    }

    void h(size_t q);
    void s(size_t q);
    void s_dag(size_t q);
    void x(size_t q);
    void y(size_t q);
    void z(size_t q);
    void cz(size_t a, size_t b);
    void cnot(size_t c, size_t t);

    double norm() const;
    void normalize();
    double prob_one(size_t q) const;
    /// Projects qubit q onto `bit` and renormalizes.
    void collapse(size_t q, bool bit);
    /// Probability that spins (a, b) are in (|01> - |10>)/sqrt 2.
    double singlet_probability(size_t a, size_t b) const;
    /// Projects the pair onto the singlet or onto its orthogonal complement.
    void project_singlet(size_t a, size_t b, bool singlet);
    /// Puts (a, b) into the singlet; the pair must be unentangled with the rest.
    void prepare_singlet(size_t a, size_t b);
    void reset(size_t q);
    /// Two-spin reduced amplitudes of (a, b) when the rest is in a fixed
    /// product state; order |00>, |01>, |10>, |11> with a the first label.
    std::vector<std::complex<double>> pair_state(size_t a, size_t b) const;

   private:
    size_t n_;
    std::vector<std::complex<double>> amp_;
};

/// |<a|b>|
double overlap(const StateVector &a, const StateVector &b);

struct StateVectorResult {
    StateVector state;
    /// Per measurement: outcome (for MEAS_ST 0 = singlet, 1 = triplet).
    std::vector<int> outcomes;
    /// Probability of the reported outcome.
    std::vector<double> probabilities;
};

/// Exact application of a small fragment. Measurements report the more likely
/// outcome and collapse onto it.
StateVectorResult statevector_check(const Circuit &fragment, const StateVector &input, size_t max_qubits = 6);

}  // namespace sqec

#endif
