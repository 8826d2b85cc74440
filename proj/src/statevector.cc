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

#include "sqec/statevector.h"

#include <cmath>
#include <stdexcept>

namespace sqec {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

StateVector::StateVector(size_t n) : n_(n), amp_(size_t{1} << n, 0.0) {
    if (n > 26) {
        throw std::invalid_argument("state vector too large");
    }
    amp_[0] = 1.0;
}

StateVector StateVector::basis(size_t n, uint64_t bits) {
    StateVector s(n);
    s.amp_[0] = 0.0;
    s.amp_[bits] = 1.0;
    return s;
}

void StateVector::h(size_t q) {
    size_t m = size_t{1} << q;
    for (size_t i = 0; i < amp_.size(); i++) {
        if (!(i & m)) {
            auto a = amp_[i], b = amp_[i | m];
            amp_[i] = (a + b) * kInvSqrt2;
            amp_[i | m] = (a - b) * kInvSqrt2;
        }
    }
}

void StateVector::s(size_t q) {
    size_t m = size_t{1} << q;
    for (size_t i = 0; i < amp_.size(); i++) {
        if (i & m) {
            amp_[i] *= std::complex<double>(0, 1);
        }
    }
}

void StateVector::s_dag(size_t q) {
    size_t m = size_t{1} << q;
    for (size_t i = 0; i < amp_.size(); i++) {
        if (i & m) {
            amp_[i] *= std::complex<double>(0, -1);
        }
    }
}

void StateVector::x(size_t q) {
    size_t m = size_t{1} << q;
    for (size_t i = 0; i < amp_.size(); i++) {
        if (!(i & m)) {
            std::swap(amp_[i], amp_[i | m]);
        }
    }
}

void StateVector::z(size_t q) {
    size_t m = size_t{1} << q;
    for (size_t i = 0; i < amp_.size(); i++) {
        if (i & m) {
            amp_[i] = -amp_[i];
        }
    }
}

void StateVector::y(size_t q) {
    z(q);
    x(q);
    size_t all = amp_.size();
    for (size_t i = 0; i < all; i++) {
        amp_[i] *= std::complex<double>(0, 1);
    }
}

void StateVector::cz(size_t a, size_t b) {
    size_t m = (size_t{1} << a) | (size_t{1} << b);
    for (size_t i = 0; i < amp_.size(); i++) {
        if ((i & m) == m) {
            amp_[i] = -amp_[i];
        }
    }
}

void StateVector::cnot(size_t c, size_t t) {
    size_t mc = size_t{1} << c, mt = size_t{1} << t;
    for (size_t i = 0; i < amp_.size(); i++) {
        if ((i & mc) && !(i & mt)) {
            std::swap(amp_[i], amp_[i | mt]);
        }
    }
}

double StateVector::norm() const {
    double s = 0;
    for (const auto &a : amp_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

void StateVector::normalize() {
    double n = norm();
    if (n == 0) {
        throw std::logic_error("cannot normalize a zero state");
    }
    for (auto &a : amp_) {
        a /= n;
    }
}

double StateVector::prob_one(size_t q) const {
    size_t m = size_t{1} << q;
    double p = 0;
    for (size_t i = 0; i < amp_.size(); i++) {
        if (i & m) {
            p += std::norm(amp_[i]);
        }
    }
    return p;
}

void StateVector::collapse(size_t q, bool bit) {
    size_t m = size_t{1} << q;
    for (size_t i = 0; i < amp_.size(); i++) {
        if (((i & m) != 0) != bit) {
            amp_[i] = 0;
        }
    }
    normalize();
}

double StateVector::singlet_probability(size_t a, size_t b) const {
    size_t ma = size_t{1} << a, mb = size_t{1} << b;
    double p = 0;
    for (size_t i = 0; i < amp_.size(); i++) {
        if (!(i & ma) && (i & mb)) {
            // |01> has a = 0, b = 1; |10> is the partner index.
            auto s = (amp_[i] - amp_[(i ^ mb) | ma]) * kInvSqrt2;
            p += std::norm(s);
        }
    }
    return p;
}

void StateVector::project_singlet(size_t a, size_t b, bool singlet) {
    size_t ma = size_t{1} << a, mb = size_t{1} << b;
    for (size_t i = 0; i < amp_.size(); i++) {
        if (!(i & ma) && (i & mb)) {
            size_t j = (i ^ mb) | ma;
            auto s = (amp_[i] - amp_[j]) * kInvSqrt2;
            if (singlet) {
                amp_[i] = s * kInvSqrt2;
                amp_[j] = -s * kInvSqrt2;
            } else {
                amp_[i] -= s * kInvSqrt2;
                amp_[j] += s * kInvSqrt2;
            }
        } else if (singlet && ((i & ma) != 0) == ((i & mb) != 0)) {
            amp_[i] = 0;
        }
    }
    normalize();
}

void StateVector::reset(size_t q) {
    double p1 = prob_one(q);
    bool bit = p1 > 0.5;
    collapse(q, bit);
    if (bit) {
        x(q);
    }
}

void StateVector::prepare_singlet(size_t a, size_t b) {
    reset(a);
    reset(b);
    x(b);
    h(a);
    cnot(a, b);
    z(a);
}

std::vector<std::complex<double>> StateVector::pair_state(size_t a, size_t b) const {
    size_t ma = size_t{1} << a, mb = size_t{1} << b;
    // Pick the rest-configuration with the largest weight.
    size_t best = 0;
    double bw = -1;
    for (size_t i = 0; i < amp_.size(); i++) {
        double w = std::norm(amp_[i]);
        if (w > bw + 1e-15) {
            bw = w;
            best = i & ~(ma | mb);
        }
    }
    std::vector<std::complex<double>> out(4);
    out[0] = amp_[best];
    out[1] = amp_[best | mb];
    out[2] = amp_[best | ma];
    out[3] = amp_[best | ma | mb];
    double n = 0;
    for (auto &v : out) {
        n += std::norm(v);
    }
    n = std::sqrt(n);
    for (auto &v : out) {
        v /= n;
    }
    return out;
}

double overlap(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("state size mismatch");
    }
    std::complex<double> s = 0;
    for (size_t i = 0; i < a.amplitudes().size(); i++) {
        s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    }
    return std::abs(s);
}

StateVectorResult statevector_check(const Circuit &fragment, const StateVector &input, size_t max_qubits) {
    if (fragment.qubits.size() > max_qubits) {
        throw std::invalid_argument("statevector_check supports at most " + std::to_string(max_qubits) + " qubits");
    }
    if (input.num_qubits() != fragment.qubits.size()) {
        throw std::invalid_argument("input state does not match the fragment's qubit count");
    }
    StateVectorResult res{input, {}, {}};
    StateVector &sv = res.state;
    for (const auto &layer : fragment.layers) {
        for (const auto &op : layer.ops) {
            const auto &t = op.targets;
            switch (op.type) {
                case OpType::INIT_Z:
                    for (uint32_t q : t) {
                        sv.reset(q);
                    }
                    break;
                case OpType::INIT_SINGLET:
                    sv.prepare_singlet(t[0], t[1]);
                    break;
                case OpType::MEAS_Z:
                    for (uint32_t q : t) {
                        double p1 = sv.prob_one(q);
                        bool bit = p1 > 0.5;
                        res.outcomes.push_back(bit);
                        res.probabilities.push_back(bit ? p1 : 1 - p1);
                        sv.collapse(q, bit);
                    }
                    break;
                case OpType::MEAS_ST: {
                    double ps = sv.singlet_probability(t[0], t[1]);
                    bool singlet = ps >= 0.5;
                    res.outcomes.push_back(singlet ? 0 : 1);
                    res.probabilities.push_back(singlet ? ps : 1 - ps);
                    sv.project_singlet(t[0], t[1], singlet);
                    break;
                }
                case OpType::CZ:
                    sv.cz(t[0], t[1]);
                    break;
                case OpType::CNOT:
                    sv.cnot(t[0], t[1]);
                    break;
                case OpType::H:
                    sv.h(t[0]);
                    break;
                case OpType::H_SEMIGLOBAL:
                    for (size_t q = 0; q < fragment.qubits.size(); q++) {
                        if (fragment.qubits[q].rail == op.rail) {
                            sv.h(q);
                        }
                    }
                    break;
                case OpType::S:
                    for (uint32_t q : t) {
                        sv.s(q);
                    }
                    break;
                case OpType::S_DAG:
                    for (uint32_t q : t) {
                        sv.s_dag(q);
                    }
                    break;
                case OpType::SHUTTLE:
                case OpType::IDLE:
                case OpType::TWIRL:
                    break;
            }
        }
    }
    return res;
}

}  // namespace sqec
