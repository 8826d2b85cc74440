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

#include "sqec/sampler.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace sqec {

LoweredCircuit lower(const Circuit &c) {
    LoweredCircuit lc;
    lc.index.assign(c.qubits.size(), 0);
    std::vector<bool> is_pair(c.qubits.size(), false);
    for (uint32_t q = 0; q < c.qubits.size(); q++) {
        int partner = c.qubits[q].partner;
        if (partner >= 0 && (uint32_t)partner < q) {
            lc.index[q] = lc.index[(size_t)partner];
            is_pair[q] = true;
        } else {
            lc.index[q] = (uint32_t)lc.n_qubits++;
            is_pair[q] = partner >= 0;
        }
    }
    auto single = [&](uint32_t q, const char *what) {
        if (is_pair[q]) {
            throw std::invalid_argument(std::string(what) + " on a singlet-triplet pair has no effective-qubit lowering");
        }
        return lc.index[q];
    };
    uint32_t rec = 0;
    for (const Layer &layer : c.layers) {
        std::vector<LoweredOp> ops;
        for (const Op &op : layer.ops) {
            switch (op.type) {
                case OpType::INIT_Z:
                    for (uint32_t q : op.targets) {
                        ops.push_back({LOpType::R, lc.index[q]});
                    }
                    break;
                case OpType::INIT_SINGLET:
                    for (size_t i = 0; i < op.targets.size(); i += 2) {
                        ops.push_back({LOpType::R, lc.index[op.targets[i]]});
                    }
                    break;
                case OpType::MEAS_Z:
                    for (uint32_t q : op.targets) {
                        ops.push_back({LOpType::M, lc.index[q], 0, rec++});
                    }
                    break;
                case OpType::MEAS_ST:
                    for (size_t i = 0; i < op.targets.size(); i += 2) {
                        ops.push_back({LOpType::M, lc.index[op.targets[i]], 0, rec++});
                    }
                    break;
                case OpType::CZ: {
                    uint32_t a = op.targets[0], b = op.targets[1];
                    if (is_pair[a] && is_pair[b]) {
                        throw std::invalid_argument("CZ between two singlet-triplet pairs has no effective-qubit lowering");
                    }
                    if (is_pair[a]) {
                        std::swap(a, b);
                    }
                    ops.push_back({is_pair[b] ? LOpType::CNOT : LOpType::CZ, lc.index[a], lc.index[b]});
                    break;
                }
                case OpType::CNOT:
                    ops.push_back({LOpType::CNOT, single(op.targets[0], "CNOT"), single(op.targets[1], "CNOT")});
                    break;
                case OpType::H:
                    for (uint32_t q : op.targets) {
                        ops.push_back({LOpType::H, single(q, "H")});
                    }
                    break;
                case OpType::H_SEMIGLOBAL:
                    for (uint32_t q = 0; q < c.qubits.size(); q++) {
                        if (c.qubits[q].rail == op.rail && !(c.qubits[q].partner >= 0 && (uint32_t)c.qubits[q].partner < q)) {
                            ops.push_back({LOpType::H, single(q, "H")});
                        }
                    }
                    break;
                case OpType::S:
                case OpType::S_DAG:
                    // S and S_DAG act identically on Pauli frames.
                    for (uint32_t q : op.targets) {
                        ops.push_back({LOpType::S, single(q, "S")});
                    }
                    break;
                case OpType::SHUTTLE:
                case OpType::IDLE:
                case OpType::TWIRL:
                    break;
            }
        }
        lc.layers.push_back(std::move(ops));
    }
    lc.n_measurements = rec;
    return lc;
}

BitMatrix DetectorErrorModel::check_matrix() const {
    std::vector<std::pair<size_t, size_t>> e;
    for (size_t j = 0; j < faults.size(); j++) {
        for (uint32_t d : faults[j].detectors) {
            e.push_back({d, j});
        }
    }
    return BitMatrix::from_entries(n_detectors, faults.size(), e);
}

BitMatrix DetectorErrorModel::observable_matrix() const {
    std::vector<std::pair<size_t, size_t>> e;
    for (size_t j = 0; j < faults.size(); j++) {
        for (uint32_t o : faults[j].observables) {
            e.push_back({o, j});
        }
    }
    return BitMatrix::from_entries(n_observables, faults.size(), e);
}

std::vector<double> DetectorErrorModel::priors() const {
    std::vector<double> out;
    for (const auto &f : faults) {
        out.push_back(f.p);
    }
    return out;
}

namespace {

size_t term_count(ChannelType t) {
    switch (t) {
        case ChannelType::DephaseZ:
        case ChannelType::MeasFlip:
            return 1;
        case ChannelType::Depolarize1:
            return 3;
        case ChannelType::Depolarize2:
            return 15;
    }
    return 0;
}

/// Pauli code and probability of term i of a channel.
std::pair<uint8_t, double> term(const Channel &ch, size_t i) {
    switch (ch.type) {
        case ChannelType::DephaseZ:
            return {2, ch.p};
        case ChannelType::MeasFlip:
            return {0, ch.p};
        case ChannelType::Depolarize1:
            return {(uint8_t)(i + 1), ch.p / 3};
        case ChannelType::Depolarize2:
            return {(uint8_t)(i + 1), ch.p / 15};
    }
    return {0, 0};
}

struct VecHash {
    size_t operator()(const std::vector<uint32_t> &v) const {
        uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (uint32_t x : v) {
            h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

}  // namespace

void records_to_signature(const Circuit &c, const std::vector<uint32_t> &records, std::vector<uint32_t> &detectors,
                          std::vector<uint32_t> &observables) {
    std::vector<bool> flipped(c.num_measurements(), false);
    for (uint32_t r : records) {
        flipped[r] = !flipped[r];
    }
    detectors.clear();
    observables.clear();
    for (size_t i = 0; i < c.detectors.size(); i++) {
        bool v = false;
        for (uint32_t r : c.detectors[i].records) {
            v ^= flipped[r];
        }
        if (v) {
            detectors.push_back((uint32_t)i);
        }
    }
    for (size_t i = 0; i < c.observables.size(); i++) {
        bool v = false;
        for (uint32_t r : c.observables[i].records) {
            v ^= flipped[r];
        }
        if (v) {
            observables.push_back((uint32_t)i);
        }
    }
}

DetectorErrorModel build_dem(const NoisyCircuit &nc, const DemOptions &opts) {
    return build_dem(nc, nc.base.experiment, opts);
}

DetectorErrorModel build_dem(const NoisyCircuit &nc, Experiment exp, const DemOptions &opts) {
    const Circuit &c = nc.base;
    if (exp != c.experiment) {
        throw std::invalid_argument("circuit was synthesized for the other memory experiment");
    }
    CheckType tracked = exp == Experiment::MemoryZErrors ? CheckType::X : CheckType::Z;
    LoweredCircuit lc = lower(c);

    DetectorErrorModel dem;
    for (size_t i = 0; i < c.detectors.size(); i++) {
        if (opts.all_detectors || c.detectors[i].type == tracked) {
            dem.detector_origin.push_back((uint32_t)i);
        }
    }
    for (size_t i = 0; i < c.observables.size(); i++) {
        if (opts.all_detectors || c.observables[i].type == tracked) {
            dem.observable_origin.push_back((uint32_t)i);
        }
    }
    dem.n_detectors = dem.detector_origin.size();
    dem.n_observables = dem.observable_origin.size();
    size_t n_sig = dem.n_detectors + dem.n_observables;

    // Signature bits touched by each measurement record.
    std::vector<std::vector<uint32_t>> rec_sig(lc.n_measurements);
    for (size_t i = 0; i < dem.n_detectors; i++) {
        for (uint32_t r : c.detectors[dem.detector_origin[i]].records) {
            rec_sig.at(r).push_back((uint32_t)i);
        }
    }
    for (size_t i = 0; i < dem.n_observables; i++) {
        for (uint32_t r : c.observables[dem.observable_origin[i]].records) {
            rec_sig.at(r).push_back((uint32_t)(dem.n_detectors + i));
        }
    }
    auto rec_vector = [&](uint32_t r) {
        BitVector v(n_sig);
        for (uint32_t s : rec_sig[r]) {
            v.flip(s);
        }
        return v;
    };

    // Channels grouped by anchor point.
    std::vector<std::vector<size_t>> after(c.layers.size()), before(c.layers.size());
    for (size_t i = 0; i < nc.channels.size(); i++) {
        const Channel &ch = nc.channels[i];
        if (ch.layer >= c.layers.size()) {
            throw std::invalid_argument("channel anchored outside the circuit");
        }
        (ch.before ? before : after)[ch.layer].push_back(i);
    }

    // term signatures, indexed by channel then term
    std::vector<std::vector<BitVector>> sigs(nc.channels.size());
    std::vector<BitVector> sx(lc.n_qubits, BitVector(n_sig)), sz(lc.n_qubits, BitVector(n_sig));
    auto evaluate = [&](size_t ci) {
        const Channel &ch = nc.channels[ci];
        size_t nt = term_count(ch.type);
        auto &out = sigs[ci];
        out.reserve(nt);
        for (size_t t = 0; t < nt; t++) {
            auto [pauli, p] = term(ch, t);
            if (ch.type == ChannelType::MeasFlip) {
                out.push_back(rec_vector(ch.record));
                continue;
            }
            BitVector v(n_sig);
            for (size_t k = 0; k < ch.qubits.size(); k++) {
                uint32_t q = lc.index[ch.qubits[k]];
                if (pauli >> (2 * k) & 1) {
                    v ^= sx[q];
                }
                if (pauli >> (2 * k + 1) & 1) {
                    v ^= sz[q];
                }
            }
            out.push_back(std::move(v));
        }
    };

    for (size_t l = c.layers.size(); l-- > 0;) {
        for (size_t ci : after[l]) {
            evaluate(ci);
        }
        for (const LoweredOp &op : lc.layers[l]) {
            switch (op.type) {
                case LOpType::R:
                    sx[op.a].clear();
                    sz[op.a].clear();
                    break;
                case LOpType::M:
                    for (uint32_t s : rec_sig[op.record]) {
                        sx[op.a].flip(s);
                    }
                    break;
                case LOpType::H:
                    std::swap(sx[op.a], sz[op.a]);
                    break;
                case LOpType::S:
                    sx[op.a] ^= sz[op.a];
                    break;
                case LOpType::CZ:
                    sx[op.a] ^= sz[op.b];
                    sx[op.b] ^= sz[op.a];
                    break;
                case LOpType::CNOT:
                    sx[op.a] ^= sx[op.b];
                    sz[op.b] ^= sz[op.a];
                    break;
            }
        }
        for (size_t ci : before[l]) {
            evaluate(ci);
        }
    }

    // Merge in channel order so the fault list is deterministic.
    std::unordered_map<std::vector<uint32_t>, size_t, VecHash> seen;
    std::vector<uint32_t> key;
    for (size_t ci = 0; ci < nc.channels.size(); ci++) {
        const Channel &ch = nc.channels[ci];
        for (size_t t = 0; t < sigs[ci].size(); t++) {
            auto [pauli, p] = term(ch, t);
            if (p <= 0.0) {
                continue;
            }
            key.clear();
            for (size_t s : sigs[ci][t].ones()) {
                key.push_back((uint32_t)s);
            }
            if (key.empty()) {
                continue;
            }
            auto [it, fresh] = seen.emplace(key, dem.faults.size());
            if (fresh) {
                Fault f{p, {}, {}};
                for (uint32_t s : key) {
                    (s < dem.n_detectors ? f.detectors : f.observables)
                        .push_back(s < dem.n_detectors ? s : (uint32_t)(s - dem.n_detectors));
                }
                dem.faults.push_back(std::move(f));
                if (opts.provenance) {
                    dem.provenance.push_back({});
                }
            } else {
                Fault &f = dem.faults[it->second];
                f.p = xor_prob(f.p, p);
            }
            if (opts.provenance) {
                dem.provenance[it->second].push_back(FaultSource{(uint32_t)ci, pauli});
            }
        }
    }
    return dem;
}

std::vector<uint32_t> propagate_forward(const LoweredCircuit &lc, const Channel &ch, uint8_t pauli) {
    if (ch.type == ChannelType::MeasFlip) {
        return {ch.record};
    }
    std::vector<uint8_t> x(lc.n_qubits, 0), z(lc.n_qubits, 0);
    for (size_t k = 0; k < ch.qubits.size(); k++) {
        uint32_t q = lc.index[ch.qubits[k]];
        x[q] ^= pauli >> (2 * k) & 1;
        z[q] ^= pauli >> (2 * k + 1) & 1;
    }
    std::vector<uint32_t> flipped;
    for (size_t l = ch.before ? ch.layer : ch.layer + 1; l < lc.layers.size(); l++) {
        for (const LoweredOp &op : lc.layers[l]) {
            switch (op.type) {
                case LOpType::R:
                    x[op.a] = z[op.a] = 0;
                    break;
                case LOpType::M:
                    if (x[op.a]) {
                        flipped.push_back(op.record);
                    }
                    break;
                case LOpType::H:
                    std::swap(x[op.a], z[op.a]);
                    break;
                case LOpType::S:
                    z[op.a] ^= x[op.a];
                    break;
                case LOpType::CZ:
                    z[op.a] ^= x[op.b];
                    z[op.b] ^= x[op.a];
                    break;
                case LOpType::CNOT:
                    x[op.b] ^= x[op.a];
                    z[op.a] ^= z[op.b];
                    break;
            }
        }
    }
    return flipped;
}

bool SampleBatch::operator==(const SampleBatch &o) const {
    return shots == o.shots && n_detectors == o.n_detectors && n_observables == o.n_observables &&
           syndromes == o.syndromes && observable_flips == o.observable_flips;
}

size_t default_workers() {
    if (const char *env = std::getenv("SQEC_WORKERS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1) {
            return (size_t)n;
        }
    }
    return std::max<size_t>(1, std::thread::hardware_concurrency());
}

namespace {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform double in (0, 1].
double unit(std::mt19937_64 &rng) {
    return (double)((rng() >> 11) + 1) * 0x1.0p-53;
}

}  // namespace

SampleBatch sample(const DetectorErrorModel &dem, size_t shots, uint64_t seed, size_t workers, uint64_t first_shot) {
    if (shots < 1) {
        throw std::invalid_argument("shots must be at least 1");
    }
    SampleBatch b;
    b.shots = shots;
    b.n_detectors = dem.n_detectors;
    b.n_observables = dem.n_observables;
    b.seed = seed;
    b.syndromes.assign(shots, BitVector(dem.n_detectors));
    b.observable_flips.assign(shots, BitVector(dem.n_observables));

    double pmax = 0.0;
    for (const auto &f : dem.faults) {
        pmax = std::max(pmax, f.p);
    }
    size_t n = dem.faults.size();
    // Candidate faults are drawn at rate pmax by geometric skipping and then
    // thinned to their own probability.
    double log_q = std::log1p(-pmax);
    auto run = [&](size_t lo, size_t hi) {
        for (size_t s = lo; s < hi; s++) {
            if (pmax <= 0.0) {
                continue;
            }
            std::mt19937_64 rng(mix64(seed ^ mix64(first_shot + s)));
            size_t i = 0;
            while (true) {
                double gap = std::floor(std::log(unit(rng)) / log_q);
                if (!(gap < (double)(n - i))) {
                    break;
                }
                i += (size_t)gap;
                const Fault &f = dem.faults[i];
                if (f.p >= pmax || unit(rng) * pmax <= f.p) {
                    for (uint32_t d : f.detectors) {
                        b.syndromes[s].flip(d);
                    }
                    for (uint32_t o : f.observables) {
                        b.observable_flips[s].flip(o);
                    }
                }
                i++;
            }
        }
    };
    if (workers == 0) {
        workers = default_workers();
    }
    workers = std::min(workers, shots);
    if (workers <= 1) {
        run(0, shots);
    } else {
        std::vector<std::thread> pool;
        for (size_t w = 0; w < workers; w++) {
            pool.emplace_back(run, shots * w / workers, shots * (w + 1) / workers);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    return b;
}

std::pair<BitVector, BitVector> inject_and_check(const DetectorErrorModel &dem, const std::vector<size_t> &faults) {
    BitVector det(dem.n_detectors), obs(dem.n_observables);
    for (size_t i : faults) {
        if (i >= dem.faults.size()) {
            throw std::out_of_range("fault index out of range");
        }
        for (uint32_t d : dem.faults[i].detectors) {
            det.flip(d);
        }
        for (uint32_t o : dem.faults[i].observables) {
            obs.flip(o);
        }
    }
    return {det, obs};
}

void write_dem(std::ostream &out, const DetectorErrorModel &dem) {
    out << "# detectors " << dem.n_detectors << " observables " << dem.n_observables << "\n";
    out.precision(17);
    for (const auto &f : dem.faults) {
        out << f.p;
        for (uint32_t d : f.detectors) {
            out << ' ' << d;
        }
        out << " |";
        for (uint32_t o : f.observables) {
            out << ' ' << o;
        }
        out << '\n';
    }
}

DetectorErrorModel read_dem(std::istream &in) {
    DetectorErrorModel dem;
    std::string line;
    size_t lineno = 0;
    bool header = false;
    auto fail = [&](const std::string &msg) {
        throw std::runtime_error("dem line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        if (line[0] == '#') {
            std::string hash, w1, w2;
            if (!header && (ss >> hash >> w1 >> dem.n_detectors >> w2 >> dem.n_observables) && w1 == "detectors" &&
                w2 == "observables") {
                header = true;
            }
            continue;
        }
        if (!header) {
            fail("missing '# detectors N observables M' header");
        }
        Fault f{};
        if (!(ss >> f.p) || !(f.p > 0.0 && f.p < 1.0)) {
            fail("bad probability");
        }
        std::string tok;
        bool obs = false;
        while (ss >> tok) {
            if (tok == "|") {
                obs = true;
                continue;
            }
            char *end = nullptr;
            unsigned long v = std::strtoul(tok.c_str(), &end, 10);
            if (*end != '\0' || v >= (obs ? dem.n_observables : dem.n_detectors)) {
                fail("bad index '" + tok + "'");
            }
            (obs ? f.observables : f.detectors).push_back((uint32_t)v);
        }
        if (!obs) {
            fail("missing '|'");
        }
        dem.faults.push_back(std::move(f));
    }
    if (!header) {
        fail("empty model");
    }
    return dem;
}

namespace {
constexpr uint16_t kBatchMagic = 0x5153;
}

void write_batch(std::ostream &out, const SampleBatch &b) {
    if (b.n_detectors > 0xffff || b.shots > 0xffffffffULL) {
        throw std::invalid_argument("batch too large for the binary format");
    }
    uint8_t hdr[8];
    uint16_t det = (uint16_t)b.n_detectors;
    uint32_t shots = (uint32_t)b.shots;
    hdr[0] = kBatchMagic & 0xff;
    hdr[1] = kBatchMagic >> 8;
    hdr[2] = det & 0xff;
    hdr[3] = det >> 8;
    for (int i = 0; i < 4; i++) {
        hdr[4 + i] = (shots >> (8 * i)) & 0xff;
    }
    out.write((const char *)hdr, 8);
    size_t bits = b.n_detectors + b.n_observables;
    std::vector<uint8_t> row((bits + 7) / 8);
    for (size_t s = 0; s < b.shots; s++) {
        std::fill(row.begin(), row.end(), 0);
        for (size_t i = 0; i < bits; i++) {
            bool v = i < b.n_detectors ? b.syndromes[s].get(i) : b.observable_flips[s].get(i - b.n_detectors);
            row[i / 8] |= (uint8_t)(v << (i % 8));
        }
        out.write((const char *)row.data(), (std::streamsize)row.size());
    }
}

SampleBatch read_batch(std::istream &in, size_t n_observables) {
    uint8_t hdr[8];
    if (!in.read((char *)hdr, 8) || (hdr[0] | hdr[1] << 8) != kBatchMagic) {
        throw std::runtime_error("not a sample batch file");
    }
    SampleBatch b;
    b.n_detectors = hdr[2] | hdr[3] << 8;
    b.n_observables = n_observables;
    b.shots = 0;
    for (int i = 0; i < 4; i++) {
        b.shots |= (size_t)hdr[4 + i] << (8 * i);
    }
    size_t bits = b.n_detectors + b.n_observables;
    std::vector<uint8_t> row((bits + 7) / 8);
    for (size_t s = 0; s < b.shots; s++) {
        if (!in.read((char *)row.data(), (std::streamsize)row.size())) {
            throw std::runtime_error("truncated sample batch at shot " + std::to_string(s));
        }
        BitVector det(b.n_detectors), obs(b.n_observables);
        for (size_t i = 0; i < bits; i++) {
            if (row[i / 8] >> (i % 8) & 1) {
                if (i < b.n_detectors) {
                    det.set(i);
                } else {
                    obs.set(i - b.n_detectors);
                }
            }
        }
        b.syndromes.push_back(std::move(det));
        b.observable_flips.push_back(std::move(obs));
    }
    return b;
}

}  // namespace sqec
