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

#include "sqec/circuit.h"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sqec {

const char *op_name(OpType t) {
    switch (t) {
        case OpType::INIT_Z:
            return "INIT_Z";
        case OpType::INIT_SINGLET:
            return "INIT_SINGLET";
        case OpType::MEAS_Z:
            return "MEAS_Z";
        case OpType::MEAS_ST:
            return "MEAS_ST";
        case OpType::CZ:
            return "CZ";
        case OpType::CNOT:
            return "CNOT";
        case OpType::H:
            return "H";
        case OpType::H_SEMIGLOBAL:
            return "H_SEMIGLOBAL";
        case OpType::S:
            return "S";
        case OpType::S_DAG:
            return "S_DAG";
        case OpType::SHUTTLE:
            return "SHUTTLE";
        case OpType::IDLE:
            return "IDLE";
        case OpType::TWIRL:
            return "TWIRL";
    }
    return "?";
}

uint32_t Circuit::add_qubit(Rail rail, long site) {
    qubits.push_back(QubitInfo{rail, site, -1});
    return (uint32_t)(qubits.size() - 1);
}

uint32_t Circuit::add_pair(long site) {
    uint32_t a = add_qubit(Rail::Ancilla, site);
    uint32_t b = add_qubit(Rail::Ancilla, site);
    qubits[a].partner = (int)b;
    qubits[b].partner = (int)a;
    return a;
}

size_t Circuit::num_measurements() const {
    size_t n = 0;
    for (const auto &layer : layers) {
        for (const auto &op : layer.ops) {
            if (op.type == OpType::MEAS_Z) {
                n += op.targets.size();
            } else if (op.type == OpType::MEAS_ST) {
                n += op.targets.size() / 2;
            }
        }
    }
    return n;
}

size_t Circuit::count_ops(OpType t) const {
    size_t n = 0;
    for (const auto &layer : layers) {
        for (const auto &op : layer.ops) {
            n += op.type == t;
        }
    }
    return n;
}

std::vector<long> Circuit::cumulative_offsets() const {
    std::vector<long> out;
    long cur = 0;
    for (const auto &layer : layers) {
        for (const auto &op : layer.ops) {
            if (op.type == OpType::SHUTTLE) {
                cur += op.offset;
            }
        }
        out.push_back(cur);
    }
    return out;
}

namespace {

const std::vector<std::pair<uint32_t, const char *>> kTagNames = {
    {TAG_SET1, "set1"},         {TAG_SET2, "set2"},     {TAG_CANCELLED_H, "cancelled-H"},
    {TAG_TWIRL, "twirl"},       {TAG_CYCLE_START, "cycle-start"}, {TAG_RETURN, "return"},
    {TAG_BASIS, "basis"},
};

OpType parse_op(const std::string &s) {
    for (int i = 0; i <= (int)OpType::TWIRL; i++) {
        if (s == op_name((OpType)i)) {
            return (OpType)i;
        }
    }
    throw std::invalid_argument("unknown circuit operation '" + s + "'");
}

}  // namespace

void write_circuit(std::ostream &out, const Circuit &c) {
    out << "ROUNDS " << c.rounds << "\n";
    out << "EXPERIMENT " << (c.experiment == Experiment::MemoryZErrors ? "memory-Z-errors" : "memory-X-errors") << "\n";
    for (size_t q = 0; q < c.qubits.size(); q++) {
        const auto &qi = c.qubits[q];
        out << "QUBIT " << q << " " << (qi.rail == Rail::Data ? "data" : "ancilla") << " " << qi.site;
        if (qi.partner >= 0) {
            out << " pair " << qi.partner;
        }
        out << "\n";
    }
    for (size_t l = 0; l < c.layers.size(); l++) {
        const Layer &layer = c.layers[l];
        if (layer.tags) {
            out << "#";
            for (const auto &[bit, name] : kTagNames) {
                if (layer.tags & bit) {
                    out << " " << name;
                }
            }
            out << "\n";
        }
        for (const auto &op : layer.ops) {
            out << op_name(op.type);
            if (op.type == OpType::SHUTTLE) {
                out << " " << (op.offset >= 0 ? "+" : "") << op.offset;
            } else if (op.type == OpType::H_SEMIGLOBAL) {
                out << " " << (op.rail == Rail::Data ? "data" : "ancilla");
            }
            for (uint32_t t : op.targets) {
                out << " " << t;
            }
            out << "\n";
        }
        out << "TICK\n";
    }
    for (const auto &d : c.detectors) {
        out << "DETECTOR " << (d.type == CheckType::X ? "X" : "Z");
        for (uint32_t r : d.records) {
            out << " " << r;
        }
        out << "\n";
    }
    for (const auto &o : c.observables) {
        out << "OBSERVABLE " << (o.type == CheckType::X ? "X" : "Z");
        for (uint32_t r : o.records) {
            out << " " << r;
        }
        out << "\n";
    }
}

Circuit read_circuit(std::istream &in) {
    Circuit c;
    Layer cur;
    std::string line;
    size_t line_no = 0;
    auto fail = [&](const std::string &msg) {
        throw std::invalid_argument("circuit line " + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, line)) {
        line_no++;
        std::istringstream ss(line);
        std::string word;
        if (!(ss >> word)) {
            continue;
        }
        if (word == "#") {
            std::string tag;
            while (ss >> tag) {
                bool ok = false;
                for (const auto &[bit, name] : kTagNames) {
                    if (tag == name) {
                        cur.tags |= bit;
                        ok = true;
                    }
                }
                if (!ok) {
                    fail("unknown tag " + tag);
                }
            }
        } else if (word == "ROUNDS") {
            ss >> c.rounds;
        } else if (word == "EXPERIMENT") {
            std::string e;
            ss >> e;
            if (e == "memory-Z-errors") {
                c.experiment = Experiment::MemoryZErrors;
            } else if (e == "memory-X-errors") {
                c.experiment = Experiment::MemoryXErrors;
            } else {
                fail("unknown experiment " + e);
            }
        } else if (word == "QUBIT") {
            size_t q;
            std::string rail, pair;
            long site;
            if (!(ss >> q >> rail >> site) || q != c.qubits.size()) {
                fail("bad QUBIT line");
            }
            QubitInfo qi{rail == "data" ? Rail::Data : Rail::Ancilla, site, -1};
            if (ss >> pair) {
                ss >> qi.partner;
            }
            c.qubits.push_back(qi);
        } else if (word == "TICK") {
            c.layers.push_back(std::move(cur));
            cur = Layer{};
        } else if (word == "DETECTOR" || word == "OBSERVABLE") {
            std::string t;
            ss >> t;
            std::vector<uint32_t> recs;
            uint32_t r;
            while (ss >> r) {
                recs.push_back(r);
            }
            CheckType ct = t == "X" ? CheckType::X : CheckType::Z;
            if (word == "DETECTOR") {
                c.detectors.push_back(Detector{ct, recs});
            } else {
                c.observables.push_back(Observable{ct, recs});
            }
        } else {
            Op op{parse_op(word), {}, 0, Rail::Data};
            if (op.type == OpType::SHUTTLE) {
                if (!(ss >> op.offset)) {
                    fail("SHUTTLE needs an offset");
                }
            } else if (op.type == OpType::H_SEMIGLOBAL) {
                std::string rail;
                ss >> rail;
                op.rail = rail == "data" ? Rail::Data : Rail::Ancilla;
            }
            uint32_t t;
            while (ss >> t) {
                if (t >= c.qubits.size()) {
                    fail("qubit index out of range");
                }
                op.targets.push_back(t);
            }
            cur.ops.push_back(std::move(op));
        }
    }
    if (!cur.ops.empty()) {
        c.layers.push_back(std::move(cur));
    }
    return c;
}

std::vector<Violation> validate_constraints(const Circuit &c) {
    std::vector<Violation> out;
    std::vector<bool> live(c.qubits.size(), false);
    long offset = 0;
    for (size_t l = 0; l < c.layers.size(); l++) {
        for (const auto &op : c.layers[l].ops) {
            switch (op.type) {
                case OpType::SHUTTLE:
                    offset += op.offset;
                    break;
                case OpType::H:
                    out.push_back({l, "local Hadamard on qubit " + std::to_string(op.targets[0])});
                    break;
                case OpType::INIT_Z:
                case OpType::INIT_SINGLET:
                    for (uint32_t q : op.targets) {
                        live[q] = true;
                    }
                    break;
                case OpType::MEAS_Z:
                case OpType::MEAS_ST:
                    for (uint32_t q : op.targets) {
                        if (!live[q]) {
                            out.push_back({l, "measurement without initialisation on qubit " + std::to_string(q)});
                        }
                        live[q] = false;
                    }
                    break;
                case OpType::CZ:
                case OpType::CNOT:
                    for (size_t i = 0; i + 1 < op.targets.size(); i += 2) {
                        const QubitInfo &a = c.qubits[op.targets[i]];
                        const QubitInfo &b = c.qubits[op.targets[i + 1]];
                        if (a.rail == b.rail) {
                            out.push_back({l, "two-qubit gate within a rail"});
                            continue;
                        }
                        const QubitInfo &data = a.rail == Rail::Data ? a : b;
                        const QubitInfo &anc = a.rail == Rail::Data ? b : a;
                        if (data.site - anc.site != offset) {
                            out.push_back({l, "cross-rail misalignment"});
                        }
                    }
                    break;
                default:
                    break;
            }
        }
    }
    return out;
}

Circuit parity_template(const std::string &paulis, bool cnot_z_parity) {
    Circuit c;
    size_t k = paulis.size();
    for (size_t i = 0; i < k; i++) {
        c.add_qubit(Rail::Data, (long)i);
    }
    uint32_t a = c.add_pair(0);
    // Every data qubit lines up with the ancilla by shuttling to its offset.
    c.layers.push_back(Layer{{Op{OpType::INIT_SINGLET, {a, a + 1}}}, 0});
    long offset = 0;
    auto interact = [&](uint32_t q, OpType gate, uint32_t tags) {
        long want = (long)q;
        if (want != offset) {
            c.layers.push_back(Layer{{Op{OpType::SHUTTLE, {}, want - offset}}, 0});
            offset = want;
        }
        c.layers.push_back(Layer{{Op{gate, {q, a}}}, tags});
    };
    for (size_t i = 0; i < k; i++) {
        if (paulis[i] == 'Z') {
            interact((uint32_t)i, cnot_z_parity ? OpType::CNOT : OpType::CZ, TAG_SET1);
        } else if (paulis[i] != 'X' && paulis[i] != 'Y') {
            throw std::invalid_argument("parity template accepts only X, Y, Z");
        }
    }
    Layer sdag, s;
    for (size_t i = 0; i < k; i++) {
        if (paulis[i] == 'Y') {
            sdag.ops.push_back(Op{OpType::S_DAG, {(uint32_t)i}});
            s.ops.push_back(Op{OpType::S, {(uint32_t)i}});
        }
    }
    if (!sdag.ops.empty()) {
        c.layers.push_back(sdag);
    }
    c.layers.push_back(Layer{{Op{OpType::H_SEMIGLOBAL, {}, 0, Rail::Data}}, 0});
    bool any_x = false;
    for (size_t i = 0; i < k; i++) {
        if (paulis[i] == 'X' || paulis[i] == 'Y') {
            interact((uint32_t)i, OpType::CZ, TAG_SET2);
            any_x = true;
        }
    }
    c.layers.push_back(Layer{{Op{OpType::H_SEMIGLOBAL, {}, 0, Rail::Data}}, 0});
    if (!any_x) {
        c.layers[c.layers.size() - 1].tags |= TAG_CANCELLED_H;
        for (size_t l = c.layers.size() - 1; l-- > 0;) {
            if (!c.layers[l].ops.empty() && c.layers[l].ops[0].type == OpType::H_SEMIGLOBAL) {
                c.layers[l].tags |= TAG_CANCELLED_H;
                break;
            }
        }
    }
    if (!s.ops.empty()) {
        c.layers.push_back(s);
    }
    if (offset != 0) {
        c.layers.push_back(Layer{{Op{OpType::SHUTTLE, {}, -offset}}, TAG_RETURN});
    }
    c.layers.push_back(Layer{{Op{OpType::MEAS_ST, {a, a + 1}}}, 0});
    return c;
}

Circuit stabiliser_template(TemplateKind kind) {
    switch (kind) {
        case TemplateKind::Z:
            return parity_template("ZZZZ");
        case TemplateKind::X:
            return parity_template("XXXX");
        case TemplateKind::Dislocation:
            return parity_template("XZ");
        case TemplateKind::Twist:
            return parity_template("XYZ");
    }
    throw std::invalid_argument("unknown template kind");
}

namespace {

/// Shared bookkeeping for memory experiments: data qubits, one singlet-triplet
/// pair per check, measurement records and detector construction.
struct MemoryBuilder {
    Circuit c;
    const CssCode &code;
    Experiment exp;
    size_t rounds;
    std::vector<uint32_t> x_anc, z_anc;
    std::vector<std::vector<uint32_t>> x_rec, z_rec;
    std::vector<uint32_t> data_rec;
    std::vector<bool> live;
    uint32_t next_rec = 0;

    MemoryBuilder(const CssCode &code, Experiment exp, size_t rounds) : code(code), exp(exp), rounds(rounds) {
        c.rounds = rounds;
        c.experiment = exp;
        x_rec.assign(code.hx.rows(), {});
        z_rec.assign(code.hz.rows(), {});
    }

    void push(Layer layer) {
        if (!layer.ops.empty()) {
            c.layers.push_back(std::move(layer));
        }
    }

    uint32_t anc(CheckType t, size_t i) const {
        return t == CheckType::X ? x_anc[i] : z_anc[i];
    }

    void init_checks(const std::vector<std::pair<CheckType, size_t>> &checks) {
        Layer layer;
        for (const auto &[t, i] : checks) {
            uint32_t a = anc(t, i);
            layer.ops.push_back(Op{OpType::INIT_SINGLET, {a, a + 1}});
            live[a] = live[a + 1] = true;
        }
        push(std::move(layer));
    }

    void measure_checks(const std::vector<std::pair<CheckType, size_t>> &checks) {
        Layer layer;
        for (const auto &[t, i] : checks) {
            uint32_t a = anc(t, i);
            layer.ops.push_back(Op{OpType::MEAS_ST, {a, a + 1}});
            live[a] = live[a + 1] = false;
            (t == CheckType::X ? x_rec : z_rec)[i].push_back(next_rec++);
        }
        push(std::move(layer));
    }

    /// CZ layer from (check, data) pairs, with IDLE on every other live qubit.
    void cz_layer(const std::vector<std::pair<std::pair<CheckType, size_t>, size_t>> &pairs, uint32_t tag) {
        if (pairs.empty()) {
            return;
        }
        Layer layer;
        layer.tags = tag;
        std::vector<bool> busy(c.qubits.size(), false);
        for (const auto &[chk, q] : pairs) {
            uint32_t a = anc(chk.first, chk.second);
            layer.ops.push_back(Op{OpType::CZ, {(uint32_t)q, a}});
            busy[q] = busy[a] = busy[a + 1] = true;
        }
        std::vector<uint32_t> idle;
        for (uint32_t q = 0; q < c.qubits.size(); q++) {
            if (live[q] && !busy[q] && !(c.qubits[q].partner >= 0 && q > (uint32_t)c.qubits[q].partner)) {
                idle.push_back(q);
            }
        }
        if (!idle.empty()) {
            layer.ops.push_back(Op{OpType::IDLE, idle});
        }
        push(std::move(layer));
    }

    void hadamard(uint32_t tags = 0) {
        push(Layer{{Op{OpType::H_SEMIGLOBAL, {}, 0, Rail::Data}}, tags});
    }

    void shuttle(long move, uint32_t tags = 0) {
        if (move != 0) {
            push(Layer{{Op{OpType::SHUTTLE, {}, move}}, tags});
        }
    }

    void twirl() {
        Layer layer;
        layer.tags = TAG_TWIRL | TAG_CYCLE_START;
        std::vector<uint32_t> all;
        for (uint32_t q = 0; q < code.n; q++) {
            all.push_back(q);
        }
        layer.ops.push_back(Op{OpType::TWIRL, all});
        push(std::move(layer));
    }

    void init_data() {
        std::vector<uint32_t> all;
        for (uint32_t q = 0; q < code.n; q++) {
            all.push_back(q);
            live[q] = true;
        }
        push(Layer{{Op{OpType::INIT_Z, all}}, 0});
        if (exp == Experiment::MemoryZErrors) {
            hadamard(TAG_BASIS);
        }
    }

    void measure_data() {
        if (exp == Experiment::MemoryZErrors) {
            hadamard(TAG_BASIS);
        }
        std::vector<uint32_t> all;
        for (uint32_t q = 0; q < code.n; q++) {
            all.push_back(q);
            data_rec.push_back(next_rec++);
        }
        push(Layer{{Op{OpType::MEAS_Z, all}}, 0});
    }

    void finish() {
        // The tracked check type is deterministic from the first round; the
        // other type only in comparisons between rounds.
        CheckType tracked = exp == Experiment::MemoryZErrors ? CheckType::X : CheckType::Z;
        for (size_t r = 0; r < rounds; r++) {
            for (CheckType t : {CheckType::X, CheckType::Z}) {
                auto &recs = t == CheckType::X ? x_rec : z_rec;
                for (size_t i = 0; i < recs.size(); i++) {
                    if (r == 0 && t != tracked) {
                        continue;
                    }
                    Detector det{t, {recs[i][r]}};
                    if (r > 0) {
                        det.records.push_back(recs[i][r - 1]);
                    }
                    c.detectors.push_back(std::move(det));
                }
            }
        }
        const BitMatrix &checks = tracked == CheckType::X ? code.hx : code.hz;
        auto &recs = tracked == CheckType::X ? x_rec : z_rec;
        for (size_t i = 0; i < checks.rows(); i++) {
            Detector det{tracked, {}};
            for (size_t q : checks.row_support(i)) {
                det.records.push_back(data_rec[q]);
            }
            det.records.push_back(recs[i][rounds - 1]);
            c.detectors.push_back(std::move(det));
        }
        const BitMatrix &logicals = tracked == CheckType::X ? code.lx : code.lz;
        for (size_t i = 0; i < logicals.rows(); i++) {
            Observable obs{tracked, {}};
            for (size_t q : logicals.row_support(i)) {
                obs.records.push_back(data_rec[q]);
            }
            c.observables.push_back(std::move(obs));
        }
    }
};

/// Marks pairs of data-rail Hadamards with no data gate between them.
void mark_cancelled_hadamards(Circuit &c) {
    long prev = -1;
    bool touched = false;
    for (size_t l = 0; l < c.layers.size(); l++) {
        for (const auto &op : c.layers[l].ops) {
            if (op.type == OpType::H_SEMIGLOBAL && op.rail == Rail::Data) {
                if (prev >= 0 && !touched) {
                    c.layers[(size_t)prev].tags |= TAG_CANCELLED_H;
                    c.layers[l].tags |= TAG_CANCELLED_H;
                }
                prev = (long)l;
                touched = false;
            } else if (op.type != OpType::SHUTTLE && op.type != OpType::IDLE) {
                for (uint32_t q : op.targets) {
                    touched |= c.qubits[q].rail == Rail::Data;
                }
            }
        }
    }
}

}  // namespace

Circuit synth_surface_cycle(const CssCode &code, size_t rounds, Experiment exp) {
    if (!code.planar) {
        throw std::invalid_argument("surface cycle synthesis needs a planar code");
    }
    const PlanarLayout &pl = *code.planar;
    size_t h = pl.height;
    if (rounds < 1) {
        throw std::invalid_argument("need at least one round");
    }
    MemoryBuilder b(code, exp, rounds);
    for (size_t q = 0; q < code.n; q++) {
        b.c.add_qubit(Rail::Data, (long)q);
    }
    b.x_anc.resize(code.hx.rows());
    b.z_anc.resize(code.hz.rows());
    // Each check sits at the site of its south-west corner.
    for (const auto &chk : pl.checks) {
        long site = (long)chk.c * (long)h + chk.y + 1;
        (chk.type == CheckType::X ? b.x_anc : b.z_anc)[chk.row] = b.c.add_pair(site);
    }
    b.live.assign(b.c.qubits.size(), false);
    std::vector<std::pair<CheckType, size_t>> xs, zs;
    for (size_t i = 0; i < code.hx.rows(); i++) {
        xs.emplace_back(CheckType::X, i);
    }
    for (size_t i = 0; i < code.hz.rows(); i++) {
        zs.emplace_back(CheckType::Z, i);
    }

    ShuttleSchedule sched = surface_cycle_schedule(h, rounds);
    b.init_data();
    size_t last = sched.steps.size();
    for (size_t t = 1; t <= last; t++) {
        const ShuttleStep &step = sched.steps[t - 1];
        if ((t - 1) % 4 == 0 && t <= 4 * rounds) {
            b.twirl();
        }
        b.shuttle(step.move);
        if (t % 4 == 1 && t <= 4 * rounds) {
            b.init_checks(zs);
        }
        if (t % 4 == 3 && t + 3 <= last) {
            b.init_checks(xs);
        }
        std::vector<std::pair<std::pair<CheckType, size_t>, size_t>> set1, set2;
        for (const auto &chk : pl.checks) {
            const auto &corner = chk.type == CheckType::Z ? step.z_corner : step.x_corner;
            if (!corner) {
                continue;
            }
            int q = chk.corners[*corner];
            if (q < 0) {
                continue;
            }
            (chk.type == CheckType::Z ? set1 : set2).push_back({{chk.type, chk.row}, (size_t)q});
        }
        // Odd steps run set 1 then set 2, even steps the reverse, so a single
        // semi-global Hadamard per step switches the data frame.
        if (t % 2 == 1) {
            b.cz_layer(set1, TAG_SET1);
            b.hadamard();
            b.cz_layer(set2, TAG_SET2);
        } else {
            b.cz_layer(set2, TAG_SET2);
            b.hadamard();
            b.cz_layer(set1, TAG_SET1);
        }
        if (t % 4 == 0 && t <= 4 * rounds) {
            b.measure_checks(zs);
        }
        if (t % 4 == 2 && t >= 6) {
            b.measure_checks(xs);
        }
    }
    b.shuttle(-sched.steps.back().offset, TAG_RETURN);
    b.measure_data();
    b.finish();
    mark_cancelled_hadamards(b.c);
    return std::move(b.c);
}

Circuit synth_surface_cycle(size_t d, size_t rounds, bool wide, Experiment exp) {
    return synth_surface_cycle(wide ? wide_surface_code(d) : rotated_surface_code(d), rounds, exp);
}

LinearLayout linear_layout(const HgpArrangement &arr) {
    LinearLayout out;
    out.rows = arr.rows;
    out.data_site.resize(arr.data_perm.size());
    for (size_t j = 0; j < arr.data_perm.size(); j++) {
        out.data_site[arr.data_perm[j]] = j;
    }
    out.h = arr.h;
    return out;
}

LinearLayout linear_layout(const StackedLayout &st) {
    LinearLayout out;
    out.rows = st.rows;
    out.data_site.resize(st.h.cols());
    for (size_t j = 0; j < st.h.cols(); j++) {
        out.data_site[j] = j;
    }
    out.h = st.h;
    return out;
}

Circuit synth_qldpc_cycle(const CssCode &code, const LinearLayout &layout, const ShuttleSchedule &schedule, size_t rounds,
                          Experiment exp) {
    if (rounds < 1) {
        throw std::invalid_argument("need at least one round");
    }
    if (layout.data_site.size() != code.n || layout.rows.size() != code.hx.rows() + code.hz.rows()) {
        throw std::invalid_argument("layout does not match code");
    }
    std::vector<size_t> site_to_data(code.n);
    for (size_t q = 0; q < code.n; q++) {
        site_to_data[layout.data_site[q]] = q;
    }
    // Every check entry must be served exactly once by the schedule.
    std::set<std::pair<size_t, size_t>> served;
    long offset = 0;
    for (const auto &step : schedule.steps) {
        offset += step.move;
        for (const auto &[r, s] : step.pairs) {
            if (r >= layout.rows.size() || s >= code.n || (long)s - (long)r != offset) {
                throw std::invalid_argument("schedule/code mismatch: pair not aligned with the rail offset");
            }
            const auto &[t, i] = layout.rows[r];
            const BitMatrix &m = t == CheckType::X ? code.hx : code.hz;
            if (!m.get(i, site_to_data[s]) || !served.insert({r, s}).second) {
                throw std::invalid_argument("schedule/code mismatch: pair is not a check entry");
            }
        }
    }
    if (served.size() != code.hx.nnz() + code.hz.nnz()) {
        throw std::invalid_argument("schedule/code mismatch: schedule misses check entries");
    }
    if (offset != 0) {
        throw std::invalid_argument("schedule does not return the rail to its start");
    }

    MemoryBuilder b(code, exp, rounds);
    std::vector<uint32_t> data_q(code.n);
    for (size_t q = 0; q < code.n; q++) {
        data_q[q] = b.c.add_qubit(Rail::Data, (long)layout.data_site[q]);
    }
    b.x_anc.resize(code.hx.rows());
    b.z_anc.resize(code.hz.rows());
    std::vector<std::pair<CheckType, size_t>> all;
    for (size_t r = 0; r < layout.rows.size(); r++) {
        const auto &[t, i] = layout.rows[r];
        (t == CheckType::X ? b.x_anc : b.z_anc)[i] = b.c.add_pair((long)r);
        all.push_back(layout.rows[r]);
    }
    b.live.assign(b.c.qubits.size(), false);
    b.init_data();
    for (size_t round = 0; round < rounds; round++) {
        b.twirl();
        b.init_checks(all);
        bool hframe = false;
        for (const auto &step : schedule.steps) {
            b.shuttle(step.move, step.is_return ? uint32_t{TAG_RETURN} : uint32_t{0});
            std::vector<std::pair<std::pair<CheckType, size_t>, size_t>> set1, set2;
            for (const auto &[r, s] : step.pairs) {
                (layout.rows[r].first == CheckType::Z ? set1 : set2).push_back({layout.rows[r], site_to_data[s]});
            }
            if (!set1.empty()) {
                if (hframe) {
                    b.hadamard();
                    hframe = false;
                }
                b.cz_layer(set1, TAG_SET1);
            }
            if (!set2.empty()) {
                if (!hframe) {
                    b.hadamard();
                    hframe = true;
                }
                b.cz_layer(set2, TAG_SET2);
            }
        }
        if (hframe) {
            b.hadamard();
        }
        b.measure_checks(all);
    }
    b.measure_data();
    b.finish();
    mark_cancelled_hadamards(b.c);
    return std::move(b.c);
}

}  // namespace sqec
