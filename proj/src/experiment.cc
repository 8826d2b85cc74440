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


#include "sqec/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <regex>
#include <sstream>

#include "sqec/decoders.h"
#include "sqec/sampler.h"

#ifndef SQEC_DATA_DIR
#define SQEC_DATA_DIR "data"
#endif

namespace sqec {

using nlohmann::json;

namespace {

CodeBundle linear_bundle(std::string spec, CodeFamily fam, CssCode code, size_t d, LinearLayout layout, long band) {
    CodeBundle b;
    b.spec = std::move(spec);
    b.family = fam;
    b.code = std::move(code);
    b.distance = d;
    b.code.d_estimate = d;
    b.schedule = schedule_from_diagonals(layout.h, [&] {
        std::vector<CheckType> t;
        for (const auto &r : layout.rows) {
            t.push_back(r.first);
        }
        return t;
    }());
    b.layout = std::move(layout);
    b.band_width = band;
    b.shuttle_multiplier = b.schedule->total_distance;
    return b;
}

CodeBundle generic_bundle(const std::string &spec, CssCode code, size_t d) {
    StackedLayout st = stacked_layout(code);
    LinearLayout ll = linear_layout(st);
    auto dec = diagonals(ll.h);
    long band = 0;
    if (!dec.offsets.empty()) {
        auto [lo, hi] = std::minmax_element(dec.offsets.begin(), dec.offsets.end());
        band = *hi - *lo;
    }
    return linear_bundle(spec, CodeFamily::Generic, std::move(code), d, std::move(ll), band);
}

BitMatrix rows_matrix(const json &rows, const std::string &what) {
    if (!rows.is_array() || rows.empty()) {
        throw std::invalid_argument(what + ": expected a non-empty array of 0/1 strings");
    }
    size_t cols = rows[0].get<std::string>().size();
    BitMatrix m(rows.size(), cols);
    for (size_t r = 0; r < rows.size(); r++) {
        std::string s = rows[r].get<std::string>();
        if (s.size() != cols) {
            throw std::invalid_argument(what + ": ragged row " + std::to_string(r));
        }
        for (size_t c = 0; c < cols; c++) {
            if (s[c] == '1') {
                m.set(r, c);
            } else if (s[c] != '0') {
                throw std::invalid_argument(what + ": bad character in row " + std::to_string(r));
            }
        }
    }
    return m;
}

CodeBundle code_from_file(const std::string &spec, const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open code file " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    std::string name = j.value("name", spec);
    size_t d = j.value("d", size_t{0});
    CssCode code;
    if (j.contains("l")) {
        code = generalised_bicycle(j.at("l").get<size_t>(), j.at("a").get<std::vector<size_t>>(),
                                   j.at("b").get<std::vector<size_t>>(), name);
    } else if (j.contains("hx") && j.contains("hz")) {
        std::string dir = path.find('/') == std::string::npos ? "." : path.substr(0, path.rfind('/'));
        auto load = [&](const char *key) {
            const json &v = j.at(key);
            if (!v.is_string()) {
                return rows_matrix(v, key);
            }
            // plain-text matrix file, relative to the JSON file
            std::string f = v.get<std::string>();
            if (f.empty() || f[0] != '/') {
                f = dir + "/" + f;
            }
            std::ifstream min(f);
            if (!min) {
                throw std::invalid_argument(std::string(key) + ": cannot open " + f);
            }
            return read_matrix(min);
        };
        code = make_css(name, load("hx"), load("hz"));
    } else {
        throw std::invalid_argument(path + ": need either l/a/b or hx/hz");
    }
    if (d == 0) {
        DistanceOptions opts;
        opts.trials = 2000;
        d = estimate_distance(code, opts).weight;
    }
    return generic_bundle(spec, std::move(code), d);
}

}  // namespace

std::vector<std::string> builtin_codes() {
    return {"rsc-dN", "wide-dN", "hgp-234-3-8", "gb-a2"};
}

CodeBundle load_code(const std::string &spec) {
    static const std::regex surf("(rsc|wide)-d([0-9]+)");
    std::smatch m;
    if (std::regex_match(spec, m, surf)) {
        size_t d = std::stoul(m[2]);
        if (d < 3 || d % 2 == 0 || d > 99) {
            throw std::invalid_argument("surface code distance must be odd and in [3, 99]: " + spec);
        }
        CodeBundle b;
        b.spec = spec;
        b.distance = d;
        if (m[1] == "rsc") {
            b.family = CodeFamily::Rotated;
            b.code = rotated_surface_code(d);
            b.shuttle_multiplier = single_patch_distance(d);
        } else {
            b.family = CodeFamily::Wide;
            b.code = wide_surface_code(d);
            b.shuttle_multiplier = region_interleaved_distance(d);
        }
        return b;
    }
    if (spec == "hgp-234-3-8") {
        ClassicalCode a = repetition_code(8), c = appendix_b_code();
        CssCode code = hgp(a, c);
        code.name = spec;
        HgpArrangement arr = rearrange_hgp(code, a, c);
        long band = arr.band_width();
        return linear_bundle(spec, CodeFamily::Hgp, std::move(code), 8, linear_layout(arr), band);
    }
    if (spec == "gb-a2") {
        CodeBundle b = code_from_file(spec, std::string(SQEC_DATA_DIR) + "/gb_a2.json");
        b.spec = spec;
        return b;
    }
    if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
        return code_from_file(spec, spec);
    }
    throw std::invalid_argument("unknown code '" + spec + "' (expected rsc-dN, wide-dN, hgp-234-3-8, gb-a2 or a .json file)");
}

Circuit synth_memory(const CodeBundle &b, size_t rounds, Experiment exp) {
    if (b.is_surface()) {
        return synth_surface_cycle(b.code, rounds, exp);
    }
    return synth_qldpc_cycle(b.code, *b.layout, *b.schedule, rounds, exp);
}

// ---- config

namespace {

size_t line_of(const std::string &text, size_t pos) {
    if (pos == std::string::npos || pos > text.size()) {
        return 0;
    }
    size_t line = 1;
    for (size_t i = 0; i < pos; i++) {
        line += text[i] == '\n';
    }
    return line;
}

size_t key_line(const std::string &text, const std::string &key) {
    return line_of(text, text.find("\"" + key + "\""));
}

struct Reader {
    const std::string &text;

    [[noreturn]] void fail(const std::string &path, const std::string &msg) const {
        std::string key = path.substr(path.rfind('.') + 1);
        size_t line = key_line(text, key);
        std::string where = line ? "line " + std::to_string(line) + ": " : "";
        throw ConfigError(where + path + ": " + msg, line);
    }

    void only(const json &obj, const std::string &path, std::initializer_list<const char *> keys) const {
        if (!obj.is_object()) {
            fail(path, "expected an object");
        }
        for (const auto &[k, v] : obj.items()) {
            bool ok = false;
            for (const char *a : keys) {
                ok = ok || k == a;
            }
            if (!ok) {
                fail(path.empty() ? k : path + "." + k, "unknown key");
            }
        }
    }

    double number(const json &v, const std::string &path, bool allow_inf = false) const {
        if (allow_inf && v.is_null()) {
            return std::numeric_limits<double>::infinity();
        }
        if (allow_inf && v.is_string() && v.get<std::string>() == "inf") {
            return std::numeric_limits<double>::infinity();
        }
        if (!v.is_number()) {
            fail(path, allow_inf ? "expected a number, null or \"inf\"" : "expected a number");
        }
        return v.get<double>();
    }

    size_t count(const json &v, const std::string &path) const {
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            if (v.is_number_float() && v.get<double>() >= 0 && v.get<double>() == std::floor(v.get<double>()) &&
                v.get<double>() < 1e15) {
                return (size_t)v.get<double>();
            }
            fail(path, "expected a non-negative integer");
        }
        return v.get<size_t>();
    }

    std::vector<double> numbers(const json &v, const std::string &path, bool allow_inf = false) const {
        if (!v.is_array() || v.empty()) {
            fail(path, "expected a non-empty array");
        }
        std::vector<double> out;
        for (const auto &e : v) {
            out.push_back(number(e, path, allow_inf));
        }
        return out;
    }
};

const char *experiment_name(Experiment e) {
    return e == Experiment::MemoryZErrors ? "memory-z" : "memory-x";
}

}  // namespace

ExperimentConfig parse_config(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        size_t line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError("line " + std::to_string(line) + ": invalid JSON: " + e.what(), line);
    }
    Reader r{text};
    r.only(j, "", {"code", "noise", "rounds", "shots", "seed", "decoder", "experiment", "workers", "output", "sweep"});
    ExperimentConfig c;
    bool have_code = j.contains("code");
    if (have_code) {
        if (!j["code"].is_string()) {
            r.fail("code", "expected a string");
        }
        c.code = j["code"].get<std::string>();
    }
    if (!j.contains("seed")) {
        throw ConfigError("seed: required", 0);
    }
    c.seed = r.count(j["seed"], "seed");
    if (j.contains("shots")) {
        c.shots = r.count(j["shots"], "shots");
        if (c.shots < 1) {
            r.fail("shots", "must be at least 1");
        }
    }
    if (j.contains("rounds")) {
        c.rounds = r.count(j["rounds"], "rounds");
        if (*c.rounds < 1) {
            r.fail("rounds", "must be at least 1");
        }
    }
    if (j.contains("workers")) {
        c.workers = r.count(j["workers"], "workers");
    }
    if (j.contains("decoder")) {
        if (!j["decoder"].is_string()) {
            r.fail("decoder", "expected a string");
        }
        c.decoder = j["decoder"].get<std::string>();
        if (c.decoder != "auto" && c.decoder != "mwpm" && c.decoder != "bposd") {
            r.fail("decoder", "expected auto, mwpm or bposd");
        }
    }
    if (j.contains("experiment")) {
        std::string e = j["experiment"].is_string() ? j["experiment"].get<std::string>() : "";
        if (e == "memory-z") {
            c.experiment = Experiment::MemoryZErrors;
        } else if (e == "memory-x") {
            c.experiment = Experiment::MemoryXErrors;
        } else {
            r.fail("experiment", "expected memory-z or memory-x");
        }
    }
    if (j.contains("output")) {
        if (!j["output"].is_string()) {
            r.fail("output", "expected a string");
        }
        c.output = j["output"].get<std::string>();
    }
    if (j.contains("noise")) {
        const json &n = j["noise"];
        r.only(n, "noise",
               {"p", "p_idle", "p_idle_ratio", "T2_star", "T2", "T_gate", "v", "l_c", "l_dd", "shuttle_multiplier"});
        auto num = [&](const char *k, double &dst, bool inf = false) {
            if (n.contains(k)) {
                dst = r.number(n[k], std::string("noise.") + k, inf);
            }
        };
        num("p", c.noise.p);
        num("p_idle", c.noise.p_idle);
        num("T2_star", c.noise.T2_star, true);
        num("T2", c.noise.T2, true);
        num("T_gate", c.noise.T_gate);
        num("v", c.noise.v);
        num("l_c", c.noise.l_c);
        num("l_dd", c.noise.l_dd);
        num("shuttle_multiplier", c.noise.shuttle_multiplier);
        if (n.contains("p_idle_ratio")) {
            if (n.contains("p_idle")) {
                r.fail("noise.p_idle_ratio", "conflicts with p_idle");
            }
            c.p_idle_ratio = r.number(n["p_idle_ratio"], "noise.p_idle_ratio");
            if (*c.p_idle_ratio < 0) {
                r.fail("noise.p_idle_ratio", "must be non-negative");
            }
        }
        try {
            c.noise.validate();
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("noise: ") + e.what(), key_line(text, "noise"));
        }
    }
    if (j.contains("sweep")) {
        const json &s = j["sweep"];
        r.only(s, "sweep", {"code", "p", "T2_star", "p_idle_ratio"});
        if (s.contains("code")) {
            if (!s["code"].is_array() || s["code"].empty()) {
                r.fail("sweep.code", "expected a non-empty array of strings");
            }
            for (const auto &e : s["code"]) {
                if (!e.is_string()) {
                    r.fail("sweep.code", "expected a non-empty array of strings");
                }
                c.sweep_code.push_back(e.get<std::string>());
            }
        }
        if (s.contains("p")) {
            c.sweep_p = r.numbers(s["p"], "sweep.p");
        }
        if (s.contains("T2_star")) {
            c.sweep_T2_star = r.numbers(s["T2_star"], "sweep.T2_star", true);
        }
        if (s.contains("p_idle_ratio")) {
            c.sweep_p_idle_ratio = r.numbers(s["p_idle_ratio"], "sweep.p_idle_ratio");
        }
        for (double p : c.sweep_p) {
            if (!(p >= 0 && p <= 1)) {
                r.fail("sweep.p", "values must be in [0, 1]");
            }
        }
        for (double t : c.sweep_T2_star) {
            if (!(t > 0)) {
                r.fail("sweep.T2_star", "values must be positive");
            }
        }
    }
    if (!have_code && c.sweep_code.empty()) {
        throw ConfigError("code: required", 0);
    }
    return c;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path, 0);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {

json finite_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace

json config_to_json(const ExperimentConfig &c) {
    json j;
    j["code"] = c.code;
    json n;
    n["p"] = c.noise.p;
    if (c.p_idle_ratio) {
        n["p_idle_ratio"] = *c.p_idle_ratio;
    } else {
        n["p_idle"] = c.noise.p_idle;
    }
    n["T2_star"] = finite_or_null(c.noise.T2_star);
    n["T2"] = finite_or_null(c.noise.T2);
    n["T_gate"] = c.noise.T_gate;
    n["v"] = c.noise.v;
    n["l_c"] = c.noise.l_c;
    n["l_dd"] = c.noise.l_dd;
    n["shuttle_multiplier"] = c.noise.shuttle_multiplier;
    j["noise"] = n;
    if (c.rounds) {
        j["rounds"] = *c.rounds;
    }
    j["shots"] = c.shots;
    j["seed"] = c.seed;
    j["decoder"] = c.decoder;
    j["experiment"] = experiment_name(c.experiment);
    j["workers"] = c.workers;
    if (c.output) {
        j["output"] = *c.output;
    }
    json s = json::object();
    if (!c.sweep_code.empty()) {
        s["code"] = c.sweep_code;
    }
    if (!c.sweep_p.empty()) {
        s["p"] = c.sweep_p;
    }
    if (!c.sweep_T2_star.empty()) {
        json t = json::array();
        for (double v : c.sweep_T2_star) {
            t.push_back(finite_or_null(v));
        }
        s["T2_star"] = t;
    }
    if (!c.sweep_p_idle_ratio.empty()) {
        s["p_idle_ratio"] = c.sweep_p_idle_ratio;
    }
    if (!s.empty()) {
        j["sweep"] = s;
    }
    return j;
}

NoiseParams resolve_noise(const ExperimentConfig &cfg, const CodeBundle &b) {
    NoiseParams np = cfg.noise;
    if (np.shuttle_multiplier == 0) {
        np.shuttle_multiplier = (double)b.shuttle_multiplier;
    }
    if (cfg.p_idle_ratio) {
        np.p_idle = *cfg.p_idle_ratio * np.p;
    } else if (np.p_idle == 0 && np.T_gate > 0 && std::isfinite(np.T2)) {
        np.p_idle = p_idle_from_times(np.T_gate, np.T2);
    }
    np.validate();
    return np;
}

json result_to_json(const SimulationResult &r) {
    json j;
    j["code"] = r.code;
    j["n"] = r.n;
    j["k"] = r.k;
    j["d"] = r.d;
    j["rounds"] = r.rounds;
    j["experiment"] = r.experiment;
    j["decoder"] = r.decoder;
    j["p"] = r.noise.p;
    j["p_idle"] = r.noise.p_idle;
    j["T2_star"] = finite_or_null(r.noise.T2_star);
    j["shuttle_multiplier"] = r.noise.shuttle_multiplier;
    j["p_sh"] = r.p_sh;
    j["detectors"] = r.detectors;
    j["faults"] = r.faults;
    j["seed"] = r.seed;
    j["shots"] = r.rate.shots;
    j["failures"] = r.rate.failures;
    j["p_L"] = r.rate.p_L;
    j["p_L_ci"] = {r.rate.ci_low, r.rate.ci_high};
    j["p_log"] = r.p_log;
    j["p_log_ci"] = {r.p_log_low, r.p_log_high};
    j["seconds"] = r.seconds;
    return j;
}

SimulationResult simulate(const ExperimentConfig &cfg) {
    auto t0 = std::chrono::steady_clock::now();
    CodeBundle b = load_code(cfg.code);
    NoiseParams np = resolve_noise(cfg, b);
    size_t rounds = cfg.rounds.value_or(b.distance);
    if (rounds < 1) {
        throw std::invalid_argument("rounds must be at least 1");
    }
    Circuit c = synth_memory(b, rounds, cfg.experiment);
    DemOptions dopts;
    dopts.provenance = false;
    DetectorErrorModel dem = build_dem(annotate(c, np), dopts);

    std::string dec_name = cfg.decoder;
    if (dec_name == "auto") {
        dec_name = b.is_surface() ? "mwpm" : "bposd";
    }
    std::unique_ptr<Decoder> dec;
    if (dec_name == "mwpm") {
        dec = std::make_unique<MwpmDecoder>(decompose_graphlike(dem));
    } else if (dec_name == "bposd") {
        dec = std::make_unique<BpOsdDecoder>(dem);
    } else {
        throw std::invalid_argument("unknown decoder " + dec_name);
    }

    constexpr size_t kChunk = size_t{1} << 16;
    size_t failures = 0;
    for (size_t first = 0; first < cfg.shots; first += kChunk) {
        size_t n = std::min(kChunk, cfg.shots - first);
        SampleBatch batch = sample(dem, n, cfg.seed, cfg.workers, first);
        failures += count_failures(*dec, batch, cfg.workers);
    }

    SimulationResult r;
    r.code = b.spec;
    r.n = b.code.n;
    r.k = b.code.k;
    r.d = b.distance;
    r.rounds = rounds;
    r.experiment = experiment_name(cfg.experiment);
    r.decoder = dec_name;
    r.noise = np;
    r.p_sh = p_sh_cycle(np);
    r.detectors = dem.n_detectors;
    r.faults = dem.faults.size();
    r.seed = cfg.seed;
    r.rate = logical_rate(failures, cfg.shots);
    r.p_log = per_round_per_qubit(r.rate.p_L, b.code.k, rounds);
    r.p_log_low = per_round_per_qubit(r.rate.ci_low, b.code.k, rounds);
    r.p_log_high = per_round_per_qubit(r.rate.ci_high, b.code.k, rounds);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

uint64_t sweep_point_seed(uint64_t seed, size_t index) {
    // splitmix64 finaliser over the pair
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<SimulationResult> sweep(const ExperimentConfig &cfg) {
    std::vector<std::string> codes = cfg.sweep_code.empty() ? std::vector<std::string>{cfg.code} : cfg.sweep_code;
    std::vector<double> ps = cfg.sweep_p.empty() ? std::vector<double>{cfg.noise.p} : cfg.sweep_p;
    std::vector<double> ts = cfg.sweep_T2_star.empty() ? std::vector<double>{cfg.noise.T2_star} : cfg.sweep_T2_star;
    std::vector<std::optional<double>> rs;
    if (cfg.sweep_p_idle_ratio.empty()) {
        rs.push_back(cfg.p_idle_ratio);
    } else {
        for (double r : cfg.sweep_p_idle_ratio) {
            rs.push_back(r);
        }
    }
    std::vector<SimulationResult> out;
    size_t index = 0;
    for (const auto &code : codes) {
        for (double p : ps) {
            for (double t : ts) {
                for (const auto &ratio : rs) {
                    ExperimentConfig pc = cfg;
                    pc.code = code;
                    pc.noise.p = p;
                    pc.noise.T2_star = t;
                    pc.p_idle_ratio = ratio;
                    pc.seed = sweep_point_seed(cfg.seed, index++);
                    out.push_back(simulate(pc));
                }
            }
        }
    }
    return out;
}

void write_sweep_csv(std::ostream &out, const std::vector<SimulationResult> &rows) {
    out << "d,p,T2_star,p_log,ci_low,ci_high,code,n,k,rounds,p_idle,p_sh,shots,failures,p_L,decoder,seed\n";
    out << std::setprecision(10);
    for (const auto &r : rows) {
        out << r.d << ',' << r.noise.p << ',';
        if (std::isfinite(r.noise.T2_star)) {
            out << r.noise.T2_star;
        } else {
            out << "inf";
        }
        out << ',' << r.p_log << ',' << r.p_log_low << ',' << r.p_log_high << ',' << r.code << ',' << r.n << ','
            << r.k << ',' << r.rounds << ',' << r.noise.p_idle << ',' << r.p_sh << ',' << r.rate.shots << ','
            << r.rate.failures << ',' << r.rate.p_L << ',' << r.decoder << ',' << r.seed << '\n';
    }
}

std::vector<std::pair<double, double>> read_sweep_points(std::istream &in, std::optional<double> p_filter) {
    auto split = [](const std::string &line) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        return f;
    };
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("empty sweep file");
    }
    auto header = split(line);
    long id = -1, ip = -1, il = -1;
    for (size_t i = 0; i < header.size(); i++) {
        if (header[i] == "d") id = (long)i;
        if (header[i] == "p") ip = (long)i;
        if (header[i] == "p_log") il = (long)i;
    }
    if (id < 0 || il < 0 || (p_filter && ip < 0)) {
        throw std::invalid_argument("sweep file needs d and p_log columns");
    }
    std::vector<std::pair<double, double>> pts;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty()) {
            continue;
        }
        auto f = split(line);
        if (f.size() < header.size()) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": too few columns");
        }
        try {
            if (p_filter && std::abs(std::stod(f[ip]) - *p_filter) > 1e-12 * std::max(1.0, *p_filter)) {
                continue;
            }
            pts.emplace_back(std::stod(f[id]), std::stod(f[il]));
        } catch (const std::logic_error &) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": bad number");
        }
    }
    return pts;
}

}  // namespace sqec
