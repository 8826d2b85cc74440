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


#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "sqec/analysis.h"
#include "sqec/decoders.h"
#include "sqec/experiment.h"
#include "sqec/gf2.h"
#include "sqec/layout.h"
#include "sqec/sampler.h"

using nlohmann::json;
using namespace sqec;

namespace {

class CliError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

json nan_to_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

void emit(const json &j, const std::string &path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw CliError("cannot write " + path);
    }
    out << j.dump(2) << "\n";
}

std::ifstream open_in(const std::string &path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) {
        throw CliError("cannot open " + path);
    }
    return in;
}

json weight_stats(const BitMatrix &h) {
    size_t rmin = SIZE_MAX, rmax = 0, cmax = 0, nnz = 0;
    std::vector<size_t> col(h.cols(), 0);
    for (size_t r = 0; r < h.rows(); r++) {
        size_t w = 0;
        for (size_t c = 0; c < h.cols(); c++) {
            if (h.get(r, c)) {
                w++;
                col[c]++;
            }
        }
        rmin = std::min(rmin, w);
        rmax = std::max(rmax, w);
        nnz += w;
    }
    for (size_t c : col) {
        cmax = std::max(cmax, c);
    }
    json j;
    j["rows"] = h.rows();
    j["min_row_weight"] = h.rows() ? rmin : 0;
    j["max_row_weight"] = rmax;
    j["mean_row_weight"] = h.rows() ? (double)nnz / (double)h.rows() : 0.0;
    j["max_column_weight"] = cmax;
    return j;
}

// ---- subcommands

struct CodeInfoArgs {
    std::string code;
    size_t trials = 0;
    std::string export_hx, export_hz, out;
};

void cmd_code_info(const CodeInfoArgs &a) {
    CodeBundle b = load_code(a.code);
    json j;
    j["code"] = b.spec;
    j["n"] = b.code.n;
    j["k"] = b.code.k;
    j["d_estimate"] = b.distance;
    j["total_qubits"] = b.code.n + b.code.hx.rows() + b.code.hz.rows();
    j["x_checks"] = weight_stats(b.code.hx);
    j["z_checks"] = weight_stats(b.code.hz);
    if (a.trials > 0) {
        DistanceOptions opts;
        opts.trials = a.trials;
        DistanceResult r = estimate_distance(b.code, opts);
        j["distance_search"] = {{"weight", r.weight}, {"exact", r.exact}, {"trials", a.trials}};
    }
    auto dump_matrix = [](const BitMatrix &m, const std::string &path) {
        std::ofstream out(path);
        if (!out) {
            throw CliError("cannot write " + path);
        }
        write_matrix(out, m);
    };
    if (!a.export_hx.empty()) {
        dump_matrix(b.code.hx, a.export_hx);
    }
    if (!a.export_hz.empty()) {
        dump_matrix(b.code.hz, a.export_hz);
    }
    emit(j, a.out);
}

struct LayoutArgs {
    std::string code, out;
    size_t rounds = 1;
};

void cmd_layout_plan(const LayoutArgs &a) {
    CodeBundle b = load_code(a.code);
    json j;
    j["code"] = b.spec;
    j["rounds"] = a.rounds;
    if (b.is_surface()) {
        ShuttleSchedule s = surface_cycle_schedule(b.distance, a.rounds);
        std::vector<long> moves, offsets;
        for (const auto &st : s.steps) {
            moves.push_back(st.move);
            offsets.push_back(st.offset);
        }
        j["policy"] = "interleaved";
        j["moves"] = moves;
        j["offsets"] = offsets;
        j["n_shuttles"] = s.n_shuttles;
        j["total_distance"] = s.total_distance;
        j["band_width"] = nullptr;
        j["increments_per_cycle"] = b.shuttle_multiplier;
    } else {
        auto dec = diagonals(b.layout->h);
        const ShuttleSchedule &s = *b.schedule;
        std::vector<long> visited;
        for (const auto &st : s.steps) {
            if (!st.is_return) {
                visited.push_back(st.offset);
            }
        }
        j["policy"] = "x-then-z";
        j["diagonal_offsets"] = dec.offsets;
        j["visit_order"] = visited;
        j["n_shuttles"] = s.n_shuttles * a.rounds;
        j["total_distance"] = s.total_distance * a.rounds;
        j["band_width"] = b.band_width;
        j["increments_per_cycle"] = b.shuttle_multiplier;
    }
    emit(j, a.out);
}

struct RunOverrides {
    std::string config;
    std::optional<size_t> shots, rounds, workers;
    std::optional<uint64_t> seed;
    std::optional<double> p, t2_star, p_idle_ratio;
    std::string code, decoder, experiment, out;
};

ExperimentConfig load_with_overrides(const RunOverrides &o) {
    json base = json::object();
    std::string text;
    if (!o.config.empty()) {
        std::ifstream in = open_in(o.config);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    } else {
        text = "{}";
    }
    // Parse once for line-accurate errors, then re-parse with the overrides applied.
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &) {
        parse_config(text);
        throw;
    }
    if (!o.config.empty()) {
        ExperimentConfig probe;
        try {
            probe = parse_config(text);
        } catch (const ConfigError &e) {
            bool missing = std::string(e.what()).find(": required") != std::string::npos;
            if (!missing) {
                throw;
            }
        }
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object", 1);
    }
    if (!o.code.empty()) j["code"] = o.code;
    if (o.shots) j["shots"] = *o.shots;
    if (o.rounds) j["rounds"] = *o.rounds;
    if (o.workers) j["workers"] = *o.workers;
    if (o.seed) j["seed"] = *o.seed;
    if (!o.decoder.empty()) j["decoder"] = o.decoder;
    if (!o.experiment.empty()) j["experiment"] = o.experiment;
    if (!o.out.empty()) j["output"] = o.out;
    if (o.p) j["noise"]["p"] = *o.p;
    if (o.t2_star) j["noise"]["T2_star"] = *o.t2_star;
    if (o.p_idle_ratio) {
        if (j.contains("noise")) {
            j["noise"].erase("p_idle");
        }
        j["noise"]["p_idle_ratio"] = *o.p_idle_ratio;
    }
    if (text == j.dump()) {
        return parse_config(text);
    }
    return parse_config(j.dump(2));
}

void cmd_simulate(const RunOverrides &o) {
    ExperimentConfig cfg = load_with_overrides(o);
    SimulationResult r = simulate(cfg);
    emit(result_to_json(r), cfg.output.value_or(""));
}

void cmd_sweep(const RunOverrides &o) {
    ExperimentConfig cfg = load_with_overrides(o);
    auto rows = sweep(cfg);
    std::string path = cfg.output.value_or("");
    if (path.empty() || path == "-") {
        write_sweep_csv(std::cout, rows);
    } else {
        std::ofstream out(path);
        if (!out) {
            throw CliError("cannot write " + path);
        }
        write_sweep_csv(out, rows);
    }
}

struct SynthArgs {
    RunOverrides run;
    std::string circuit_out, dem_out;
};

void cmd_synth(const SynthArgs &a) {
    RunOverrides o = a.run;
    if (!o.seed) {
        o.seed = 0;  // synthesis draws no randomness
    }
    ExperimentConfig cfg = load_with_overrides(o);
    CodeBundle b = load_code(cfg.code);
    size_t rounds = cfg.rounds.value_or(b.distance);
    Circuit c = synth_memory(b, rounds, cfg.experiment);
    auto violations = validate_constraints(c);
    json j;
    j["code"] = b.spec;
    j["rounds"] = rounds;
    j["qubits"] = c.qubits.size();
    j["layers"] = c.layers.size();
    j["measurements"] = c.num_measurements();
    j["detectors"] = c.detectors.size();
    j["observables"] = c.observables.size();
    j["violations"] = violations.size();
    if (a.circuit_out.empty() || a.circuit_out == "-") {
        write_circuit(std::cout, c);
    } else {
        std::ofstream out(a.circuit_out);
        if (!out) {
            throw CliError("cannot write " + a.circuit_out);
        }
        write_circuit(out, c);
    }
    if (!a.dem_out.empty()) {
        NoiseParams np = resolve_noise(cfg, b);
        auto dem = build_dem(annotate(c, np));
        std::ofstream out(a.dem_out);
        if (!out) {
            throw CliError("cannot write " + a.dem_out);
        }
        write_dem(out, dem);
        j["faults"] = dem.faults.size();
        j["dem_detectors"] = dem.n_detectors;
    }
    std::cerr << j.dump() << "\n";
}

struct SampleArgs {
    std::string dem, out;
    size_t shots = 0, workers = 0;
    std::optional<uint64_t> seed;
};

void cmd_sample(const SampleArgs &a) {
    if (!a.seed) {
        throw CliError("--seed is required");
    }
    std::ifstream in = open_in(a.dem);
    DetectorErrorModel dem = read_dem(in);
    SampleBatch b = sample(dem, a.shots, *a.seed, a.workers);
    std::ofstream out(a.out, std::ios::binary);
    if (!out) {
        throw CliError("cannot write " + a.out);
    }
    write_batch(out, b);
    size_t flips = 0;
    for (const auto &o : b.observable_flips) {
        flips += o.any();
    }
    emit({{"shots", b.shots}, {"detectors", b.n_detectors}, {"observables", b.n_observables}, {"seed", *a.seed},
          {"observable_flips", flips}},
         "");
}

struct DecodeArgs {
    std::string dem, batch, decoder = "auto", out;
    bool per_shot = false;
    size_t workers = 0;
};

void cmd_decode(const DecodeArgs &a) {
    std::ifstream din = open_in(a.dem);
    DetectorErrorModel dem = read_dem(din);
    std::ifstream bin = open_in(a.batch, true);
    SampleBatch b = read_batch(bin, dem.n_observables);
    if (b.n_detectors != dem.n_detectors) {
        throw CliError("batch has " + std::to_string(b.n_detectors) + " detectors, model has " +
                       std::to_string(dem.n_detectors));
    }
    std::string name = a.decoder;
    if (name == "auto") {
        bool graphlike = true;
        try {
            decompose_graphlike(dem);
        } catch (const std::exception &) {
            graphlike = false;
        }
        name = graphlike ? "mwpm" : "bposd";
    }
    std::unique_ptr<Decoder> dec;
    if (name == "mwpm") {
        dec = std::make_unique<MwpmDecoder>(decompose_graphlike(dem));
    } else if (name == "bposd") {
        dec = std::make_unique<BpOsdDecoder>(dem);
    } else if (name == "exhaustive") {
        dec = std::make_unique<ExhaustiveDecoder>(dem);
    } else {
        throw CliError("unknown decoder " + name);
    }
    json j;
    j["decoder"] = name;
    j["shots"] = b.shots;
    if (a.per_shot) {
        json preds = json::array();
        size_t failures = 0;
        for (size_t s = 0; s < b.shots; s++) {
            BitVector p = dec->decode(b.syndromes[s]);
            std::string bits;
            for (size_t i = 0; i < dem.n_observables; i++) {
                bits += p.get(i) ? '1' : '0';
            }
            preds.push_back(bits);
            failures += !(p == b.observable_flips[s]);
        }
        j["failures"] = failures;
        j["predictions"] = preds;
    } else {
        j["failures"] = count_failures(*dec, b, a.workers);
    }
    RatePoint r = logical_rate(j["failures"].get<size_t>(), b.shots);
    j["p_L"] = r.p_L;
    j["ci"] = {r.ci_low, r.ci_high};
    emit(j, a.out);
}

json fit_to_json(const FitResult &f) {
    json j;
    j["A"] = f.A;
    j["alpha"] = f.alpha;
    j["beta"] = f.beta;
    j["gamma"] = f.gamma;
    j["delta"] = f.delta;
    j["residual"] = f.residual;
    j["d_range"] = {f.lo_d, f.hi_d};
    return j;
}

FitResult fit_from_json(const json &j) {
    FitResult f;
    f.A = j.at("A").get<double>();
    f.alpha = j.at("alpha").get<double>();
    f.beta = j.at("beta").get<double>();
    f.gamma = j.at("gamma").get<double>();
    f.delta = j.at("delta").get<double>();
    if (j.contains("d_range")) {
        f.lo_d = j["d_range"][0].get<double>();
        f.hi_d = j["d_range"][1].get<double>();
    }
    return f;
}

std::vector<std::pair<double, double>> curve_points(const std::string &csv, const std::string &column,
                                                    std::optional<double> p) {
    std::ifstream in = open_in(csv);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    if (column != "p_log") {
        // move the requested column under the p_log name
        std::string header = text.substr(0, text.find('\n'));
        std::string renamed;
        std::stringstream hs(header);
        std::string cell;
        bool found = false;
        while (std::getline(hs, cell, ',')) {
            if (!renamed.empty()) {
                renamed += ',';
            }
            if (cell == column) {
                renamed += "p_log";
                found = true;
            } else if (cell == "p_log") {
                renamed += "p_log_per_round";
            } else {
                renamed += cell;
            }
        }
        if (!found) {
            throw CliError("column " + column + " not in " + csv);
        }
        text = renamed + text.substr(header.size());
    }
    std::stringstream body(text);
    return read_sweep_points(body, p);
}

struct FitArgs {
    std::string csv, column = "p_L", out;
    std::optional<double> p;
    size_t restarts = 24;
    uint64_t seed = 1;
};

void cmd_fit(const FitArgs &a) {
    auto pts = curve_points(a.csv, a.column, a.p);
    FitOptions opts;
    opts.restarts = a.restarts;
    opts.seed = a.seed;
    FitResult f = fit_trial(pts, opts);
    json j = fit_to_json(f);
    j["column"] = a.column;
    j["points"] = pts.size();
    json pred = json::array();
    for (const auto &[d, v] : pts) {
        pred.push_back({{"d", d}, {"observed", v}, {"fitted", nan_to_null(f.predict(d))}});
    }
    j["predictions"] = pred;
    emit(j, a.out);
}

struct ResourceArgs {
    std::string scenario = "nisq", fit_json, csv, column = "p_L", out;
    std::optional<size_t> distance;
    std::optional<double> p, t2_star;
};

void cmd_resources(const ResourceArgs &a) {
    Scenario s;
    if (a.scenario == "nisq") {
        s = Scenario::NisqBeating;
    } else if (a.scenario == "hubbard") {
        s = Scenario::Hubbard6x6;
    } else {
        throw CliError("scenario must be nisq or hubbard");
    }
    ResourceConfig cfg = default_resource_config(s);
    if (a.distance) cfg.distance = *a.distance;
    if (a.p) cfg.p = *a.p;
    if (a.t2_star) cfg.T2_star = *a.t2_star;
    std::optional<FitResult> fit;
    if (!a.fit_json.empty()) {
        std::ifstream in = open_in(a.fit_json);
        fit = fit_from_json(json::parse(in));
    } else if (!a.csv.empty()) {
        fit = fit_trial(curve_points(a.csv, a.column, {}));
    }
    ResourceReport r = resource_estimate(s, cfg, fit);
    json j;
    j["scenario"] = r.scenario;
    j["distance"] = r.distance;
    j["distance_reachable"] = r.distance_reachable;
    j["patches"] = r.patches;
    j["p_sh"] = r.p_sh;
    j["p_mag"] = r.p_mag;
    j["distilled_15_to_1"] = r.distilled_15_to_1;
    j["distilled_116_to_12"] = r.distilled_116_to_12;
    j["data_qubits"] = r.data_qubits;
    j["physical_qubits"] = r.physical_qubits;
    if (s == Scenario::Hubbard6x6) {
        j["target_p_L"] = r.target_p_L;
        j["cycles"] = r.cycles;
        j["seconds"] = r.seconds;
        j["days"] = r.seconds / 86400;
    }
    if (fit) {
        j["fit"] = fit_to_json(*fit);
        if (r.distance_reachable) {
            j["fit_prediction_at_distance"] = fit->predict((double)r.distance);
            j["extrapolated"] = (double)r.distance > fit->hi_d;
        }
    }
    j["notes"] = r.notes;
    emit(j, a.out);
}

void add_run_flags(CLI::App *sc, RunOverrides &o, bool config_required) {
    auto *c = sc->add_option("-c,--config", o.config, "JSON experiment config");
    if (config_required) {
        c->required();
    }
    sc->add_option("--code", o.code, "code spec, overrides the config");
    sc->add_option("--shots", o.shots);
    sc->add_option("--rounds", o.rounds);
    sc->add_option("--seed", o.seed);
    sc->add_option("--workers", o.workers, "threads (default: SQEC_WORKERS or all cores)");
    sc->add_option("--p", o.p);
    sc->add_option("--T2-star", o.t2_star);
    sc->add_option("--p-idle-ratio", o.p_idle_ratio);
    sc->add_option("--decoder", o.decoder)->check(CLI::IsMember({"auto", "mwpm", "bposd"}));
    sc->add_option("--experiment", o.experiment)->check(CLI::IsMember({"memory-z", "memory-x"}));
    sc->add_option("-o,--output", o.out);
}

int fail(const std::string &kind, const std::string &msg, size_t line = 0) {
    json e = {{"error", kind}, {"message", msg}};
    if (line) {
        e["line"] = line;
    }
    std::cerr << e.dump() << "\n";
    return kind == "config" || kind == "usage" ? 2 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"2xN shuttling QEC toolkit"};
    app.require_subcommand(1);

    CodeInfoArgs info;
    auto *sc_info = app.add_subcommand("code-info", "code parameters and check weights");
    sc_info->add_option("code", info.code)->required();
    sc_info->add_option("--distance-trials", info.trials, "run a randomized distance search");
    sc_info->add_option("--export-hx", info.export_hx);
    sc_info->add_option("--export-hz", info.export_hz);
    sc_info->add_option("-o,--output", info.out);

    LayoutArgs lay;
    auto *sc_lay = app.add_subcommand("layout-plan", "shuttle offsets, counts and distances");
    sc_lay->add_option("code", lay.code)->required();
    sc_lay->add_option("--rounds", lay.rounds)->check(CLI::PositiveNumber);
    sc_lay->add_option("-o,--output", lay.out);

    SynthArgs syn;
    auto *sc_syn = app.add_subcommand("synth", "write the memory-experiment circuit");
    add_run_flags(sc_syn, syn.run, false);
    sc_syn->add_option("--circuit-out", syn.circuit_out);
    sc_syn->add_option("--dem-out", syn.dem_out);

    RunOverrides sim;
    auto *sc_sim = app.add_subcommand("simulate", "run one configuration");
    add_run_flags(sc_sim, sim, false);

    RunOverrides swp;
    auto *sc_swp = app.add_subcommand("sweep", "run the sweep axes of a config and write CSV");
    add_run_flags(sc_swp, swp, true);

    SampleArgs smp;
    auto *sc_smp = app.add_subcommand("sample", "sample a detector error model to a batch file");
    sc_smp->add_option("--dem", smp.dem)->required();
    sc_smp->add_option("--shots", smp.shots)->required()->check(CLI::PositiveNumber);
    sc_smp->add_option("--seed", smp.seed);
    sc_smp->add_option("--workers", smp.workers);
    sc_smp->add_option("-o,--output", smp.out)->required();

    DecodeArgs dcd;
    auto *sc_dcd = app.add_subcommand("decode", "decode a batch file against a detector error model");
    sc_dcd->add_option("--dem", dcd.dem)->required();
    sc_dcd->add_option("--batch", dcd.batch)->required();
    sc_dcd->add_option("--decoder", dcd.decoder)->check(CLI::IsMember({"auto", "mwpm", "bposd", "exhaustive"}));
    sc_dcd->add_flag("--per-shot", dcd.per_shot, "include every prediction");
    sc_dcd->add_option("--workers", dcd.workers);
    sc_dcd->add_option("-o,--output", dcd.out);

    FitArgs fit;
    auto *sc_fit = app.add_subcommand("fit", "fit A (alpha + beta d)^(gamma d + delta) to a sweep CSV");
    sc_fit->add_option("csv", fit.csv)->required();
    sc_fit->add_option("--column", fit.column, "rate column (p_L per shot or p_log per round)");
    sc_fit->add_option("--p", fit.p, "use rows with this p only");
    sc_fit->add_option("--restarts", fit.restarts);
    sc_fit->add_option("--seed", fit.seed);
    sc_fit->add_option("-o,--output", fit.out);

    ResourceArgs res;
    auto *sc_res = app.add_subcommand("resources", "resource estimate for a scenario");
    sc_res->add_option("scenario", res.scenario)->check(CLI::IsMember({"nisq", "hubbard"}));
    sc_res->add_option("--fit", res.fit_json, "fit JSON from the fit subcommand");
    sc_res->add_option("--csv", res.csv, "sweep CSV to fit");
    sc_res->add_option("--column", res.column);
    sc_res->add_option("--distance", res.distance);
    sc_res->add_option("--p", res.p);
    sc_res->add_option("--T2-star", res.t2_star);
    sc_res->add_option("-o,--output", res.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        return fail("usage", e.what());
    }

    try {
        if (sc_info->parsed()) {
            cmd_code_info(info);
        } else if (sc_lay->parsed()) {
            cmd_layout_plan(lay);
        } else if (sc_syn->parsed()) {
            cmd_synth(syn);
        } else if (sc_sim->parsed()) {
            cmd_simulate(sim);
        } else if (sc_swp->parsed()) {
            cmd_sweep(swp);
        } else if (sc_smp->parsed()) {
            cmd_sample(smp);
        } else if (sc_dcd->parsed()) {
            cmd_decode(dcd);
        } else if (sc_fit->parsed()) {
            cmd_fit(fit);
        } else if (sc_res->parsed()) {
            cmd_resources(res);
        }
    } catch (const ConfigError &e) {
        return fail("config", e.what(), e.line());
    } catch (const std::invalid_argument &e) {
        return fail("invalid_argument", e.what());
    } catch (const std::exception &e) {
        return fail("runtime", e.what());
    }
    return 0;
}
