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


#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sqec/experiment.h"

using namespace sqec;
using nlohmann::json;

namespace {

std::string tmp_path(const std::string &name) {
    return (std::filesystem::temp_directory_path() / ("sqec_exp_" + name)).string();
}

size_t config_error_line(const std::string &text) {
    try {
        parse_config(text);
    } catch (const ConfigError &e) {
        return e.line();
    }
    ADD_FAILURE() << "no error for " << text;
    return 0;
}

json stable(const SimulationResult &r) {
    json j = result_to_json(r);
    j.erase("seconds");
    return j;
}

}  // namespace

TEST(experiment, registry_parameters) {
    CodeBundle r = load_code("rsc-d5");
    EXPECT_EQ(r.code.n, 25u);
    EXPECT_EQ(r.distance, 5u);
    EXPECT_EQ(r.shuttle_multiplier, 2 * 5 + 2u);
    CodeBundle w = load_code("wide-d3");
    EXPECT_EQ(w.code.n, 18u);
    EXPECT_EQ(w.shuttle_multiplier, 12u);
    CodeBundle h = load_code("hgp-234-3-8");
    EXPECT_EQ(h.code.n, 234u);
    EXPECT_EQ(h.code.k, 3u);
    EXPECT_EQ(h.distance, 8u);
    EXPECT_EQ(h.shuttle_multiplier, h.schedule->total_distance);
    CodeBundle g = load_code("gb-a2");
    EXPECT_EQ(g.code.n, 126u);
    EXPECT_EQ(g.code.k, 28u);
    EXPECT_EQ(g.distance, 8u);
    EXPECT_THROW(load_code("rsc-d4"), std::invalid_argument);
    EXPECT_THROW(load_code("toric-d3"), std::invalid_argument);
}

TEST(experiment, custom_code_files) {
    std::string hx = tmp_path("hx.txt"), hz = tmp_path("hz.txt"), spec = tmp_path("code.json");
    CssCode ref = rotated_surface_code(3);
    {
        std::ofstream a(hx), b(hz);
        write_matrix(a, ref.hx);
        write_matrix(b, ref.hz);
    }
    {
        std::ofstream s(spec);
        s << json{{"name", "file-rsc3"},
                  {"hx", std::filesystem::path(hx).filename().string()},
                  {"hz", std::filesystem::path(hz).filename().string()}}
                 .dump();
    }
    CodeBundle b = load_code(spec);
    EXPECT_EQ(b.code.n, 9u);
    EXPECT_EQ(b.code.k, 1u);
    EXPECT_EQ(b.distance, 3u);
    EXPECT_FALSE(b.is_surface());
    Circuit c = synth_memory(b, 2, Experiment::MemoryZErrors);
    EXPECT_TRUE(validate_constraints(c).empty());

    std::string gb = tmp_path("gb.json");
    {
        std::ofstream s(gb);
        s << R"({"l": 7, "a": [0, 1, 3], "b": [0, 2, 5], "d": 3})";
    }
    CodeBundle g = load_code(gb);
    EXPECT_EQ(g.code.n, 14u);
    EXPECT_EQ(g.distance, 3u);

    std::string bad = tmp_path("bad.json");
    {
        std::ofstream s(bad);
        s << R"({"hx": ["011", "10"], "hz": ["111"]})";
    }
    EXPECT_THROW(load_code(bad), std::invalid_argument);
}

TEST(experiment, config_parsing_and_defaults) {
    ExperimentConfig c = parse_config(R"({"code": "wide-d3", "seed": 7})");
    EXPECT_EQ(c.code, "wide-d3");
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.shots, 10000u);
    EXPECT_EQ(c.decoder, "auto");
    EXPECT_FALSE(c.rounds.has_value());
    EXPECT_TRUE(std::isinf(c.noise.T2_star));

    ExperimentConfig d = parse_config(R"({
      "code": "hgp-234-3-8", "seed": 1, "shots": 500, "rounds": 2, "decoder": "bposd",
      "experiment": "memory-x", "workers": 2,
      "noise": {"p": 0.002, "p_idle_ratio": 0.1, "T2_star": 2e-5, "v": 5},
      "sweep": {"p": [0.001, 0.002], "T2_star": [null, 1e-5]}
    })");
    EXPECT_EQ(d.experiment, Experiment::MemoryXErrors);
    EXPECT_EQ(*d.rounds, 2u);
    EXPECT_DOUBLE_EQ(*d.p_idle_ratio, 0.1);
    EXPECT_DOUBLE_EQ(d.noise.v, 5);
    ASSERT_EQ(d.sweep_T2_star.size(), 2u);
    EXPECT_TRUE(std::isinf(d.sweep_T2_star[0]));

    // the JSON form parses back to the same config
    ExperimentConfig e = parse_config(config_to_json(d).dump());
    EXPECT_EQ(config_to_json(e), config_to_json(d));

    CodeBundle b = load_code("hgp-234-3-8");
    NoiseParams np = resolve_noise(d, b);
    EXPECT_DOUBLE_EQ(np.p_idle, 0.1 * 0.002);
    EXPECT_EQ(np.shuttle_multiplier, (double)b.shuttle_multiplier);

    ExperimentConfig t = parse_config(R"({"code": "rsc-d3", "seed": 1, "noise": {"T_gate": 1e-6, "T2": 0.02}})");
    EXPECT_NEAR(resolve_noise(t, load_code("rsc-d3")).p_idle, 5e-5, 1e-6);
}

TEST(experiment, config_errors_carry_lines) {
    EXPECT_EQ(config_error_line("{\n  \"code\": \"rsc-d3\",\n  \"seed\": 1,\n  \"shot\": 5\n}"), 4u);
    EXPECT_EQ(config_error_line("{\n  \"code\": \"rsc-d3\", \"seed\": 1,\n  \"noise\": {\n    \"q\": 1\n  }\n}"), 4u);
    EXPECT_EQ(config_error_line("{\n  \"code\": \"rsc-d3\",\n  \"seed\": 1,\n  \"decoder\": \"magic\"\n}"), 4u);
    EXPECT_EQ(config_error_line("{\n  \"code\": \"rsc-d3\",\n  \"seed\": 1\n  \"shots\": 5\n}"), 4u);
    EXPECT_EQ(config_error_line("{\n \"code\": \"rsc-d3\",\n \"seed\": 1,\n \"noise\": {\"p\": 2}\n}"), 4u);
    EXPECT_THROW(parse_config(R"({"code": "rsc-d3"})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"code": "rsc-d3", "seed": -1})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"code": "rsc-d3", "seed": 1, "shots": 0})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"code": "rsc-d3", "seed": 1, "noise": {"p_idle": 0.1, "p_idle_ratio": 0.1}})"),
                 ConfigError);
    EXPECT_THROW(parse_config(R"({"code": "rsc-d3", "seed": 1, "sweep": {"d": [3]}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"seed": 1})"), ConfigError);
    EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
}

TEST(experiment, zero_noise_never_fails) {
    for (const char *code : {"rsc-d3", "wide-d3"}) {
        ExperimentConfig c = parse_config(std::string(R"({"seed": 3, "shots": 2000, "code": ")") + code + "\"}");
        SimulationResult r = simulate(c);
        EXPECT_EQ(r.rate.failures, 0u);
        EXPECT_EQ(r.rate.p_L, 0);
        EXPECT_EQ(r.p_log, 0);
        EXPECT_EQ(r.faults, 0u);
    }
    ExperimentConfig h = parse_config(R"({"seed": 3, "shots": 50, "rounds": 1, "code": "hgp-234-3-8"})");
    EXPECT_EQ(simulate(h).rate.failures, 0u);
}

TEST(experiment, simulate_is_deterministic_across_workers) {
    ExperimentConfig c =
        parse_config(R"({"code": "wide-d3", "seed": 99, "shots": 30000, "noise": {"p": 0.003, "T2_star": 5e-6}})");
    c.workers = 1;
    json a = stable(simulate(c));
    c.workers = 4;
    json b = stable(simulate(c));
    c.workers = 1;
    json again = stable(simulate(c));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, again);
    EXPECT_GT(a["failures"].get<size_t>(), 0u);
    c.seed = 100;
    EXPECT_NE(stable(simulate(c))["failures"], a["failures"]);
}

TEST(experiment, larger_distance_helps_at_low_noise) {
    // 10^5 shots each at p = 0.1%, T2* = 20 us
    ExperimentConfig c = parse_config(R"({"code": "wide-d3", "seed": 5, "shots": 100000,
        "noise": {"p": 0.001, "T2_star": 2e-5}})");
    SimulationResult d3 = simulate(c);
    c.code = "wide-d5";
    SimulationResult d5 = simulate(c);
    EXPECT_LT(d5.rate.ci_high, d3.rate.ci_low);
}

TEST(experiment, idling_hurts_hgp) {
    ExperimentConfig c = parse_config(R"({"code": "hgp-234-3-8", "seed": 5, "shots": 1500, "rounds": 4,
        "noise": {"p": 0.003, "T2_star": 2e-5, "p_idle_ratio": 0}})");
    SimulationResult quiet = simulate(c);
    c.p_idle_ratio = 0.1;
    SimulationResult idle = simulate(c);
    EXPECT_EQ(quiet.decoder, "bposd");
    EXPECT_GT(idle.p_log, quiet.p_log);
    EXPECT_GT(idle.rate.ci_low, quiet.rate.ci_high);
}

TEST(experiment, sweep_order_seeds_and_csv) {
    ExperimentConfig c = parse_config(R"({"code": "rsc-d3", "seed": 4, "shots": 3000,
        "noise": {"p": 0.002, "T2_star": 2e-5},
        "sweep": {"code": ["rsc-d3", "wide-d3"], "p": [0.002, 0.004]}})");
    auto rows = sweep(c);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].code, "rsc-d3");
    EXPECT_EQ(rows[1].code, "rsc-d3");
    EXPECT_EQ(rows[2].code, "wide-d3");
    EXPECT_DOUBLE_EQ(rows[1].noise.p, 0.004);
    for (size_t i = 0; i < rows.size(); i++) {
        EXPECT_EQ(rows[i].seed, sweep_point_seed(4, i));
    }
    EXPECT_NE(sweep_point_seed(4, 0), sweep_point_seed(4, 1));
    EXPECT_NE(sweep_point_seed(4, 0), sweep_point_seed(5, 0));

    // a single point of the sweep reproduces on its own
    ExperimentConfig one = c;
    one.code = "wide-d3";
    one.noise.p = 0.004;
    one.seed = rows[3].seed;
    EXPECT_EQ(stable(simulate(one)), stable(rows[3]));

    std::stringstream csv;
    write_sweep_csv(csv, rows);
    std::string header;
    std::getline(std::stringstream(csv.str()), header);
    EXPECT_EQ(header.rfind("d,p,T2_star,p_log,ci_low,ci_high", 0), 0u);
    auto pts = read_sweep_points(csv);
    ASSERT_EQ(pts.size(), 4u);
    EXPECT_EQ(pts[0].first, 3);
    EXPECT_NEAR(pts[1].second, rows[1].p_log, 1e-9 * rows[1].p_log + 1e-15);
    std::stringstream again(csv.str());
    EXPECT_EQ(read_sweep_points(again, 0.004).size(), 2u);
    std::stringstream broken("d,p\n3,0.1\n");
    EXPECT_THROW(read_sweep_points(broken), std::invalid_argument);
}

// ---- command line

namespace {

struct CliRun {
    int status;
    std::string out;
};

CliRun run_cli(const std::string &args) {
    std::string cmd = std::string(SQEC_CLI) + " " + args + " 2>&1";
    FILE *p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) {
        out.append(buf, n);
    }
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

json last_json(const std::string &out) {
    auto start = out.find('{');
    return json::parse(out.substr(start));
}

}  // namespace

TEST(cli, subcommands_emit_json) {
    CliRun info = run_cli("code-info hgp-234-3-8");
    ASSERT_EQ(info.status, 0) << info.out;
    json j = json::parse(info.out);
    EXPECT_EQ(j["n"], 234);
    EXPECT_EQ(j["k"], 3);
    EXPECT_EQ(j["d_estimate"], 8);
    EXPECT_EQ(j["total_qubits"], 465);

    CliRun lay = run_cli("layout-plan wide-d5 --rounds 3");
    ASSERT_EQ(lay.status, 0) << lay.out;
    json l = json::parse(lay.out);
    EXPECT_EQ(l["n_shuttles"], 4 * 3 + 1);
    EXPECT_EQ(l["total_distance"], 3 * (2 * 5 + 2) + 5 - 1);

    CliRun q = run_cli("layout-plan hgp-234-3-8");
    ASSERT_EQ(q.status, 0) << q.out;
    EXPECT_LE(json::parse(q.out)["band_width"].get<long>(), 34);

    CliRun sim = run_cli("simulate --code rsc-d3 --seed 1 --shots 1000");
    ASSERT_EQ(sim.status, 0) << sim.out;
    EXPECT_EQ(json::parse(sim.out)["failures"], 0);
}

TEST(cli, simulate_output_is_identical_across_workers) {
    std::string cfg = tmp_path("det.json");
    {
        std::ofstream s(cfg);
        s << R"({"code": "wide-d3", "seed": 12, "shots": 20000, "noise": {"p": 0.002, "T2_star": 1e-5}})";
    }
    auto strip = [](std::string s) {
        json j = json::parse(s);
        j.erase("seconds");
        return j.dump();
    };
    CliRun a = run_cli("simulate -c " + cfg + " --workers 1");
    CliRun b = run_cli("simulate -c " + cfg + " --workers 3");
    CliRun e = run_cli("simulate -c " + cfg);
    ASSERT_EQ(a.status, 0) << a.out;
    EXPECT_EQ(strip(a.out), strip(b.out));
    EXPECT_EQ(strip(a.out), strip(e.out));
}

TEST(cli, errors_are_json_with_nonzero_exit) {
    std::string cfg = tmp_path("bad.json");
    {
        std::ofstream s(cfg);
        s << "{\n  \"code\": \"rsc-d3\",\n  \"seed\": 1,\n  \"colour\": \"blue\"\n}\n";
    }
    CliRun r = run_cli("simulate -c " + cfg);
    EXPECT_NE(r.status, 0);
    json e = last_json(r.out);
    EXPECT_EQ(e["error"], "config");
    EXPECT_EQ(e["line"], 4);

    CliRun noseed = run_cli("simulate --code rsc-d3");
    EXPECT_NE(noseed.status, 0);
    EXPECT_EQ(last_json(noseed.out)["error"], "config");

    CliRun unknown = run_cli("code-info nonsense");
    EXPECT_NE(unknown.status, 0);
    EXPECT_TRUE(last_json(unknown.out).contains("message"));

    CliRun usage = run_cli("frobnicate");
    EXPECT_NE(usage.status, 0);
    EXPECT_EQ(last_json(usage.out)["error"], "usage");
}

TEST(cli, synth_sample_decode_round_trip) {
    std::string circ = tmp_path("c.txt"), dem = tmp_path("m.dem"), batch = tmp_path("b.bin");
    CliRun s = run_cli("synth --code rsc-d3 --rounds 3 --p 0.004 --T2-star 2e-5 --circuit-out " + circ + " --dem-out " +
                    dem);
    ASSERT_EQ(s.status, 0) << s.out;
    EXPECT_EQ(last_json(s.out)["violations"], 0);
    CliRun sm = run_cli("sample --dem " + dem + " --shots 500 --seed 3 -o " + batch);
    ASSERT_EQ(sm.status, 0) << sm.out;
    CliRun d = run_cli("decode --dem " + dem + " --batch " + batch + " --per-shot");
    ASSERT_EQ(d.status, 0) << d.out;
    json j = json::parse(d.out);
    EXPECT_EQ(j["shots"], 500);
    EXPECT_EQ(j["predictions"].size(), 500u);
    EXPECT_EQ(j["decoder"], "mwpm");
    CliRun agg = run_cli("decode --dem " + dem + " --batch " + batch);
    EXPECT_EQ(json::parse(agg.out)["failures"], j["failures"]);
}

TEST(cli, fit_and_resources) {
    std::string csv = tmp_path("curve.csv");
    {
        std::ofstream s(csv);
        s << "d,p,T2_star,p_log,ci_low,ci_high,p_L\n";
        for (int d = 3; d <= 13; d += 2) {
            double pl = 0.02 * std::pow(0.25, (d - 3) / 2.0);
            s << d << ",0.001,2e-05," << pl / d << ",0,0," << pl << "\n";
        }
    }
    std::string fit = tmp_path("fit.json");
    CliRun f = run_cli("fit " + csv + " -o " + fit);
    ASSERT_EQ(f.status, 0) << f.out;
    CliRun r = run_cli("resources hubbard --fit " + fit);
    ASSERT_EQ(r.status, 0) << r.out;
    json j = json::parse(r.out);
    EXPECT_EQ(j["patches"], 288);
    // 0.02 * 0.25^((d-3)/2) <= 3.38e-13 first holds at d = 39
    EXPECT_EQ(j["distance"], 39);
    CliRun n = run_cli("resources nisq");
    ASSERT_EQ(n.status, 0) << n.out;
    EXPECT_EQ(json::parse(n.out)["patches"], 130);
}
