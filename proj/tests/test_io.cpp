// Copyright 2026 The cvmbqc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cvmbqc/acceptance.hpp"
#include "cvmbqc/experiments.hpp"

using namespace cvmbqc;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::InternalInvariant;
}

fs::path scratch(const std::string &name) {
    fs::path p = fs::temp_directory_path() / ("cvmbqc_test_io_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_text(const fs::path &p, const std::string &s) { std::ofstream(p) << s; }

int run_cli(const std::string &args, const fs::path &log) {
    std::string cmd = std::string(CVMBQC_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::vector<std::vector<std::string>> read_csv(const fs::path &p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) rows.push_back(split_list(line));
    return rows;
}

/// Copy of the shipped goldens with one CZ displacement entry altered.
fs::path corrupted_goldens() {
    fs::path dir = scratch("corrupt");
    fs::copy(CVMBQC_GOLDENS_DIR, dir, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
    nlohmann::json j = read_json(dir / kCzGoldenFile);
    auto &d = j["entries"][4]["D_even"]["D"][0][0];
    d = d.get<double>() + 0.25;
    std::ofstream(dir / kCzGoldenFile) << j.dump(1);
    return dir;
}

}  // namespace

TEST(Config, ParsesKeyValueLinesWithComments) {
    ConfigMap m = parse_config_text("# comment\nexperiment = nullifiers\n  r=0.5   # trailing\n\nN = 12\n");
    EXPECT_EQ(m.at("experiment"), "nullifiers");
    EXPECT_EQ(m.at("r"), "0.5");
    EXPECT_EQ(m.size(), 3u);
}

TEST(Config, RejectsUnknownRepeatedAndMalformedLines) {
    EXPECT_EQ(kind_of([] { parse_config_text("experiment = nullifiers\nsqueeze = 3\n"); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { parse_config_text("r = 1\nr = 2\n"); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { parse_config_text("r 1\n"); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { make_config({{"experiment", "nullifiers"}, {"bogus", "1"}}); }), ErrorKind::Config);
}

TEST(Config, ValidatesValues) {
    EXPECT_EQ(kind_of([] { make_config({}); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { make_config({{"experiment", "teleport"}}); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { make_config({{"experiment", "nullifiers"}, {"mode", "fast"}}); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { make_config({{"experiment", "nullifiers"}, {"N", "7"}}); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { make_config({{"experiment", "nullifiers"}, {"wires", "6"}}); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { make_config({{"experiment", "noise-sweep"}, {"pumps", "0,1.0"}}); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { make_config({{"experiment", "nullifiers"}, {"shots", "12x"}}); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { make_config({{"experiment", "nullifiers"}, {"source_var_x", "2"}}); }), ErrorKind::Config);
    RunConfig c = make_config({{"experiment", "nullifiers"}, {"squeezing_db", "-6"}});
    EXPECT_NEAR(c.cluster.var_p(), from_db(-6.0), 1e-12);
}

TEST(Config, DegreeSuffixOnlyOnAngles) {
    RunConfig c = make_config({{"experiment", "tomography-single"}, {"gate", "R"}, {"values", "90deg, -45 deg, 0.5"}});
    ASSERT_EQ(c.values.size(), 3u);
    EXPECT_NEAR(c.values[0], kPi / 2, 1e-15);
    EXPECT_NEAR(c.values[1], -kPi / 4, 1e-15);
    EXPECT_DOUBLE_EQ(c.values[2], 0.5);
    RunConfig j = make_config({{"experiment", "noise-sweep"}, {"opo.phase_jitter", "4deg"}});
    EXPECT_NEAR(j.opo.phase_jitter_deg, 4.0, 1e-12);
    EXPECT_EQ(kind_of([] { make_config({{"experiment", "tomography-single"}, {"gate", "P"}, {"values", "10deg"}}); }),
              ErrorKind::Config);
    EXPECT_EQ(kind_of([] { make_config({{"experiment", "nullifiers"}, {"r", "1deg"}}); }), ErrorKind::Config);
}

TEST(Config, EnvironmentOverridesFile) {
    EXPECT_EQ(env_name("opo.eta"), "CVMBQC_OPO_ETA");
    ConfigMap m = parse_config_text("experiment = noise-sweep\nopo.eta = 0.5\n");
    setenv("CVMBQC_OPO_ETA", "0.9", 1);
    apply_env(m);
    unsetenv("CVMBQC_OPO_ETA");
    EXPECT_DOUBLE_EQ(make_config(m).opo.eta, 0.9);
}

TEST(Manifest, Sha256KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Manifest, NullifierRunChecksumsRoundTrip) {
    fs::path out = scratch("nullifiers");
    RunConfig c = make_config({{"experiment", "nullifiers"}, {"r", "0.5"}, {"K", "48"}, {"out", out.string()}});
    RunResult res = run_experiment(c);
    EXPECT_EQ(res.files.size(), 2u);
    auto rows = read_csv(out / "nullifiers.csv");
    ASSERT_GT(rows.size(), 1u);
    EXPECT_EQ(rows[0][2], "variance_cluster_type");
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][2]), 0.3679, 1e-4);
    nlohmann::json man = read_json(out / "manifest.json");
    EXPECT_EQ(man.at("tool_version"), kToolVersion);
    EXPECT_EQ(man.at("config").at("r"), "0.5");
    EXPECT_EQ(man.at("artifacts").size(), 2u);
    EXPECT_TRUE(verify_manifest(out).empty());
    std::ofstream(out / "nullifiers.csv", std::ios::app) << "tampered\n";
    EXPECT_EQ(verify_manifest(out), std::vector<std::string>{"nullifiers.csv"});
}

TEST(Experiments, NoiseSweepStartsAtSixDecibels) {
    fs::path out = scratch("sweep");
    run_experiment(make_config({{"experiment", "noise-sweep"}, {"pumps", "0,0.5,0.9"}, {"out", out.string()}}));
    auto rows = read_csv(out / "noise_sweep.csv");
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[1][0], "0");
    EXPECT_NEAR(std::stod(rows[1][3]), 6.0206, 1e-4);
    EXPECT_LT(std::stod(rows[3][3]), std::stod(rows[2][3]));
    nlohmann::json man = read_json(out / "manifest.json");
    EXPECT_NEAR(man.at("opo_calibration").at("pump").get<double>(), 0.275651, 1e-6);
}

TEST(Experiments, SampledArtifactsAreByteIdentical) {
    auto once = [](const std::string &name, const std::string &workers) {
        fs::path out = scratch(name);
        run_experiment(make_config({{"experiment", "tomography-single"},
                                    {"mode", "mc"},
                                    {"K", "72"},
                                    {"shots", "3000"},
                                    {"seed", "17"},
                                    {"wires", "0"},
                                    {"values", "30deg"},
                                    {"workers", workers},
                                    {"out", out.string()}}));
        return read_file(out / "tomography_single.csv");
    };
    const std::string a = once("mc_a", "1"), b = once("mc_b", "1"), c = once("mc_c", "3");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
}

TEST(Goldens, VersionMismatchIsConfigError) {
    fs::path dir = scratch("version");
    fs::copy(CVMBQC_GOLDENS_DIR, dir, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
    nlohmann::json j = read_json(dir / kCzGoldenFile);
    j["version"] = "cz-tables-v0";
    std::ofstream(dir / kCzGoldenFile) << j.dump(1);
    EXPECT_EQ(kind_of([&] { load_goldens(dir); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { load_goldens(scratch("empty")); }), ErrorKind::Config);
}

TEST(Goldens, CorruptedDisplacementTableFailsCzCriterion) {
    AcceptanceOptions o;
    o.goldens = corrupted_goldens();
    PhysicalityLedger led;
    CriterionResult r = criterion_cz(o, led);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.id, 5);
    EXPECT_NE(r.detail.find("golden mismatch"), std::string::npos) << r.detail;
    EXPECT_NE(r.detail.find("D(g=1,even)"), std::string::npos) << r.detail;
    AcceptanceOptions clean;
    clean.goldens = CVMBQC_GOLDENS_DIR;
    EXPECT_TRUE(criterion_cz(clean, led).pass);
}

TEST(Cli, SuccessfulRunExitsZero) {
    fs::path dir = scratch("cli_ok");
    write_text(dir / "run.cfg", "experiment = nullifiers\nr = 0.5\nK = 48\n");
    EXPECT_EQ(run_cli("--config " + (dir / "run.cfg").string() + " --out " + (dir / "out").string(), dir / "log"), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "manifest.json"));
}

TEST(Cli, ConfigErrorExitsTwo) {
    fs::path dir = scratch("cli_cfg");
    write_text(dir / "run.cfg", "experiment = nullifiers\nsqueezing = 3\n");
    EXPECT_EQ(run_cli("--config " + (dir / "run.cfg").string() + " --out " + (dir / "out").string(), dir / "log"), 2);
    nlohmann::json err = read_json(dir / "out" / "error.json");
    EXPECT_EQ(err.at("error"), "config");
    EXPECT_EQ(run_cli("--mode fast", dir / "log2"), 2);
}

TEST(Cli, NumericFailureExitsThree) {
    fs::path dir = scratch("cli_num");
    // a squeeze this large has no finite measurement basis
    write_text(dir / "run.cfg", "experiment = tomography-single\nr = 0.5\nK = 72\ngate = S\nvalues = 60\nwires = 0\n");
    EXPECT_EQ(run_cli("--config " + (dir / "run.cfg").string() + " --out " + (dir / "out").string(), dir / "log"), 3);
    nlohmann::json err = read_json(dir / "out" / "error.json");
    EXPECT_EQ(err.at("error"), "degenerate-gate");
}

TEST(Cli, FailedCheckExitsFourAndNamesCriterion) {
    fs::path g = corrupted_goldens();
    fs::path log = scratch("cli_check") / "log";
    EXPECT_EQ(run_cli("--quick --goldens " + g.string(), log), 4);
    const std::string text = read_file(log);
    EXPECT_NE(text.find("[FAIL] C5 CZ tomography"), std::string::npos) << text;
    EXPECT_NE(text.find("[PASS] C1"), std::string::npos);
}
