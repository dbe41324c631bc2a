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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvmbqc/acceptance.hpp"
#include "cvmbqc/experiments.hpp"
#include "cvmbqc/goldens.hpp"

#ifndef CVMBQC_GOLDENS_DIR
#define CVMBQC_GOLDENS_DIR "goldens"
#endif

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCheck = 4;

std::string help_footer() {
    std::ostringstream os;
    os << "Configuration: key = value lines, '#' comments, unknown keys rejected.\n"
       << "Precedence: config file < environment < flags.  Environment overrides use\n"
       << "the prefix " << cvmbqc::kEnvPrefix << " with '.' written as '_' (e.g. CVMBQC_OPO_ETA=0.9).\n\nKeys:\n";
    for (const auto &k : cvmbqc::config_schema())
        os << "  " << std::left << std::setw(18) << k.key << k.help << (*k.fallback ? " [" : "")
           << k.fallback << (*k.fallback ? "]" : "") << "\n";
    os << "\nCSV columns (angles in radians, variances absolute with V0 = 1/2):\n"
       << "  nullifiers         nullifiers.csv: k,spatial,variance_cluster_type,variance_approximate,\n"
       << "                     closed_cluster_type,closed_approximate\n"
       << "                     wire_nullifiers.csv: k,wire,edge_sign,nullifier_a,nullifier_b,expected\n"
       << "  tomography-single  tomography_single.csv: point,entry,value,uncertainty,expected\n"
       << "  tomography-cz      tomography_cz.csv: point,entry,value,uncertainty,expected\n"
       << "  circuit-encoder    circuit_encoder.csv: point,entry,value,uncertainty,expected\n"
       << "                     encoder_D.csv: row,label,value\n"
       << "  noise-sweep        noise_sweep.csv: pump,var_x_dB,var_p_dB,gate_noise_dB,gate_noise_jitter_dB\n"
       << "  calibrate-D        calibrate_D.csv: point,row,label,estimate,se,derived,analytic,z_analytic\n"
       << "Every run writes manifest.json with the config snapshot and SHA-256 of each artifact.\n"
       << "Exit codes: 0 ok, 2 configuration error, 3 numeric failure, 4 acceptance failure.\n";
    return os.str();
}

int report_error(const cvmbqc::Error &e, const std::string &out) {
    nlohmann::json j = {{"error", cvmbqc::error_kind_name(e.kind())}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    if (!out.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out, ec);
        if (!ec) std::ofstream(std::filesystem::path(out) / "error.json") << j.dump(2) << "\n";
    }
    return e.kind() == cvmbqc::ErrorKind::Config ? kExitConfig : kExitNumeric;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Coiled cluster-state MBQC simulator"};
    app.footer(help_footer());
    std::string config_path, out, mode, goldens = CVMBQC_GOLDENS_DIR;
    std::optional<std::uint64_t> seed;
    std::optional<long> shots;
    std::optional<int> workers;
    bool check = false, quick = false, derive = false;
    app.add_option("--config", config_path, "run configuration file");
    app.add_option("--seed", seed, "seed (U64)");
    app.add_option("--shots", shots, "shots per sampled run");
    app.add_option("--mode", mode, "det | mc")->check(CLI::IsMember({"det", "mc"}));
    app.add_option("--out", out, "output directory");
    app.add_option("--workers", workers, "sampling threads");
    app.add_option("--goldens", goldens, "golden table directory");
    app.add_flag("--check", check, "run the acceptance suite");
    app.add_flag("--quick", quick, "deterministic-only acceptance subset");
    app.add_flag("--derive-goldens", derive, "regenerate the golden tables");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    try {
        if (derive) {
            cvmbqc::write_goldens(goldens, cvmbqc::derive_goldens());
            std::cout << "golden tables written to " << goldens << "\n";
            return 0;
        }
        if (check || quick) {
            cvmbqc::AcceptanceOptions o;
            o.quick = quick;
            o.goldens = goldens;
            if (seed) o.seed = *seed;
            if (workers) o.workers = *workers;
            auto rs = cvmbqc::run_acceptance(o, [](const cvmbqc::CriterionResult &r) { std::cout << r.line() << std::endl; });
            return cvmbqc::all_pass(rs) ? 0 : kExitCheck;
        }
        cvmbqc::ConfigMap m;
        if (!config_path.empty()) m = cvmbqc::read_config_file(config_path);
        cvmbqc::apply_env(m);
        if (seed) m["seed"] = std::to_string(*seed);
        if (shots) m["shots"] = std::to_string(*shots);
        if (workers) m["workers"] = std::to_string(*workers);
        if (!mode.empty()) m["mode"] = mode;
        if (!out.empty()) m["out"] = out;
        if (!m.count("goldens")) m["goldens"] = goldens;
        cvmbqc::RunConfig cfg = cvmbqc::make_config(m);
        out = cfg.out;
        auto res = cvmbqc::run_experiment(cfg);
        for (const auto &[name, sum] : res.files) std::cout << (res.out / name).string() << "  " << sum << "\n";
        return 0;
    } catch (const cvmbqc::Error &e) {
        return report_error(e, out);
    } catch (const std::exception &e) {
        return report_error(cvmbqc::Error(cvmbqc::ErrorKind::InternalInvariant, e.what()), out);
    }
}
