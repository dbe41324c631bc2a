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

#ifndef CVMBQC_EXPERIMENTS_HPP
#define CVMBQC_EXPERIMENTS_HPP

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cluster.hpp"
#include "core.hpp"
#include "executor.hpp"
#include "gates.hpp"
#include "goldens.hpp"
#include "opo.hpp"
#include "tomography.hpp"

namespace cvmbqc {

inline constexpr const char *kToolVersion = "0.1.0";
inline constexpr const char *kEnvPrefix = "CVMBQC_";

/// Published configuration schema: key, meaning, default.
struct ConfigKey {
    const char *key;
    const char *help;
    const char *fallback;
};

inline const std::vector<ConfigKey> &config_schema() {
    static const std::vector<ConfigKey> keys = {
        {"experiment", "nullifiers | tomography-single | tomography-cz | circuit-encoder | noise-sweep | calibrate-D", ""},
        {"N", "modes per cylinder circumference (even, >= 4)", "12"},
        {"K", "temporal modes simulated (>= 3N)", "228"},
        {"r", "squeezing parameter of every source", "1"},
        {"squeezing_db", "source p variance in dB relative to V0; overrides r (pure sources)", ""},
        {"source_var_x", "impure source x variance (absolute, with source_var_p)", ""},
        {"source_var_p", "impure source p variance (absolute, with source_var_x)", ""},
        {"opo_inputs", "true: source variances from the OPO model at opo.target_db", "false"},
        {"convention", "cluster-type | approximate", "cluster-type"},
        {"mode", "det | mc", "det"},
        {"seed", "unsigned 64-bit seed", "1"},
        {"shots", "shots per sampled run", "100000"},
        {"workers", "sampling threads", "1"},
        {"out", "output directory", "out"},
        {"goldens", "golden table directory (derived in memory when absent)", ""},
        {"gate", "R | P | S | I (single-mode experiments)", "R"},
        {"values", "comma list of gate parameters; angles accept a deg suffix", "0"},
        {"wires", "comma list of wires for gate placement", "0,1"},
        {"g", "comma list of CZ couplings", "-1,-0.5,0,0.5,1"},
        {"r_cal", "resource squeezing of the calibration cluster", "10"},
        {"opo.eta", "overall efficiency", "0.777"},
        {"opo.gamma", "OPO decay rate in rad/s", "48380526.865282"},
        {"opo.kappa", "mode-function width in rad/s", "12566370.614359"},
        {"opo.tau", "temporal mode duration in s", "2.47e-07"},
        {"opo.target_db", "squeezing target for the pump bisection", "-4.4"},
        {"opo.phase_jitter", "phase jitter std, radians or deg suffix", "0"},
        {"opo.jitter_draws", "Monte-Carlo draws per pump value", "200"},
        {"pumps", "comma list of pump values P/P_thr", "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"},
    };
    return keys;
}

inline std::string env_name(const std::string &key) {
    std::string s = kEnvPrefix;
    for (char ch : key) s += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return s;
}

inline std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

using ConfigMap = std::map<std::string, std::string>;

inline bool known_key(const std::string &k) {
    for (const auto &c : config_schema())
        if (k == c.key) return true;
    return false;
}

/// key = value lines, '#' comments.  Unknown or repeated keys are rejected.
inline ConfigMap parse_config_text(const std::string &text) {
    ConfigMap m;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        require(eq != std::string::npos, ErrorKind::Config, "line " + std::to_string(no) + ": expected key = value");
        std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        require(known_key(k), ErrorKind::Config, "line " + std::to_string(no) + ": unknown key '" + k + "'");
        require(!m.count(k), ErrorKind::Config, "line " + std::to_string(no) + ": repeated key '" + k + "'");
        m[k] = v;
    }
    return m;
}

inline ConfigMap read_config_file(const std::filesystem::path &p) {
    std::ifstream in(p);
    require(in.good(), ErrorKind::Config, "cannot read config " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// Environment overrides: CVMBQC_<KEY> with '.' as '_', upper case.
inline void apply_env(ConfigMap &m) {
    for (const auto &c : config_schema())
        if (const char *v = std::getenv(env_name(c.key).c_str())) m[c.key] = trim(v);
}

inline double parse_real(const std::string &key, const std::string &raw, bool angle = false) {
    std::string s = trim(raw);
    double scale = 1.0;
    if (s.size() > 3 && s.compare(s.size() - 3, 3, "deg") == 0) {
        require(angle, ErrorKind::Config, key + ": deg suffix only allowed on angles");
        s = trim(s.substr(0, s.size() - 3));
        scale = kPi / 180.0;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        throw Error(ErrorKind::Config, key + ": not a number '" + raw + "'");
    }
    require(used == s.size() && std::isfinite(v), ErrorKind::Config, key + ": not a number '" + raw + "'");
    return v * scale;
}

inline long long parse_int(const std::string &key, const std::string &raw) {
    std::string s = trim(raw);
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception &) {
        throw Error(ErrorKind::Config, key + ": not an integer '" + raw + "'");
    }
    require(used == s.size(), ErrorKind::Config, key + ": not an integer '" + raw + "'");
    return v;
}

inline std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(trim(item));
    return out;
}

struct RunConfig {
    std::string experiment;
    ClusterParams cluster;
    bool opo_inputs = false;
    OpoParams opo;
    double opo_target_db = -4.4;
    int jitter_draws = 200;
    std::string mode = "det";
    std::uint64_t seed = 1;
    long shots = 100000;
    int workers = 1;
    std::string out = "out";
    std::string goldens;
    std::string gate = "R";
    std::vector<double> values{0.0};
    std::vector<int> wires{0, 1};
    std::vector<double> g;
    double r_cal = 10.0;
    std::vector<double> pumps;
    /// Effective key/value snapshot after defaults and overrides.
    ConfigMap snapshot;
};

inline RunConfig make_config(const ConfigMap &given) {
    ConfigMap m;
    for (const auto &c : config_schema())
        if (*c.fallback) m[c.key] = c.fallback;
    for (const auto &[k, v] : given) {
        require(known_key(k), ErrorKind::Config, "unknown key '" + k + "'");
        m[k] = v;
    }
    RunConfig c;
    c.snapshot = m;
    auto has = [&](const char *k) { return m.count(k) && !m.at(k).empty(); };
    require(has("experiment"), ErrorKind::Config, "experiment is required");
    c.experiment = m["experiment"];
    static const std::set<std::string> kinds = {"nullifiers",      "tomography-single", "tomography-cz",
                                                "circuit-encoder", "noise-sweep",       "calibrate-D"};
    require(kinds.count(c.experiment), ErrorKind::Config, "unknown experiment '" + c.experiment + "'");
    c.cluster.N = static_cast<int>(parse_int("N", m["N"]));
    c.cluster.K = static_cast<int>(parse_int("K", m["K"]));
    c.cluster.r = parse_real("r", m["r"]);
    if (has("squeezing_db")) {
        double db = parse_real("squeezing_db", m["squeezing_db"]);
        require(db <= 0.0, ErrorKind::Config, "squeezing_db must be <= 0");
        c.cluster.r = -db * std::log(10.0) / 20.0;
    }
    const std::string conv = m["convention"];
    require(conv == "cluster-type" || conv == "approximate", ErrorKind::Config, "convention: cluster-type | approximate");
    c.cluster.convention = conv == "approximate" ? EdgeConvention::Approximate : EdgeConvention::ClusterType;
    require(has("source_var_x") == has("source_var_p"), ErrorKind::Config,
            "source_var_x and source_var_p go together");
    if (has("source_var_x"))
        c.cluster.source_var = std::make_pair(parse_real("source_var_x", m["source_var_x"]),
                                              parse_real("source_var_p", m["source_var_p"]));
    require(m["opo_inputs"] == "true" || m["opo_inputs"] == "false", ErrorKind::Config, "opo_inputs: true | false");
    c.opo_inputs = m["opo_inputs"] == "true";
    c.opo.eta = parse_real("opo.eta", m["opo.eta"]);
    c.opo.gamma = parse_real("opo.gamma", m["opo.gamma"]);
    c.opo.kappa = parse_real("opo.kappa", m["opo.kappa"]);
    c.opo.tau = parse_real("opo.tau", m["opo.tau"]);
    c.opo.phase_jitter_deg = parse_real("opo.phase_jitter", m["opo.phase_jitter"], true) * 180.0 / kPi;
    c.opo_target_db = parse_real("opo.target_db", m["opo.target_db"]);
    c.jitter_draws = static_cast<int>(parse_int("opo.jitter_draws", m["opo.jitter_draws"]));
    c.mode = m["mode"];
    require(c.mode == "det" || c.mode == "mc", ErrorKind::Config, "mode: det | mc");
    try {
        std::size_t used = 0;
        c.seed = std::stoull(m["seed"], &used);
        require(used == m["seed"].size(), ErrorKind::Config, "seed: unsigned integer");
    } catch (const std::logic_error &) {
        throw Error(ErrorKind::Config, "seed: unsigned integer");
    }
    c.shots = static_cast<long>(parse_int("shots", m["shots"]));
    require(c.shots >= 1, ErrorKind::Config, "shots must be >= 1");
    c.workers = static_cast<int>(parse_int("workers", m["workers"]));
    require(c.workers >= 1, ErrorKind::Config, "workers must be >= 1");
    c.out = m["out"];
    c.goldens = has("goldens") ? m["goldens"] : "";
    c.gate = m["gate"];
    require(c.gate == "R" || c.gate == "P" || c.gate == "S" || c.gate == "I", ErrorKind::Config, "gate: R | P | S | I");
    c.values.clear();
    for (const auto &v : split_list(m["values"])) c.values.push_back(parse_real("values", v, c.gate == "R"));
    require(!c.values.empty(), ErrorKind::Config, "values must not be empty");
    c.wires.clear();
    for (const auto &v : split_list(m["wires"])) c.wires.push_back(static_cast<int>(parse_int("wires", v)));
    for (int w : c.wires)
        require(w >= 0 && w < c.cluster.N / 2, ErrorKind::Config, "wire index outside [0, N/2)");
    for (const auto &v : split_list(m["g"])) c.g.push_back(parse_real("g", v));
    c.r_cal = parse_real("r_cal", m["r_cal"]);
    for (const auto &v : split_list(m["pumps"])) c.pumps.push_back(parse_real("pumps", v));
    try {
        c.cluster.validate();
        OpoParams probe = c.opo;
        probe.validate();
        for (double p : c.pumps) {
            probe.pump = p;
            probe.validate();
        }
    } catch (const Error &e) {
        throw Error(ErrorKind::Config, e.what());
    }
    require(c.jitter_draws >= 1, ErrorKind::Config, "opo.jitter_draws must be >= 1");
    return c;
}

/// Hex SHA-256 of a byte string.
inline std::string sha256_hex(const std::string &data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

inline std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    require(in.good(), ErrorKind::Config, "cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Output directory with a record of every emitted artifact.
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    void write(const std::string &name, const std::string &content) {
        std::ofstream(dir_ / name, std::ios::binary) << content;
        files_[name] = sha256_hex(content);
    }
    const std::map<std::string, std::string> &files() const { return files_; }
    const std::filesystem::path &dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::map<std::string, std::string> files_;
};

/// Fixed-format CSV writer.
class Csv {
public:
    explicit Csv(const std::string &header) { os_ << header << "\n"; os_.precision(17); }
    template <class... T>
    void row(const T &...cells) {
        bool first = true;
        ((os_ << (first ? "" : ",") << cells, first = false), ...);
        os_ << "\n";
    }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

/// Empty cell for absent values.
inline std::string cell(std::optional<double> v) {
    if (!v) return "";
    std::ostringstream os;
    os.precision(17);
    os << *v;
    return os.str();
}

struct RunContext {
    RunConfig cfg;
    std::optional<std::pair<double, double>> opo_variances;
    std::optional<double> opo_pump;
    std::vector<std::string> golden_versions;
    nlohmann::json extra = nlohmann::json::object();
};

inline ClusterState experiment_cluster(RunContext &ctx) {
    ClusterParams p = ctx.cfg.cluster;
    if (ctx.cfg.opo_inputs) {
        OpoParams o = ctx.cfg.opo;
        double pump = find_pump_for_squeezing(ctx.cfg.opo_target_db, o);
        o.pump = pump;
        QuadratureVariancePair v = mode_variances(o);
        p.source_var = std::make_pair(v.var_x, v.var_p);
        ctx.opo_variances = p.source_var;
        ctx.opo_pump = pump;
        ctx.extra["opo_calibration"] = {{"target_db", ctx.cfg.opo_target_db}, {"pump", pump},
                                        {"var_x", v.var_x}, {"var_p", v.var_p}};
    }
    p.validate();
    return build_coiled_cluster(p);
}

inline GateSpec make_gate(const std::string &g, double v, int k) {
    if (g == "R") return GateSpec::rotation(v, k);
    if (g == "P") return GateSpec::shear(v, k);
    if (g == "S") return GateSpec::squeeze(v, k);
    return GateSpec::identity(k);
}

inline GoldenSet experiment_goldens(RunContext &ctx) {
    GoldenSet gs;
    if (!ctx.cfg.goldens.empty() && std::filesystem::exists(std::filesystem::path(ctx.cfg.goldens) / kCzGoldenFile)) {
        gs = load_goldens(ctx.cfg.goldens);
        require(gs.N == ctx.cfg.cluster.N, ErrorKind::Config, "golden tables were derived for another N");
    } else {
        gs = derive_goldens(ctx.cfg.cluster.N, std::max(ctx.cfg.cluster.K, 10 * ctx.cfg.cluster.N));
    }
    ctx.golden_versions = {gs.cz_version, gs.encoder_version};
    return gs;
}

inline nlohmann::json report_json(const TransferReport &t) {
    return {{"S_hat", detail::mat_json(t.S_hat)},
            {"noise_variances", std::vector<double>(t.noise.data(), t.noise.data() + t.noise.size())},
            {"input_cov", detail::mat_json(t.input_cov)},
            {"epsilon", t.eps},
            {"provenance", t.provenance},
            {"shots", t.shots}};
}

inline nlohmann::json sampled_json(const SampledTomography &t) {
    auto vec = [](const Vec &v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    return {{"S_hat", detail::mat_json(t.S_hat)},       {"S_se", detail::mat_json(t.S_se)},
            {"S_batch_se", detail::mat_json(t.S_batch_se)}, {"noise_variances", vec(t.noise)},
            {"noise_se", vec(t.noise_se)},              {"input_variances", vec(t.in_var)},
            {"epsilon", t.eps},                         {"epsilon_se", t.eps_se},
            {"provenance", "shots"},                    {"shots", t.shots}};
}

/// Writes rows "label,entry,value,uncertainty,expected" for one transfer.
struct TransferRows {
    Mat S, S_err, expected_S;
    Vec noise, noise_err, expected_noise;
    bool has_err = false;
};

inline void emit_transfer(Csv &csv, const std::string &prefix, const TransferRows &t) {
    const int m = static_cast<int>(t.S.rows());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            csv.row(prefix, "S" + std::to_string(i + 1) + std::to_string(j + 1), t.S(i, j),
                    cell(t.has_err ? std::optional<double>(t.S_err(i, j)) : std::nullopt), t.expected_S(i, j));
    for (int i = 0; i < m; ++i) {
        csv.row(prefix, "noise_q" + std::to_string(i + 1), t.noise(i),
                cell(t.has_err ? std::optional<double>(t.noise_err(i)) : std::nullopt), t.expected_noise(i));
        csv.row(prefix, "noise_q" + std::to_string(i + 1) + "_dB", to_db(std::max(t.noise(i), 1e-300)), "",
                to_db(t.expected_noise(i)));
    }
}

inline TransferRows transfer_rows(const ClusterState &c, const Circuit &circ, const RunConfig &cfg, const Mat &S_exp,
                                  const Vec &noise_exp, nlohmann::json &reports) {
    TransferRows rows;
    rows.expected_S = S_exp;
    rows.expected_noise = noise_exp;
    if (cfg.mode == "det") {
        TransferReport t = tomography_deterministic(c, compile_schedule(circ, cfg.cluster.N, cfg.cluster.K));
        rows.S = t.S_hat;
        rows.noise = t.noise;
        reports.push_back(report_json(t));
    } else {
        SampledTomography t = tomography_sampled(c, circ, cfg.seed, cfg.shots, cfg.workers);
        rows.S = t.S_hat;
        rows.S_err = t.S_se;
        rows.noise = t.noise;
        rows.noise_err = t.noise_se;
        rows.has_err = true;
        reports.push_back(sampled_json(t));
    }
    return rows;
}

inline constexpr const char *kTransferHeader = "point,entry,value,uncertainty,expected";

inline void run_nullifiers(RunContext &ctx, ArtifactWriter &w) {
    ClusterState c = experiment_cluster(ctx);
    auto ct = nullifier_variances(c, EdgeConvention::ClusterType);
    auto ap = nullifier_variances(c, EdgeConvention::Approximate);
    Csv csv("k,spatial,variance_cluster_type,variance_approximate,closed_cluster_type,closed_approximate");
    const bool pure = !c.params.source_var;
    for (std::size_t i = 0; i < ct.size(); ++i)
        csv.row(ct[i].i, spatial_char(ct[i].spatial), ct[i].variance, ap[i].variance,
                cell(pure ? std::optional<double>(nullifier_closed_form(c.params.r, EdgeConvention::ClusterType))
                          : std::nullopt),
                cell(pure ? std::optional<double>(nullifier_closed_form(c.params.r, EdgeConvention::Approximate))
                          : std::nullopt));
    w.write("nullifiers.csv", csv.str());
    WireProjection wp = project_wires(c);
    Csv wc("k,wire,edge_sign,nullifier_a,nullifier_b,expected");
    for (const auto &s : wp.segments) wc.row(s.k, s.wire, s.edge_sign, s.nullifier_a, s.nullifier_b, 4 * c.params.var_p());
    w.write("wire_nullifiers.csv", wc.str());
}

inline void run_tomography_single(RunContext &ctx, ArtifactWriter &w) {
    ClusterState c = experiment_cluster(ctx);
    const int N = ctx.cfg.cluster.N;
    Csv csv(kTransferHeader);
    nlohmann::json reports = nlohmann::json::array();
    for (int wire : ctx.cfg.wires)
        for (double v : ctx.cfg.values) {
            GateSpec g = make_gate(ctx.cfg.gate, v, first_placement(wire, N));
            Vec noise = Vec::Constant(2, 4.0 * c.params.var_p());
            TransferRows rows = transfer_rows(c, Circuit{{g}}, ctx.cfg, expected_symplectic(g, N), noise, reports);
            std::ostringstream p;
            p.precision(17);
            p << ctx.cfg.gate << "(" << v << ")@w" << wire;
            emit_transfer(csv, p.str(), rows);
        }
    w.write("tomography_single.csv", csv.str());
    w.write("reports.json", reports.dump(2) + "\n");
}

inline void run_tomography_cz(RunContext &ctx, ArtifactWriter &w) {
    ClusterState c = experiment_cluster(ctx);
    GoldenSet gs = experiment_goldens(ctx);
    CzNoiseTable table = gs.cz_table();
    const int N = ctx.cfg.cluster.N;
    Csv csv(kTransferHeader);
    nlohmann::json reports = nlohmann::json::array();
    for (int wire : ctx.cfg.wires)
        for (double g : ctx.cfg.g) {
            GateSpec gate = GateSpec::cz(g, first_placement(wire, N));
            gate.validate(N);
            Vec noise = Vec::Constant(4, std::nan(""));
            if (table.find(g)) {
                auto f = expected_noise_factors(gate, N, &table);
                for (int i = 0; i < 4; ++i) noise(i) = f[i] * c.params.var_p();
            }
            TransferRows rows = transfer_rows(c, Circuit{{gate}}, ctx.cfg, expected_symplectic(gate, N), noise, reports);
            std::ostringstream p;
            p.precision(17);
            p << "CZ(" << g << ")@w" << wire;
            emit_transfer(csv, p.str(), rows);
        }
    w.write("tomography_cz.csv", csv.str());
    w.write("reports.json", reports.dump(2) + "\n");
}

inline void run_circuit_encoder(RunContext &ctx, ArtifactWriter &w) {
    ClusterState c = experiment_cluster(ctx);
    GoldenSet gs = experiment_goldens(ctx);
    CzNoiseTable table = gs.cz_table();
    const int N = ctx.cfg.cluster.N;
    const int k0 = first_placement(ctx.cfg.wires.front(), N);
    Circuit circ = encoder_circuit(k0, N);
    ExpectedTransfer ex = compose_circuit(circ, N, &table);
    Vec noise = Eigen::Map<const Vec>(ex.noise_factors.data(), ex.noise_factors.size()) * c.params.var_p();
    nlohmann::json reports = nlohmann::json::array();
    TransferRows rows = transfer_rows(c, circ, ctx.cfg, ex.S, noise, reports);
    Csv csv(kTransferHeader);
    emit_transfer(csv, "encoder@w" + std::to_string(ctx.cfg.wires.front()), rows);
    w.write("circuit_encoder.csv", csv.str());
    w.write("reports.json", reports.dump(2) + "\n");
    Compensation comp = derive_compensation(c, compile_schedule(circ, N, ctx.cfg.cluster.K));
    DisplacementTable d = comp.output_table();
    Csv dc("row,label,value");
    static const char *names[] = {"x1", "x2", "x3", "p1", "p2", "p3"};
    for (int i = 0; i < d.D.rows(); ++i)
        for (int j = 0; j < d.D.cols(); ++j)
            if (d.D(i, j) != 0.0) dc.row(names[i], "\"" + d.labels[j].str() + "\"", d.D(i, j));
    w.write("encoder_D.csv", dc.str());
}

inline void run_noise_sweep(RunContext &ctx, ArtifactWriter &w) {
    const int N = ctx.cfg.cluster.N;
    OpoParams o = ctx.cfg.opo;
    JitterConfig jc;
    jc.draws = ctx.cfg.jitter_draws;
    jc.seed = ctx.cfg.seed;
    jc.N = N;
    jc.K = std::max(6 * N, 3 * N);
    GateSpec gate = make_gate(ctx.cfg.gate, ctx.cfg.values.front(), first_placement(ctx.cfg.wires.front(), N));
    auto pts = gate_noise_vs_pump(ctx.cfg.pumps, o, gate, jc);
    w.write("noise_sweep.csv", noise_curve_csv(pts));
    double pump = find_pump_for_squeezing(ctx.cfg.opo_target_db, o);
    ctx.extra["opo_calibration"] = {{"target_db", ctx.cfg.opo_target_db}, {"pump", pump}};
}

inline void run_calibrate_d(RunContext &ctx, ArtifactWriter &w) {
    ClusterState c = experiment_cluster(ctx);
    const int N = ctx.cfg.cluster.N, K = ctx.cfg.cluster.K;
    require(ctx.cfg.shots >= kMinCalibrationShots, ErrorKind::Config, "calibrate-D needs shots >= 10000");
    Csv csv("point,row,label,estimate,se,derived,analytic,z_analytic");
    int point = 0;
    for (int wire : ctx.cfg.wires)
        for (double v : ctx.cfg.values) {
            GateSpec g = make_gate(ctx.cfg.gate, v, first_placement(wire, N));
            Circuit circ{{g}};
            BasisSchedule s0 = compile_schedule(circ, N, K);
            ClusterState cal = calibration_cluster(c, s0.inputs, ctx.cfg.r_cal);
            Compensation comp = derive_compensation(c, s0);
            DisplacementTable an = displacement_matrix_single(g, N);
            std::ostringstream p;
            p.precision(17);
            p << ctx.cfg.gate << "(" << v << ")@w" << wire;
            for (int row : {0, 1}) {
                BasisSchedule s = compile_schedule(circ, N, K, {row == 1, false});
                std::uint64_t seed = run_seed(ctx.cfg.seed, 2 * point + row);
                SampledRun run = run_sampled(cal, s, seed, ctx.cfg.shots, ctx.cfg.workers);
                CalibrationResult res = calibrate_displacement(run, 0);
                for (std::size_t j = 0; j < res.labels.size(); ++j) {
                    const OutcomeLabel &l = res.labels[j];
                    auto it = std::find(comp.labels.begin(), comp.labels.end(), l);
                    double derived = it == comp.labels.end() ? 0.0 : comp.D_out(row, it - comp.labels.begin());
                    std::optional<double> a;
                    for (int q = 0; q < an.D.cols(); ++q)
                        if (an.labels[q] == l) a = an.D(row, q);
                    std::optional<double> z;
                    if (a) z = (res.coef(j) - *a) / res.se(j);
                    csv.row(p.str(), row == 0 ? "x" : "p", "\"" + l.str() + "\"", res.coef(j), res.se(j), derived,
                            cell(a), cell(z));
                }
            }
            ++point;
        }
    w.write("calibrate_D.csv", csv.str());
}

inline std::string utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

struct RunResult {
    std::filesystem::path out;
    std::map<std::string, std::string> files;
};

/// Executes the configured experiment and writes its artifacts plus manifest.json.
inline RunResult run_experiment(const RunConfig &cfg) {
    auto t0 = std::chrono::steady_clock::now();
    RunContext ctx{cfg, {}, {}, {}, nlohmann::json::object()};
    ArtifactWriter w(cfg.out);
    const std::string &e = cfg.experiment;
    if (e == "nullifiers")
        run_nullifiers(ctx, w);
    else if (e == "tomography-single")
        run_tomography_single(ctx, w);
    else if (e == "tomography-cz")
        run_tomography_cz(ctx, w);
    else if (e == "circuit-encoder")
        run_circuit_encoder(ctx, w);
    else if (e == "noise-sweep")
        run_noise_sweep(ctx, w);
    else
        run_calibrate_d(ctx, w);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json man;
    man["tool_version"] = kToolVersion;
    man["config"] = cfg.snapshot;
    man["wiring"] = WiringConfig{}.str();
    man["golden_versions"] = ctx.golden_versions;
    man["started_utc"] = utc_now();
    man["wall_clock_seconds"] = secs;
    for (auto &[k, v] : ctx.extra.items()) man[k] = v;
    nlohmann::json files = nlohmann::json::array();
    for (const auto &[name, sum] : w.files()) files.push_back({{"file", name}, {"sha256", sum}});
    man["artifacts"] = files;
    std::ofstream(w.dir() / "manifest.json") << man.dump(2) << "\n";
    return {w.dir(), w.files()};
}

/// Re-hashes every artifact listed in manifest.json.  Returns mismatching names.
inline std::vector<std::string> verify_manifest(const std::filesystem::path &dir) {
    nlohmann::json man = read_json(dir / "manifest.json");
    std::vector<std::string> bad;
    for (const auto &f : man.at("artifacts")) {
        std::string name = f.at("file").get<std::string>();
        std::error_code ec;
        if (!std::filesystem::exists(dir / name, ec) || sha256_hex(read_file(dir / name)) != f.at("sha256").get<std::string>())
            bad.push_back(name);
    }
    return bad;
}

}  // namespace cvmbqc

#endif  // CVMBQC_EXPERIMENTS_HPP
