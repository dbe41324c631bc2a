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

#ifndef CVMBQC_GOLDENS_HPP
#define CVMBQC_GOLDENS_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cluster.hpp"
#include "core.hpp"
#include "executor.hpp"
#include "gates.hpp"

namespace cvmbqc {

inline constexpr const char *kCzGoldenVersion = "cz-tables-v1";
inline constexpr const char *kEncoderGoldenVersion = "encoder-v1";
inline constexpr double kGoldenR = 1.0;

/// Displacement table with temporal indices relative to an anchor gate index.
struct RelativeTable {
    Mat D;
    std::vector<OutcomeLabel> labels;

    static RelativeTable from(const DisplacementTable &t, int anchor) {
        RelativeTable r{t.D, t.labels};
        for (auto &l : r.labels) l.k -= anchor;
        return r;
    }
    DisplacementTable at(int anchor) const {
        DisplacementTable t{D, labels};
        for (auto &l : t.labels) l.k += anchor;
        return t;
    }
};

struct CzGolden {
    double g = 0.0;
    Mat noise_even, noise_odd;
    RelativeTable d_even, d_odd;
};

struct EncoderGolden {
    int N = 12;
    RelativeTable d;
    Mat noise_cov;
    std::vector<double> factors;
};

struct GoldenSet {
    std::string cz_version = kCzGoldenVersion;
    std::string encoder_version = kEncoderGoldenVersion;
    int N = 12;
    std::vector<CzGolden> cz;
    EncoderGolden encoder;

    CzNoiseTable cz_table() const {
        CzNoiseTable t;
        t.version = cz_version;
        for (const auto &e : cz) t.entries.push_back({e.g, e.noise_even, e.noise_odd});
        return t;
    }
    const CzGolden *find_cz(double g) const {
        for (const auto &e : cz)
            if (std::abs(e.g - g) < 1e-12) return &e;
        return nullptr;
    }
};

inline const std::vector<double> &cz_golden_grid() {
    static const std::vector<double> g = {-1.0, -0.5, 0.0, 0.5, 1.0};
    return g;
}

/// Noise covariance (units of e^{-2r} V0) and output table of one circuit.
struct DerivedCircuit {
    Mat noise_cov;
    DisplacementTable d;
};

inline DerivedCircuit derive_circuit(const Circuit &circ, int N, int K, double r = kGoldenR) {
    ClusterParams p;
    p.N = N;
    p.K = K;
    p.r = r;
    ClusterState c = build_coiled_cluster(p);
    BasisSchedule s = compile_schedule(circ, N, K);
    MeasurementPlan plan = make_plan(c, s);
    Compensation comp = derive_compensation(c, s, plan);
    JointStatistics st = evaluate(c, s, plan, comp);
    return {st.noise_cov / (std::exp(-2 * r) * kV0), comp.output_table()};
}

inline GoldenSet derive_goldens(int N = 12, int K = 228) {
    GoldenSet gs;
    gs.N = N;
    for (double g : cz_golden_grid()) {
        CzGolden e;
        e.g = g;
        for (int par : {0, 1}) {
            int k = first_placement(par, N);
            DerivedCircuit d = derive_circuit(Circuit{{GateSpec::cz(g, k)}}, N, K);
            (par == 0 ? e.noise_even : e.noise_odd) = d.noise_cov;
            (par == 0 ? e.d_even : e.d_odd) = RelativeTable::from(d.d, k);
        }
        gs.cz.push_back(e);
    }
    const int k0 = first_placement(1, N);
    DerivedCircuit d = derive_circuit(encoder_circuit(k0, N), N, K);
    gs.encoder.N = N;
    gs.encoder.d = RelativeTable::from(d.d, k0);
    gs.encoder.noise_cov = d.noise_cov;
    for (int i = 0; i < d.noise_cov.rows(); ++i) gs.encoder.factors.push_back(d.noise_cov(i, i));
    return gs;
}

namespace detail {

inline nlohmann::json mat_json(const Mat &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

inline Mat json_mat(const nlohmann::json &j) {
    require(j.is_array() && !j.empty() && j[0].is_array(), ErrorKind::Config, "matrix must be a non-empty array of rows");
    Mat m(j.size(), j[0].size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        require(j[i].size() == j[0].size(), ErrorKind::Config, "ragged matrix");
        for (std::size_t k = 0; k < j[i].size(); ++k) m(i, k) = j[i][k].get<double>();
    }
    return m;
}

inline nlohmann::json table_json(const RelativeTable &t) {
    nlohmann::json labels = nlohmann::json::array();
    for (const auto &l : t.labels) labels.push_back(std::string(1, l.kind) + "," + std::to_string(l.k));
    return {{"labels_relative", labels}, {"D", mat_json(t.D)}};
}

inline RelativeTable json_table(const nlohmann::json &j) {
    RelativeTable t;
    t.D = json_mat(j.at("D"));
    for (const auto &l : j.at("labels_relative")) t.labels.push_back(OutcomeLabel::parse(l.get<std::string>()));
    require(static_cast<int>(t.labels.size()) == t.D.cols(), ErrorKind::Config, "label count != D columns");
    return t;
}

}  // namespace detail

inline nlohmann::json cz_goldens_json(const GoldenSet &gs) {
    nlohmann::json j;
    j["version"] = gs.cz_version;
    j["N"] = gs.N;
    j["r"] = kGoldenR;
    j["noise_units"] = "exp(-2r) V0";
    j["entries"] = nlohmann::json::array();
    for (const auto &e : gs.cz)
        j["entries"].push_back({{"g", e.g},
                                {"noise_even", detail::mat_json(e.noise_even)},
                                {"noise_odd", detail::mat_json(e.noise_odd)},
                                {"D_even", detail::table_json(e.d_even)},
                                {"D_odd", detail::table_json(e.d_odd)}});
    return j;
}

inline nlohmann::json encoder_golden_json(const GoldenSet &gs) {
    nlohmann::json j;
    j["version"] = gs.encoder_version;
    j["N"] = gs.encoder.N;
    j["r"] = kGoldenR;
    j["anchor"] = "first CZ input index";
    j["noise_units"] = "exp(-2r) V0";
    j["D"] = detail::table_json(gs.encoder.d);
    j["noise_cov"] = detail::mat_json(gs.encoder.noise_cov);
    j["noise_factors"] = gs.encoder.factors;
    return j;
}

inline constexpr const char *kCzGoldenFile = "cz_tables.json";
inline constexpr const char *kEncoderGoldenFile = "encoder.json";

inline void write_goldens(const std::filesystem::path &dir, const GoldenSet &gs) {
    std::filesystem::create_directories(dir);
    std::ofstream(dir / kCzGoldenFile) << cz_goldens_json(gs).dump(2) << "\n";
    std::ofstream(dir / kEncoderGoldenFile) << encoder_golden_json(gs).dump(2) << "\n";
}

inline nlohmann::json read_json(const std::filesystem::path &p) {
    std::ifstream in(p);
    require(in.good(), ErrorKind::Config, "cannot read " + p.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Config, p.string() + ": " + e.what());
    }
}

inline GoldenSet load_goldens(const std::filesystem::path &dir) {
    GoldenSet gs;
    try {
        nlohmann::json cz = read_json(dir / kCzGoldenFile);
        gs.cz_version = cz.at("version").get<std::string>();
        require(gs.cz_version == kCzGoldenVersion, ErrorKind::Config, "unsupported CZ golden version " + gs.cz_version);
        gs.N = cz.at("N").get<int>();
        for (const auto &e : cz.at("entries")) {
            CzGolden c;
            c.g = e.at("g").get<double>();
            c.noise_even = detail::json_mat(e.at("noise_even"));
            c.noise_odd = detail::json_mat(e.at("noise_odd"));
            c.d_even = detail::json_table(e.at("D_even"));
            c.d_odd = detail::json_table(e.at("D_odd"));
            gs.cz.push_back(c);
        }
        nlohmann::json en = read_json(dir / kEncoderGoldenFile);
        gs.encoder_version = en.at("version").get<std::string>();
        require(gs.encoder_version == kEncoderGoldenVersion, ErrorKind::Config,
                "unsupported encoder golden version " + gs.encoder_version);
        gs.encoder.N = en.at("N").get<int>();
        gs.encoder.d = detail::json_table(en.at("D"));
        gs.encoder.noise_cov = detail::json_mat(en.at("noise_cov"));
        gs.encoder.factors = en.at("noise_factors").get<std::vector<double>>();
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Config, std::string("golden table: ") + e.what());
    }
    return gs;
}

}  // namespace cvmbqc

#endif  // CVMBQC_GOLDENS_HPP
