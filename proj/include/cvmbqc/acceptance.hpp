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

#ifndef CVMBQC_ACCEPTANCE_HPP
#define CVMBQC_ACCEPTANCE_HPP

#include <chrono>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cluster.hpp"
#include "core.hpp"
#include "executor.hpp"
#include "experiments.hpp"
#include "gates.hpp"
#include "gaussian.hpp"
#include "goldens.hpp"
#include "opo.hpp"
#include "tomography.hpp"

namespace cvmbqc {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;
    double seconds = 0.0;

    std::string line() const {
        std::ostringstream os;
        os.precision(3);
        os << (skipped ? "[SKIP] " : pass ? "[PASS] " : "[FAIL] ") << "C" << id << " " << name << ": " << detail << " ("
           << seconds << " s)";
        return os.str();
    }
};

inline CriterionResult named(int id, const std::string &name) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    return r;
}

struct AcceptanceOptions {
    bool quick = false;
    std::filesystem::path goldens;
    std::filesystem::path scratch = std::filesystem::temp_directory_path() / "cvmbqc_acceptance";
    int workers = 1;
    std::uint64_t seed = 20261018;
};

/// Every covariance produced by the criteria, checked for physicality at the end.
class PhysicalityLedger {
public:
    void add(const std::string &where, const Mat &cov) { items_.push_back({where, cov}); }
    std::size_t size() const { return items_.size(); }

    struct Summary {
        double min_nu = INFINITY;
        std::string worst;
        std::size_t count = 0;
    };
    Summary evaluate() const {
        Summary s;
        for (const auto &it : items_) {
            auto nu = symplectic_eigenvalues(it.cov);
            for (double v : nu)
                if (v < s.min_nu) {
                    s.min_nu = v;
                    s.worst = it.where;
                }
            ++s.count;
        }
        return s;
    }

private:
    struct Item {
        std::string where;
        Mat cov;
    };
    std::vector<Item> items_;
};

namespace acc {

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

inline ClusterState cluster(double r, int K = 228, int N = 12) {
    ClusterParams p;
    p.N = N;
    p.K = K;
    p.r = r;
    return build_coiled_cluster(p);
}

inline const std::vector<double> &r_grid() {
    static const std::vector<double> g = {0.1, 0.25, 0.5, 1.0, 2.0};
    return g;
}

/// The 7-point single-mode gate grids, both parities.
inline std::vector<GateSpec> single_mode_grid(int N) {
    std::vector<GateSpec> out;
    const std::vector<double> th = {-kPi, -2 * kPi / 3, -kPi / 3, 0.0, kPi / 3, 2 * kPi / 3, kPi};
    const std::vector<double> sg = {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5};
    const std::vector<double> sq = {-0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6};
    for (int w : {0, 1}) {
        int k = first_placement(w, N);
        for (double v : th) out.push_back(GateSpec::rotation(v, k));
        for (double v : sg) out.push_back(GateSpec::shear(v, k));
        for (double v : sq) out.push_back(GateSpec::squeeze(v, k));
    }
    return out;
}

inline void add_stats(PhysicalityLedger &led, const std::string &where, const JointStatistics &st) {
    led.add(where + " out/ref", groups_to_xxpp(st.cov, st.n));
    led.add(where + " in/ref", groups_to_xxpp(st.input_block(), st.n));
}

inline GoldenSet goldens(const AcceptanceOptions &o) {
    if (!o.goldens.empty()) return load_goldens(o.goldens);
    return derive_goldens();
}

}  // namespace acc

inline CriterionResult criterion_nullifiers(const AcceptanceOptions &, PhysicalityLedger &led) {
    CriterionResult r = named(1, "nullifier closed forms");
    double worst = 0.0;
    bool wiring_ok = true;
    for (double rr : acc::r_grid()) {
        ClusterState c = acc::cluster(rr);
        for (EdgeConvention conv : {EdgeConvention::ClusterType, EdgeConvention::Approximate}) {
            double ref = nullifier_closed_form(rr, conv);
            for (const auto &n : nullifier_variances(c, conv)) worst = std::max(worst, std::abs(n.variance - ref));
        }
        ClusterParams p = c.params;
        WiringValidation v = validate_wiring_report(p);
        wiring_ok = wiring_ok && v.chosen == WiringConfig{};
        led.add("cluster r=" + acc::fmt(rr), c.covariance(c.X));
    }
    r.pass = worst <= 1e-9 && wiring_ok;
    r.detail = "max |var - closed form| = " + acc::fmt(worst) + ", wiring " + (wiring_ok ? "unique" : "not unique");
    return r;
}

inline CriterionResult criterion_wire_projection(const AcceptanceOptions &, PhysicalityLedger &led) {
    CriterionResult r = named(2, "wire projection nullifier 4V0e^-2r");
    double worst = 0.0;
    std::size_t n = 0;
    for (double rr : acc::r_grid()) {
        ClusterState c = acc::cluster(rr);
        WireProjection wp = project_wires(c);
        const double ref = 4 * kV0 * std::exp(-2 * rr);
        for (const auto &s : wp.segments) {
            worst = std::max({worst, std::abs(s.nullifier_a - ref), std::abs(s.nullifier_b - ref)});
            ++n;
        }
        led.add("wire segment r=" + acc::fmt(rr), wp.segments.front().cov);
    }
    r.pass = worst <= 1e-9 && n > 0;
    r.detail = std::to_string(n) + " segments, max err " + acc::fmt(worst);
    return r;
}

inline CriterionResult criterion_single_tomography(const AcceptanceOptions &, PhysicalityLedger &led) {
    CriterionResult r = named(3, "single-mode tomography round-trip");
    ClusterState c = acc::cluster(1.0);
    const int N = c.params.N, K = c.params.K;
    double worst = 0.0;
    int n = 0;
    for (const GateSpec &g : acc::single_mode_grid(N)) {
        BasisSchedule s = compile_schedule(Circuit{{g}}, N, K);
        JointStatistics st = run_deterministic(c, s);
        TransferReport t = tomography_from_statistics(st, N);
        worst = std::max(worst, max_abs_diff(t.S_hat, expected_symplectic(g, N)));
        acc::add_stats(led, g.str(), st);
        if (g.param == 0.0) {
            led.add(g.str() + " conditional", groups_to_xxpp(run_conditional(c, s).cov, 1));
        }
        ++n;
    }
    r.pass = worst <= 1e-9;
    r.detail = std::to_string(n) + " gates, max |S_hat - S| = " + acc::fmt(worst);
    return r;
}

inline CriterionResult criterion_noise_law(const AcceptanceOptions &, PhysicalityLedger &led) {
    CriterionResult r = named(4, "single-mode gate-noise law");
    ClusterState c = acc::cluster(1.0);
    const int N = c.params.N, K = c.params.K;
    const double ref = 4 * std::exp(-2.0) * kV0;
    double worst = 0.0;
    for (const GateSpec &g : acc::single_mode_grid(N)) {
        TransferReport t = tomography_deterministic(c, compile_schedule(Circuit{{g}}, N, K));
        worst = std::max(worst, (t.noise.array() - ref).abs().maxCoeff());
    }
    // -4.4 dB inputs and vacuum inputs
    const double r44 = 0.44 * std::log(10.0) / 2.0;
    GateSpec g = GateSpec::rotation(0.7, first_placement(0, N));
    ClusterState c44 = acc::cluster(r44);
    JointStatistics st44 = run_deterministic(c44, compile_schedule(Circuit{{g}}, N, K));
    TransferReport t44 = tomography_from_statistics(st44, N);
    acc::add_stats(led, "R(0.7) at -4.4 dB", st44);
    const double ref44 = 4 * kV0 * std::exp(-2 * r44);
    worst = std::max(worst, (t44.noise.array() - ref44).abs().maxCoeff());
    double db44 = to_db(t44.noise.mean());
    ClusterState c0 = acc::cluster(0.0);
    JointStatistics st0 = run_deterministic(c0, compile_schedule(Circuit{{g}}, N, K));
    TransferReport t0 = tomography_from_statistics(st0, N);
    acc::add_stats(led, "R(0.7) at r=0", st0);
    worst = std::max(worst, (t0.noise.array() - 4 * kV0).abs().maxCoeff());
    double db0 = to_db(t0.noise.mean());
    r.pass = worst <= 1e-9 && std::abs(db44 - 1.6) <= 0.05 && std::abs(db0 - 6.0) <= 0.05;
    r.detail = "max err " + acc::fmt(worst) + ", -4.4 dB inputs -> " + acc::fmt(db44) + " dB, r=0 -> " + acc::fmt(db0) +
               " dB";
    return r;
}

inline CriterionResult criterion_cz(const AcceptanceOptions &o, PhysicalityLedger &led) {
    CriterionResult r = named(5, "CZ tomography");
    GoldenSet gs = acc::goldens(o);
    ClusterState c = acc::cluster(1.0);
    const int N = c.params.N, K = c.params.K;
    const double unit = std::exp(-2.0) * kV0;
    double s_err = 0.0, f_err = 0.0, d_err = 0.0;
    std::string bad;
    for (double g : cz_golden_grid()) {
        const CzGolden *e = gs.find_cz(g);
        if (!e) {
            bad += " missing g=" + acc::fmt(g);
            continue;
        }
        for (int par : {0, 1}) {
            int k = first_placement(par, N);
            GateSpec gate = GateSpec::cz(g, k);
            BasisSchedule s = compile_schedule(Circuit{{gate}}, N, K);
            MeasurementPlan plan = make_plan(c, s);
            Compensation comp = derive_compensation(c, s, plan);
            JointStatistics st = evaluate(c, s, plan, comp);
            TransferReport t = tomography_from_statistics(st, N);
            acc::add_stats(led, gate.str(), st);
            s_err = std::max(s_err, max_abs_diff(t.S_hat, expected_symplectic(gate, N)));
            const Mat &gn = par == 0 ? e->noise_even : e->noise_odd;
            for (int i = 0; i < 4; ++i) f_err = std::max(f_err, std::abs(t.noise(i) / unit - gn(i, i)));
            DisplacementTable golden = (par == 0 ? e->d_even : e->d_odd).at(k);
            DisplacementTable derived = comp.output_table();
            double de = golden.labels == derived.labels ? max_abs_diff(golden.D, derived.D) : INFINITY;
            if (de > 1e-9) bad += " D(g=" + acc::fmt(g) + (par ? ",odd)" : ",even)");
            d_err = std::max(d_err, de);
        }
    }
    r.pass = s_err <= 1e-9 && f_err <= 1e-6 && d_err <= 1e-9 && bad.empty();
    r.detail = "max |S_hat - S| = " + acc::fmt(s_err) + ", max noise-factor err " + acc::fmt(f_err) +
               ", golden D err " + acc::fmt(d_err) + (bad.empty() ? "" : ", golden mismatch:" + bad);
    return r;
}

inline CriterionResult criterion_encoder(const AcceptanceOptions &o, PhysicalityLedger &led) {
    CriterionResult r = named(6, "encoder circuit");
    GoldenSet gs = acc::goldens(o);
    CzNoiseTable table = gs.cz_table();
    ClusterState c = acc::cluster(1.0);
    const int N = c.params.N, K = c.params.K;
    const int k0 = first_placement(1, N);
    Circuit circ = encoder_circuit(k0, N);
    ExpectedTransfer ex = compose_circuit(circ, N, &table);
    BasisSchedule s = compile_schedule(circ, N, K);
    MeasurementPlan plan = make_plan(c, s);
    Compensation comp = derive_compensation(c, s, plan);
    JointStatistics st = evaluate(c, s, plan, comp);
    TransferReport t = tomography_from_statistics(st, N);
    acc::add_stats(led, "encoder", st);
    const double unit = std::exp(-2.0) * kV0;
    double s_err = max_abs_diff(t.S_hat, ex.S);
    double n_err = 0.0;
    for (int i = 0; i < 6; ++i) n_err = std::max(n_err, std::abs(t.noise(i) - ex.noise_factors[i] * unit));
    DisplacementTable golden = gs.encoder.d.at(k0), derived = comp.output_table();
    double d_err = golden.labels == derived.labels ? max_abs_diff(golden.D, derived.D) : INFINITY;
    double f_err = 0.0;
    for (int i = 0; i < 6; ++i) f_err = std::max(f_err, std::abs(gs.encoder.factors[i] - ex.noise_factors[i]));
    r.pass = s_err <= 1e-9 && n_err <= 1e-9 && d_err <= 1e-9 && f_err <= 1e-9;
    std::ostringstream os;
    os << "gates " << circ.gates.size() << ", max |S_hat - S| = " << acc::fmt(s_err) << ", noise err "
       << acc::fmt(n_err) << ", golden D err " << acc::fmt(d_err) << ", golden factor err " << acc::fmt(f_err)
       << ", factors";
    for (double f : ex.noise_factors) os << " " << acc::fmt(f);
    r.detail = os.str();
    return r;
}

inline CriterionResult criterion_mc_consistency(const AcceptanceOptions &o, PhysicalityLedger &led) {
    CriterionResult r = named(7, "MC/deterministic consistency");
    // Smallest cluster length that holds the CZ neighbourhood at N = 12.
    const int N = 12, K = 78;
    const long shots = 100000;
    ClusterState c = acc::cluster(1.0, K, N);
    std::vector<GateSpec> gates = {GateSpec::rotation(0.7, first_placement(0, N)),
                                   GateSpec::shear(0.5, first_placement(1, N)),
                                   GateSpec::squeeze(0.3, first_placement(0, N)),
                                   GateSpec::identity(first_placement(1, N)), GateSpec::cz(1.0, first_placement(0, N))};
    double zmax = 0.0;
    int checks = 0, over = 0;
    std::string worst;
    auto z = [&](double mc, double det, double se, const std::string &what) {
        double v = std::abs(mc - det) / se;
        ++checks;
        if (v > 3.0) ++over;
        if (v > zmax) {
            zmax = v;
            worst = what;
        }
    };
    int gi = 0;
    for (const GateSpec &g : gates) {
        Circuit circ{{g}};
        JointStatistics st = run_deterministic(c, compile_schedule(circ, N, K));
        TransferReport det = tomography_from_statistics(st, N);
        SampledTomography mc = tomography_sampled(c, circ, run_seed(o.seed, 100 + gi++), shots, o.workers);
        const int m = 2 * mc.n;
        Mat det_or = st.out_ref();
        Mat det_cov = st.out_cov();
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) {
                z(mc.S_hat(a, b), det.S_hat(a, b), mc.S_se(a, b), g.str() + " S");
                z(mc.out_ref(a, b), det_or(a, b), mc.out_ref_se(a, b), g.str() + " out/ref");
            }
            z(mc.out_var(a), det_cov(a, a), mc.out_var_se(a), g.str() + " out var");
            z(mc.in_var(a), st.input_cov(a, a), mc.in_var_se(a), g.str() + " in var");
        }
        for (int j = 0; j < mc.n; ++j) z(mc.eps[j], det.eps[j], mc.eps_se[j], g.str() + " eps");
        acc::add_stats(led, g.str() + " (mc reference)", st);
    }
    r.pass = over == 0;
    r.detail = std::to_string(checks) + " comparisons at 1e5 shots, " + std::to_string(over) +
               " beyond 3 SE, max |z| = " + acc::fmt(zmax) + " (" + worst + ")";
    return r;
}

inline CriterionResult criterion_displacement(const AcceptanceOptions &o, PhysicalityLedger &) {
    CriterionResult r = named(8, "displacement regression");
    const int N = 12, K = 72;
    const long shots = 100000;
    ClusterState c = acc::cluster(1.0, K, N);
    std::vector<GateSpec> gates = {GateSpec::rotation(0.7, first_placement(0, N)),
                                   GateSpec::shear(0.5, first_placement(1, N))};
    double zmax = 0.0;
    int checks = 0, over = 0;
    int gi = 0;
    for (const GateSpec &g : gates) {
        Circuit circ{{g}};
        BasisSchedule s0 = compile_schedule(circ, N, K);
        ClusterState cal = calibration_cluster(c, s0.inputs, 10.0);
        DisplacementTable an = displacement_matrix_single(g, N);
        for (int row : {0, 1}) {
            SampledRun run = run_sampled(cal, compile_schedule(circ, N, K, {row == 1, false}),
                                         run_seed(o.seed, 200 + 2 * gi + row), shots, o.workers);
            CalibrationResult res = calibrate_displacement(run, 0);
            for (int q = 0; q < an.D.cols(); ++q) {
                double se = 0.0;
                double est = res.at(an.labels[q], &se);
                double v = std::abs(est - an.D(row, q)) / se;
                zmax = std::max(zmax, v);
                ++checks;
                if (v > 3.0) ++over;
            }
        }
        ++gi;
    }
    r.pass = over == 0;
    r.detail = std::to_string(checks) + " analytic entries, " + std::to_string(over) + " beyond 3 SE, max |z| = " +
               acc::fmt(zmax);
    return r;
}

inline CriterionResult criterion_opo(const AcceptanceOptions &, PhysicalityLedger &led) {
    CriterionResult r = named(9, "OPO model");
    OpoParams base;
    double vac_err = 0.0;
    for (double pump : {0.0, 0.3, 0.9}) {
        OpoParams p = base;
        p.pump = pump;
        if (pump == 0.0) {
            auto v = mode_variances(p);
            vac_err = std::max({vac_err, std::abs(v.var_x - kV0), std::abs(v.var_p - kV0)});
        }
        p.eta = 0.0;
        auto v = mode_variances(p);
        vac_err = std::max({vac_err, std::abs(v.var_x - kV0), std::abs(v.var_p - kV0)});
    }
    double min_product = INFINITY;
    for (int i = 0; i < 20; ++i)
        for (double eta : {0.2, 0.4, 0.6, 0.8, 1.0}) {
            OpoParams p = base;
            p.pump = 0.95 * i / 19.0;
            p.eta = eta;
            auto v = mode_variances(p);
            min_product = std::min(min_product, v.var_x * v.var_p / (kV0 * kV0));
            Mat cov = Mat::Zero(2, 2);
            cov(0, 0) = v.var_x;
            cov(1, 1) = v.var_p;
            led.add("OPO mode pump=" + acc::fmt(p.pump) + " eta=" + acc::fmt(eta), cov);
        }
    double pump = find_pump_for_squeezing(-4.4, base);
    OpoParams p = base;
    p.pump = pump;
    double db = to_db(temporal_mode_variance(true, p));
    OpoParams wide = p;
    wide.gamma = 2 * kPi * 100e6;
    double vp_nominal = temporal_mode_variance(true, p), vp_wide = temporal_mode_variance(true, wide);
    bool bisect_ok = pump > 0.0 && pump < 1.0 && std::abs(db + 4.4) <= 1e-6;
    r.pass = vac_err <= 1e-10 && min_product >= 1.0 - 1e-9 && bisect_ok && vp_wide <= vp_nominal;
    r.detail = "vacuum err " + acc::fmt(vac_err) + ", min var_x var_p / V0^2 = " + acc::fmt(min_product) +
               ", pump(-4.4 dB) = " + acc::fmt(pump) + ", var_p 100 MHz " + acc::fmt(to_db(vp_wide)) + " dB vs " +
               acc::fmt(to_db(vp_nominal)) + " dB";
    return r;
}

inline CriterionResult criterion_physicality(const PhysicalityLedger &led) {
    CriterionResult r = named(10, "physicality sweep");
    auto s = led.evaluate();
    r.pass = s.count > 0 && s.min_nu >= kV0 - 1e-9;
    r.detail = std::to_string(s.count) + " covariances, min symplectic eigenvalue " + acc::fmt(s.min_nu) +
               (s.worst.empty() ? "" : " (" + s.worst + ")");
    return r;
}

inline CriterionResult criterion_reproducibility(const AcceptanceOptions &o) {
    CriterionResult r = named(11, "reproducibility");
    ConfigMap m = {{"experiment", "tomography-single"}, {"mode", "mc"},  {"N", "12"},
                   {"K", "72"},                         {"gate", "R"},   {"values", "0.7"},
                   {"wires", "0,1"},                    {"shots", "20000"}, {"seed", std::to_string(o.seed)}};
    std::vector<std::map<std::string, std::string>> runs;
    int idx = 0;
    for (int workers : {1, 1, 8}) {
        ConfigMap mm = m;
        mm["workers"] = std::to_string(workers);
        mm["out"] = (o.scratch / ("repro" + std::to_string(idx++))).string();
        std::filesystem::remove_all(mm["out"]);
        run_experiment(make_config(mm));
        std::map<std::string, std::string> csvs;
        for (const auto &e : std::filesystem::directory_iterator(mm["out"]))
            if (e.path().extension() == ".csv") csvs[e.path().filename().string()] = read_file(e.path());
        runs.push_back(csvs);
    }
    bool same = !runs[0].empty() && runs[0] == runs[1] && runs[0] == runs[2];
    r.pass = same;
    r.detail = std::to_string(runs[0].size()) + " CSV file(s); repeat run " +
               (runs[0] == runs[1] ? "identical" : "differs") + ", 1 vs 8 workers " +
               (runs[0] == runs[2] ? "identical" : "differs");
    return r;
}

/// Runs the suite, printing one line per criterion through `sink`.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &o,
                                                   const std::function<void(const CriterionResult &)> &sink) {
    PhysicalityLedger led;
    std::vector<CriterionResult> out;
    auto timed = [&](auto fn, double limit) {
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = fn();
        } catch (const std::exception &e) {
            r.pass = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (limit > 0 && r.seconds > limit) {
            r.pass = false;
            r.detail += ", runtime over " + acc::fmt(limit) + " s";
        }
        out.push_back(r);
        sink(r);
    };
    auto skip = [&](int id, const char *name) {
        CriterionResult r = named(id, name);
        r.skipped = true;
        r.detail = "not part of the quick subset";
        out.push_back(r);
        sink(r);
    };
    auto with_id = [](int id, const char *name, auto fn) {
        return [=]() {
            CriterionResult r = named(id, name);
            try {
                r = fn();
            } catch (const std::exception &e) {
                r.pass = false;
                r.detail = std::string("error: ") + e.what();
            }
            r.id = id;
            r.name = name;
            return r;
        };
    };
    timed(with_id(1, "nullifier closed forms", [&] { return criterion_nullifiers(o, led); }), 10.0);
    timed(with_id(2, "wire projection nullifier 4V0e^-2r", [&] { return criterion_wire_projection(o, led); }), 0);
    timed(with_id(3, "single-mode tomography round-trip", [&] { return criterion_single_tomography(o, led); }), 60.0);
    timed(with_id(4, "single-mode gate-noise law", [&] { return criterion_noise_law(o, led); }), 0);
    timed(with_id(5, "CZ tomography", [&] { return criterion_cz(o, led); }), 0);
    timed(with_id(6, "encoder circuit", [&] { return criterion_encoder(o, led); }), 120.0);
    if (o.quick) {
        skip(7, "MC/deterministic consistency");
        skip(8, "displacement regression");
    } else {
        timed(with_id(7, "MC/deterministic consistency", [&] { return criterion_mc_consistency(o, led); }), 600.0);
        timed(with_id(8, "displacement regression", [&] { return criterion_displacement(o, led); }), 0);
    }
    timed(with_id(9, "OPO model", [&] { return criterion_opo(o, led); }), 0);
    timed(with_id(10, "physicality sweep", [&] { return criterion_physicality(led); }), 0);
    if (o.quick)
        skip(11, "reproducibility");
    else
        timed(with_id(11, "reproducibility", [&] { return criterion_reproducibility(o); }), 0);
    return out;
}

inline bool all_pass(const std::vector<CriterionResult> &rs) {
    for (const auto &r : rs)
        if (!r.pass && !r.skipped) return false;
    return true;
}

}  // namespace cvmbqc

#endif  // CVMBQC_ACCEPTANCE_HPP
