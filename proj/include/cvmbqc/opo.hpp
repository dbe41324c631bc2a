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

#ifndef CVMBQC_OPO_HPP
#define CVMBQC_OPO_HPP

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cluster.hpp"
#include "core.hpp"
#include "executor.hpp"
#include "gates.hpp"
#include "rng.hpp"
#include "tomography.hpp"

namespace cvmbqc {

/// Below-threshold OPO source read out in finite temporal modes.
struct OpoParams {
    double eta = 0.777;
    double gamma = 2 * kPi * 7.7e6;
    double kappa = 2 * kPi * 2.0e6;
    double tau = 247e-9;
    double pump = 0.0;
    double phase_jitter_deg = 0.0;

    void validate() const {
        require(eta >= 0.0 && eta <= 1.0, ErrorKind::InvalidArgument, "eta must lie in [0, 1]");
        require(gamma > 0.0 && kappa >= 0.0 && tau > 0.0, ErrorKind::InvalidArgument, "gamma, tau > 0 and kappa >= 0");
        require(pump >= 0.0 && pump < 1.0, ErrorKind::InvalidArgument, "pump must lie in [0, 1)");
        require(phase_jitter_deg >= 0.0, ErrorKind::InvalidArgument, "phase jitter must be >= 0");
    }
    double epsilon() const { return gamma * std::sqrt(pump); }
};

struct QuadratureVariancePair {
    double var_x = kV0;
    double var_p = kV0;
};

inline constexpr double kQuadratureRelTol = 1e-8;
inline constexpr double kThresholdGuard = 1e-9;

namespace detail {

/// Adaptive Gauss-Kronrod with an explicit convergence check.
template <class F>
double integrate(F f, double a, double b, double tol, const char *what) {
    double err = 0.0, l1 = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol, &err, &l1);
    if (!(std::isfinite(v) && err <= 100 * tol * std::max(l1, 1e-300))) {
        std::ostringstream os;
        os << what << ": value " << v << ", error estimate " << err << ", L1 " << l1;
        throw Error(ErrorKind::IntegrationFailure, os.str());
    }
    return v;
}

/// 1/N^2 of the dimensionless mode function u exp(-(kappa tau)^2 u^2) on |u| < 1/2.
inline double mode_norm_u(const OpoParams &p) {
    const double w = p.kappa * p.tau;
    double i2 = integrate([w](double u) { return u * u * std::exp(-2 * w * w * u * u); }, -0.5, 0.5, 1e-13,
                          "mode normalisation");
    return 1.0 / std::sqrt(i2);
}

}  // namespace detail

/// f_k(t) = N (t - k tau) exp(-kappa^2 (t - k tau)^2) on |t - k tau| < tau/2,
/// normalised so that the integral of f_k^2 is 1.
inline double mode_function(int k, double t, const OpoParams &p) {
    const double d = t - k * p.tau;
    if (std::abs(d) >= p.tau / 2) return 0.0;
    const double n = detail::mode_norm_u(p) / std::pow(p.tau, 1.5);
    return n * d * std::exp(-p.kappa * p.kappa * d * d);
}

/// Non-delta part of the quadrature auto-covariance at lag dt.  The delta
/// part V0 delta(dt) integrates to V0 for any normalised mode.
inline double autocovariance(bool p_quadrature, double dt, const OpoParams &p) {
    p.validate();
    const double g = p.gamma, e = p.epsilon();
    require((g - e) / g > kThresholdGuard, ErrorKind::InvalidArgument, "pump too close to threshold");
    if (p_quadrature) return -p.eta * g * e / (g + e) * std::exp(-(g + e) * std::abs(dt));
    return p.eta * g * e / (g - e) * std::exp(-(g - e) * std::abs(dt));
}

/// Mode variance V0 + double integral of f f C over the support, evaluated
/// in units of tau on the triangle v < u and doubled.
inline double temporal_mode_variance(bool p_quadrature, const OpoParams &p, double rel_tol = kQuadratureRelTol) {
    p.validate();
    if (p.pump == 0.0 || p.eta == 0.0) return kV0;
    const double g = p.gamma * p.tau, e = p.epsilon() * p.tau;
    require((g - e) / g > kThresholdGuard, ErrorKind::InvalidArgument, "pump too close to threshold");
    const double rate = p_quadrature ? g + e : g - e;
    const double amp = p_quadrature ? -g * e / (g + e) : g * e / (g - e);
    const double w = p.kappa * p.tau;
    const double nrm = detail::mode_norm_u(p);
    auto f = [w, nrm](double u) { return nrm * u * std::exp(-w * w * u * u); };
    const double inner_tol = rel_tol * 1e-2;
    auto outer = [&](double u) {
        if (u <= -0.5) return 0.0;
        double in = detail::integrate([&](double v) { return f(v) * std::exp(-rate * (u - v)); }, -0.5, u, inner_tol,
                                      "inner mode integral");
        return f(u) * in;
    };
    double tri = detail::integrate(outer, -0.5, 0.5, rel_tol, "outer mode integral");
    return kV0 + p.eta * amp * 2.0 * tri;
}

inline QuadratureVariancePair mode_variances(const OpoParams &p, double rel_tol = kQuadratureRelTol) {
    return {temporal_mode_variance(false, p, rel_tol), temporal_mode_variance(true, p, rel_tol)};
}

/// Pump with var_p = from_db(target_db), by bisection on [0, 1).
inline double find_pump_for_squeezing(double target_db, OpoParams p, double tol = 1e-12) {
    p.validate();
    const double target = from_db(target_db);
    require(target < kV0, ErrorKind::InvalidArgument, "target must be below vacuum");
    double lo = 0.0, hi = 1.0 - 1e-6;
    p.pump = hi;
    require(temporal_mode_variance(true, p) < target, ErrorKind::InvalidArgument,
            "target squeezing not reachable below threshold");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        p.pump = mid;
        (temporal_mode_variance(true, p) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Monte-Carlo phase jitter applied to every scheduled measurement angle of a
/// full executor run.  Compensation is the nominal one.
struct JitterConfig {
    double sigma_rad = 0.0;
    int draws = 200;
    std::uint64_t seed = 1;
    int N = 12;
    int K = 72;
};

struct JitterNoise {
    Vec noise;  // per quadrature, absolute units
    Vec noise_se;
};

inline JitterNoise gate_noise_with_jitter(const QuadratureVariancePair &v, const GateSpec &gate,
                                          const JitterConfig &jc) {
    require(jc.draws >= 1, ErrorKind::InvalidArgument, "jitter draws must be >= 1");
    ClusterParams cp;
    cp.N = jc.N;
    cp.K = jc.K;
    cp.source_var = std::make_pair(v.var_x, v.var_p);
    cp.validate();
    ClusterState c = build_coiled_cluster(cp);
    BasisSchedule nominal = compile_schedule(Circuit{{gate}}, jc.N, jc.K);
    MeasurementPlan plan = make_plan(c, nominal);
    Compensation comp = derive_compensation(c, nominal, plan);
    JointStatistics acc;
    std::vector<Vec> per_draw;
    for (int d = 0; d < jc.draws; ++d) {
        BasisSchedule s = nominal;
        if (jc.sigma_rad > 0.0) {
            ShotRng rng(jc.seed, static_cast<std::uint64_t>(d));
            for (int k = 0; k < s.K; ++k)
                if (s.measured(k)) {
                    s.a[k].angle += jc.sigma_rad * rng.normal();
                    s.b[k].angle += jc.sigma_rad * rng.normal();
                }
        }
        JointStatistics st = evaluate(c, s, make_plan(c, s), comp);
        if (d == 0) {
            acc = st;
        } else {
            acc.cov += st.cov;
            acc.input_cov += st.input_cov;
            acc.input_ref += st.input_ref;
        }
        per_draw.push_back(st.out_cov().diagonal());
        if (jc.sigma_rad == 0.0) break;
    }
    const double m = static_cast<double>(per_draw.size());
    acc.cov /= m;
    acc.input_cov /= m;
    acc.input_ref /= m;
    TransferReport t = tomography_from_statistics(acc, jc.N);
    JitterNoise out;
    out.noise = t.noise;
    out.noise_se = Vec::Zero(t.noise.size());
    if (per_draw.size() > 1) {
        Vec mean = Vec::Zero(t.noise.size());
        for (const auto &x : per_draw) mean += x;
        mean /= m;
        for (const auto &x : per_draw) out.noise_se += (x - mean).cwiseAbs2();
        out.noise_se = (out.noise_se / (m - 1) / m).cwiseSqrt();
    }
    return out;
}

struct NoisePoint {
    double pump = 0.0;
    QuadratureVariancePair var;
    double gate_noise = 0.0;
    std::optional<double> gate_noise_jitter;
    std::optional<double> gate_noise_jitter_se;
};

/// Gate noise factor * var_p per pump value, plus the jittered executor
/// estimate (mean over quadratures) when phase_jitter_deg > 0.
inline std::vector<NoisePoint> gate_noise_vs_pump(const std::vector<double> &pumps, const OpoParams &params,
                                                  const GateSpec &gate, const JitterConfig &jitter = {}) {
    require(gate.kind != GateKind::CZ, ErrorKind::InvalidArgument, "noise sweep takes a single-mode gate");
    const double factor = expected_noise_factors(gate, jitter.N).front();
    std::vector<NoisePoint> out;
    for (double pump : pumps) {
        OpoParams p = params;
        p.pump = pump;
        p.validate();
        NoisePoint pt;
        pt.pump = pump;
        pt.var = mode_variances(p);
        pt.gate_noise = factor * pt.var.var_p;
        if (p.phase_jitter_deg > 0.0) {
            JitterConfig jc = jitter;
            jc.sigma_rad = p.phase_jitter_deg * kPi / 180.0;
            JitterNoise jn = gate_noise_with_jitter(pt.var, gate, jc);
            pt.gate_noise_jitter = jn.noise.mean();
            pt.gate_noise_jitter_se = jn.noise_se.mean();
        }
        out.push_back(pt);
    }
    return out;
}

inline std::string noise_curve_csv(const std::vector<NoisePoint> &pts) {
    std::ostringstream os;
    os.precision(17);
    os << "pump,var_x_dB,var_p_dB,gate_noise_dB,gate_noise_jitter_dB\n";
    for (const auto &p : pts) {
        os << p.pump << "," << to_db(p.var.var_x) << "," << to_db(p.var.var_p) << "," << to_db(p.gate_noise) << ",";
        if (p.gate_noise_jitter) os << to_db(*p.gate_noise_jitter);
        os << "\n";
    }
    return os.str();
}

}  // namespace cvmbqc

#endif  // CVMBQC_OPO_HPP
