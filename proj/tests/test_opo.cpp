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

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cvmbqc/opo.hpp"

using namespace cvmbqc;

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

OpoParams at_pump(double pump, double eta = 0.777) {
    OpoParams p;
    p.pump = pump;
    p.eta = eta;
    return p;
}

}  // namespace

TEST(ModeFunction, NormalisedOddAndCompact) {
    OpoParams p;
    for (int k : {0, 3}) {
        const double c = k * p.tau;
        double err = 0.0;
        double i2 = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double t) { return std::pow(mode_function(k, t, p), 2); }, c - p.tau / 2, c + p.tau / 2, 15, 1e-14, &err);
        EXPECT_NEAR(i2, 1.0, 1e-10);
        EXPECT_EQ(mode_function(k, c, p), 0.0);
        EXPECT_EQ(mode_function(k, c + p.tau / 2 + 1e-15, p), 0.0);
        EXPECT_EQ(mode_function(k, c - p.tau / 2 - 1e-15, p), 0.0);
        EXPECT_NE(mode_function(k, c + 0.49 * p.tau, p), 0.0);
        EXPECT_NEAR(mode_function(k, c + 0.2 * p.tau, p), -mode_function(k, c - 0.2 * p.tau, p), 1e-6);
    }
}

TEST(Autocovariance, HalfThresholdMomentumAtZeroLag) {
    OpoParams p = at_pump(0.25, 1.0);
    EXPECT_NEAR(p.epsilon(), p.gamma / 2, 1e-6);
    EXPECT_NEAR(autocovariance(true, 0.0, p) / p.gamma, -1.0 / 3.0, 1e-12);
    EXPECT_NEAR(autocovariance(false, 0.0, p) / p.gamma, 1.0, 1e-12);
}

TEST(Autocovariance, AntiSqueezedKernelDominates) {
    for (double pump : {0.01, 0.2, 0.5, 0.9})
        for (double dt : {0.0, 20e-9, 200e-9}) {
            OpoParams p = at_pump(pump);
            EXPECT_GE(std::abs(autocovariance(false, dt, p)), std::abs(autocovariance(true, dt, p)));
        }
    EXPECT_EQ(autocovariance(true, 1e-8, at_pump(0.0)), 0.0);
}

TEST(Autocovariance, ThresholdGuard) {
    EXPECT_EQ(kind_of([] { autocovariance(false, 0.0, at_pump(1.0 - 1e-13)); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { temporal_mode_variance(false, at_pump(1.0 - 1e-13)); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { at_pump(1.0).validate(); }), ErrorKind::InvalidArgument);
}

TEST(ModeVariance, VacuumLimits) {
    EXPECT_EQ(temporal_mode_variance(false, at_pump(0.0)), kV0);
    EXPECT_EQ(temporal_mode_variance(true, at_pump(0.0)), kV0);
    EXPECT_EQ(temporal_mode_variance(true, at_pump(0.6, 0.0)), kV0);
}

TEST(ModeVariance, PhysicalAndOrdered) {
    for (double eta : {0.3, 0.777, 1.0})
        for (double pump : {0.05, 0.25, 0.5, 0.75, 0.9}) {
            QuadratureVariancePair v = mode_variances(at_pump(pump, eta));
            EXPECT_GE(v.var_x * v.var_p, kV0 * kV0 - 1e-9) << eta << " " << pump;
            EXPECT_LE(v.var_p, kV0);
            EXPECT_GE(v.var_x, kV0);
        }
}

TEST(ModeVariance, ExcessScalesLinearlyWithEfficiency) {
    for (double pump : {0.1, 0.5, 0.85}) {
        QuadratureVariancePair one = mode_variances(at_pump(pump, 1.0));
        for (double eta : {0.2, 0.777}) {
            QuadratureVariancePair v = mode_variances(at_pump(pump, eta));
            EXPECT_NEAR(v.var_x - kV0, eta * (one.var_x - kV0), 1e-9);
            EXPECT_NEAR(v.var_p - kV0, eta * (one.var_p - kV0), 1e-9);
        }
    }
}

TEST(ModeVariance, WiderBandwidthSqueezesMore) {
    for (double pump : {0.2, 0.6}) {
        OpoParams narrow = at_pump(pump), wide = at_pump(pump);
        wide.gamma = 2 * kPi * 100e6;
        EXPECT_LE(temporal_mode_variance(true, wide), temporal_mode_variance(true, narrow));
    }
}

TEST(ModeVariance, ToleranceHalvingConverges) {
    for (double pump : {0.1, 0.5, 0.9})
        for (bool pq : {false, true}) {
            const double a = temporal_mode_variance(pq, at_pump(pump), kQuadratureRelTol);
            const double b = temporal_mode_variance(pq, at_pump(pump), kQuadratureRelTol / 2);
            EXPECT_LT(std::abs(a - b) / std::abs(b), 1e-7);
        }
}

TEST(OperatingPoint, BisectionHitsTarget) {
    OpoParams p;
    const double pump = find_pump_for_squeezing(-4.4, p);
    EXPECT_GT(pump, 0.0);
    EXPECT_LT(pump, 1.0);
    EXPECT_NEAR(pump, 0.275651, 1e-6);
    p.pump = pump;
    EXPECT_NEAR(temporal_mode_variance(true, p), from_db(-4.4), 1e-10);
    EXPECT_EQ(kind_of([] { find_pump_for_squeezing(1.0, OpoParams{}); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { find_pump_for_squeezing(-40.0, OpoParams{}); }), ErrorKind::InvalidArgument);
}

TEST(NoiseCurve, ZeroPumpIsSixDecibels) {
    auto pts = gate_noise_vs_pump({0.0}, OpoParams{}, GateSpec::rotation(0.0, 36));
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_DOUBLE_EQ(pts[0].gate_noise, 4 * kV0);
    EXPECT_NEAR(to_db(pts[0].gate_noise), 6.0206, 1e-4);
    EXPECT_FALSE(pts[0].gate_noise_jitter.has_value());
}

TEST(NoiseCurve, DecreasingWithoutJitter) {
    OpoParams p;
    p.eta = 1.0;
    p.kappa = 2 * kPi * 0.2e6;
    std::vector<double> grid;
    for (int i = 0; i <= 9; ++i) grid.push_back(0.1 * i);
    auto pts = gate_noise_vs_pump(grid, p, GateSpec::rotation(0.0, 36));
    for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_LT(pts[i].gate_noise, pts[i - 1].gate_noise) << grid[i];
}

TEST(NoiseCurve, RejectsTwoModeGate) {
    EXPECT_EQ(kind_of([] { gate_noise_vs_pump({0.1}, OpoParams{}, GateSpec::cz(1.0, 36)); }), ErrorKind::InvalidArgument);
}

TEST(NoiseCurve, CsvHeader) {
    auto pts = gate_noise_vs_pump({0.0, 0.3}, OpoParams{}, GateSpec::rotation(0.0, 36));
    std::string csv = noise_curve_csv(pts);
    EXPECT_EQ(csv.rfind("pump,var_x_dB,var_p_dB,gate_noise_dB,gate_noise_jitter_dB\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Jitter, ZeroJitterReproducesNoiseLaw) {
    OpoParams p = at_pump(0.4);
    QuadratureVariancePair v = mode_variances(p);
    JitterConfig jc;
    JitterNoise n = gate_noise_with_jitter(v, GateSpec::rotation(0.3, 36), jc);
    for (int q = 0; q < 2; ++q) EXPECT_NEAR(n.noise(q), 4 * v.var_p, 1e-9);
}

TEST(Jitter, PhaseNoiseProducesMinimumThenUpturn) {
    OpoParams p;
    p.phase_jitter_deg = 4.0;
    JitterConfig jc;
    jc.draws = 100;
    auto pts = gate_noise_vs_pump({0.2, 0.6, 0.97}, p, GateSpec::rotation(0.0, 36), jc);
    ASSERT_TRUE(pts[1].gate_noise_jitter && pts[0].gate_noise_jitter && pts[2].gate_noise_jitter);
    EXPECT_LT(*pts[1].gate_noise_jitter, *pts[0].gate_noise_jitter);
    EXPECT_GT(*pts[2].gate_noise_jitter, *pts[1].gate_noise_jitter);
    // jitter only adds noise
    for (const auto &pt : pts) EXPECT_GT(*pt.gate_noise_jitter, pt.gate_noise);
}
