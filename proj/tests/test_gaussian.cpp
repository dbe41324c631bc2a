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

#include <random>

#include "cvmbqc/gaussian.hpp"

using namespace cvmbqc;

namespace {

/// Two-mode squeezed vacuum covariance in xx..pp ordering.
Mat tmsv(double r) {
    const double c = kV0 * std::cosh(2 * r), s = kV0 * std::sinh(2 * r);
    Mat m(4, 4);
    m << c, s, 0, 0, s, c, 0, 0, 0, 0, c, -s, 0, 0, -s, c;
    return m;
}

Mat random_symplectic(int n, std::mt19937_64 &g, int words = 20) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> mode(0, n - 1), kind(0, 3);
    Mat s = Mat::Identity(2 * n, 2 * n);
    for (int w = 0; w < words; ++w) {
        int i = mode(g), j = mode(g);
        Primitive p;
        switch (kind(g)) {
            case 0: p = Primitive::rotation(3 * u(g), i); break;
            case 1: p = Primitive::squeeze(u(g), i); break;
            case 2: p = Primitive::shear(2 * u(g), i); break;
            default: p = i == j ? Primitive::identity() : Primitive::beamsplitter(i, j); break;
        }
        s = primitive_symplectic(p, n) * s;
    }
    return s;
}

}  // namespace

TEST(Vacuum, SingleModeCovariance) {
    GaussianState s = vacuum_state(1);
    Mat expect(2, 2);
    expect << 0.5, 0, 0, 0.5;
    EXPECT_LE(max_abs_diff(s.cov, expect), 0.0);
}

TEST(Vacuum, TwoModeSymplecticSpectrum) {
    auto nu = symplectic_eigenvalues(vacuum_state(2).cov);
    ASSERT_EQ(nu.size(), 2u);
    for (double v : nu) EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(Vacuum, ThreeModeMeanIsZero) {
    GaussianState s = vacuum_state(3);
    EXPECT_EQ(s.mean.size(), 6);
    EXPECT_EQ(s.mean.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Vacuum, ZeroModesRejected) {
    try {
        vacuum_state(0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
}

TEST(Primitive, QuarterRotation) {
    Mat r = primitive_symplectic(Primitive::rotation(kPi / 2, 0), 1);
    Mat expect(2, 2);
    expect << 0, 1, -1, 0;
    EXPECT_LE(max_abs_diff(r, expect), 1e-15);
}

TEST(Primitive, ZeroSqueezeIsIdentity) {
    EXPECT_LE(max_abs_diff(primitive_symplectic(Primitive::squeeze(0.0, 1), 3), Mat::Identity(6, 6)), 0.0);
}

TEST(Primitive, CoincidentBeamsplitterModesRejected) {
    try {
        primitive_symplectic(Primitive::beamsplitter(1, 1), 2);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
}

TEST(Primitive, BeamsplitterPortsRecombineToInputs) {
    // Both ports read at the same angle; (m+ + m-)/sqrt2 and (m+ - m-)/sqrt2
    // are the pre-splitter quadratures of the two inputs.
    Mat bs = primitive_symplectic(Primitive::beamsplitter(0, 1), 2);
    const double h = 1 / std::sqrt(2.0);
    for (double th : {0.0, 0.4, kPi / 4, 1.3}) {
        RowVec minus = std::cos(th) * bs.row(0) + std::sin(th) * bs.row(2);
        RowVec plus = std::cos(th) * bs.row(1) + std::sin(th) * bs.row(3);
        RowVec a = RowVec::Zero(4), b = RowVec::Zero(4);
        a << std::cos(th), 0, std::sin(th), 0;
        b << 0, std::cos(th), 0, std::sin(th);
        EXPECT_LE((h * (plus + minus) - a).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_LE((h * (plus - minus) - b).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(Apply, SqueezedVacuumVariances) {
    // positive r squeezes x
    GaussianState s = apply_symplectic(vacuum_state(1), primitive_symplectic(Primitive::squeeze(1.0, 0), 1));
    EXPECT_NEAR(s.cov(0, 0), 0.5 * std::exp(-2.0), 1e-15);
    EXPECT_NEAR(s.cov(0, 0), 0.06767, 1e-5);
    EXPECT_NEAR(s.cov(1, 1), 0.5 * std::exp(2.0), 1e-12);
}

TEST(Apply, IdentityLeavesStateUnchanged) {
    GaussianState s = vacuum_state(2);
    s.cov = tmsv(0.8);
    s.mean << 0.1, -0.2, 0.3, 0.4;
    GaussianState t = apply_symplectic(s, primitive_symplectic(Primitive::identity(), 2));
    EXPECT_LE(max_abs_diff(t.cov, s.cov), 1e-12);
    EXPECT_LE((t.mean - s.mean).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Apply, SqueezedPairThroughBeamsplitterMatchesDenseProduct) {
    const double r = 0.9;
    GaussianState s = vacuum_state(2);
    s.cov = Mat::Zero(4, 4);
    s.cov.diagonal() << kV0 * std::exp(2 * r), kV0 * std::exp(2 * r), kV0 * std::exp(-2 * r), kV0 * std::exp(-2 * r);
    GaussianState t = apply_symplectic(s, primitive_symplectic(Primitive::beamsplitter(0, 1), 2));
    const double h = 1 / std::sqrt(2.0);
    Mat dense(4, 4);
    dense << h, -h, 0, 0, h, h, 0, 0, 0, 0, h, -h, 0, 0, h, h;
    Mat oracle = dense * s.cov * dense.transpose();
    EXPECT_LE(max_abs_diff(t.cov, oracle), 1e-12);
    RowVec dx(4), sp(4);
    dx << 1, -1, 0, 0;
    sp << 0, 0, 1, 1;
    EXPECT_NEAR((dx * t.cov * dx.transpose())(0), 2 * kV0 * std::exp(2 * r), 1e-12);
    EXPECT_NEAR((sp * t.cov * sp.transpose())(0), 2 * kV0 * std::exp(-2 * r), 1e-12);
}

TEST(Apply, DimensionMismatchRejected) {
    try {
        apply_symplectic(vacuum_state(2), Mat::Identity(2, 2));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
}

TEST(Homodyne, VacuumOutcomeVariance) {
    HomodyneResult h = homodyne(vacuum_state(1), 0, 0.0);
    EXPECT_DOUBLE_EQ(h.outcome_variance, 0.5);
    EXPECT_FALSE(h.outcome.has_value());
}

TEST(Homodyne, TwoModeSqueezedPosteriorMatchesSchurComplement) {
    const double r = 0.7;
    GaussianState s = vacuum_state(2);
    s.cov = tmsv(r);
    HomodyneResult h = homodyne(s, 0, 0.0);
    ASSERT_EQ(h.posterior.n_modes(), 1);
    const double c = kV0 * std::cosh(2 * r), sh = kV0 * std::sinh(2 * r);
    EXPECT_NEAR(h.posterior.cov(0, 0), c - sh * sh / c, 1e-12);
    EXPECT_LT(h.posterior.cov(0, 0), 0.5);
    EXPECT_NEAR(h.posterior.cov(1, 1), c, 1e-12);
}

TEST(Homodyne, PosteriorCovarianceIndependentOfOutcome) {
    GaussianState s = vacuum_state(3);
    std::mt19937_64 g(3);
    Mat S = random_symplectic(3, g);
    s = apply_symplectic(s, S);
    HomodyneResult a = homodyne_with_outcome(s, 1, 0.3, -2.5);
    HomodyneResult b = homodyne_with_outcome(s, 1, 0.3, 4.0);
    EXPECT_TRUE((a.posterior.cov.array() == b.posterior.cov.array()).all());
    EXPECT_GT((a.posterior.mean - b.posterior.mean).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Homodyne, DegenerateVarianceRejected) {
    GaussianState s = vacuum_state(1);
    s.cov(0, 0) = 1e-15;
    try {
        homodyne(s, 0, 0.0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateMeasurement);
    }
}

TEST(Homodyne, PosteriorIsPhysical) {
    std::mt19937_64 g(11);
    for (int t = 0; t < 20; ++t) {
        GaussianState s = apply_symplectic(vacuum_state(3), random_symplectic(3, g));
        HomodyneResult h = homodyne(s, t % 3, 0.1 * t);
        EXPECT_TRUE(check_physical(h.posterior).physical);
        EXPECT_EQ(h.posterior.n_modes(), 2);
    }
}

TEST(Homodyne, SampledConditioningMatchesPosteriorCovariance) {
    std::mt19937_64 g(5);
    GaussianState s = apply_symplectic(vacuum_state(3), random_symplectic(3, g, 12));
    const int mode = 1;
    const double th = 0.6;
    HomodyneResult det = homodyne(s, mode, th);
    // Joint samples of the full state; residual of the remaining quadratures
    // about their conditional mean has the posterior covariance.
    Eigen::LLT<Mat> llt(s.cov);
    Mat L = llt.matrixL();
    const long shots = 100000;
    const int m = 4;
    Mat res(shots, m);
    std::vector<int> keep = {0, 2, 3, 5};
    for (long i = 0; i < shots; ++i) {
        ShotRng rng(2024, i);
        Vec z(6);
        for (int a = 0; a < 6; ++a) z(a) = rng.normal();
        Vec v = L * z;
        double outcome = std::cos(th) * v(mode) + std::sin(th) * v(3 + mode);
        Vec mu = homodyne_with_outcome(s, mode, th, outcome).posterior.mean;
        for (int a = 0; a < m; ++a) res(i, a) = v(keep[a]) - mu(a);
    }
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            Vec prod = res.col(a).cwiseProduct(res.col(b));
            double mean = prod.mean();
            double se = std::sqrt((prod.array() - mean).square().sum() / (shots - 1) / shots);
            EXPECT_LE(std::abs(mean - det.posterior.cov(a, b)), 3 * se) << a << "," << b;
        }
}

TEST(Physicality, PureSqueezedStatesSitAtVacuum) {
    for (double r : {0.0, 0.3, 1.0, 2.5}) {
        GaussianState s = apply_symplectic(vacuum_state(1), primitive_symplectic(Primitive::squeeze(r, 0), 1));
        auto rep = check_physical(s);
        EXPECT_NEAR(rep.min_eigenvalue, 0.5, 1e-9);
        EXPECT_TRUE(rep.physical);
    }
}

TEST(Physicality, LossySqueezedStateAboveVacuum) {
    const double eta = 0.777;
    GaussianState s = apply_symplectic(vacuum_state(1), primitive_symplectic(Primitive::squeeze(1.0, 0), 1));
    Mat lossy = eta * s.cov + (1 - eta) * kV0 * Mat::Identity(2, 2);
    double oracle = std::sqrt(lossy.determinant());
    auto rep = check_physical(lossy);
    EXPECT_NEAR(rep.min_eigenvalue, oracle, 1e-12);
    EXPECT_GT(rep.min_eigenvalue, 0.5);
}

TEST(Physicality, SubVacuumFlagged) {
    Mat c = 0.4 * Mat::Identity(2, 2);
    EXPECT_FALSE(check_physical(c).physical);
}

TEST(Physicality, NonSymmetricCovarianceRejected) {
    Mat c = kV0 * Mat::Identity(2, 2);
    c(0, 1) = 0.1;
    try {
        check_physical(c);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InternalInvariant);
    }
}

TEST(Property, RandomPrimitiveWordsAreSymplectic) {
    std::mt19937_64 g(42);
    for (int t = 0; t < 50; ++t) EXPECT_TRUE(is_symplectic(random_symplectic(4, g), 1e-9));
}

TEST(Property, SymplecticEvolutionPreservesSpectrum) {
    std::mt19937_64 g(8);
    GaussianState s = vacuum_state(3);
    s.cov.diagonal() << 0.7, 2.0, 0.5, 0.9, 0.6, 0.5;
    auto before = symplectic_eigenvalues(s.cov);
    for (int t = 0; t < 20; ++t) {
        auto after = symplectic_eigenvalues(apply_symplectic(s, random_symplectic(3, g)).cov);
        for (int i = 0; i < 3; ++i) EXPECT_NEAR(after[i], before[i], 1e-9);
    }
}
