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

#ifndef CVMBQC_GAUSSIAN_HPP
#define CVMBQC_GAUSSIAN_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "core.hpp"
#include "rng.hpp"

namespace cvmbqc {

/// Spatial tag ('A' or 'B' for cluster modes) plus temporal index.
struct ModeLabel {
    char spatial = 'A';
    int k = 0;
    bool operator==(const ModeLabel &) const = default;
    auto operator<=>(const ModeLabel &) const = default;
    std::string str() const { return std::string(1, spatial) + "," + std::to_string(k); }
};

/// Gaussian state in xx..pp ordering.
struct GaussianState {
    Vec mean;
    Mat cov;
    std::vector<ModeLabel> labels;

    int n_modes() const { return static_cast<int>(labels.size()); }

    void symmetrize() { cov = 0.5 * (cov + cov.transpose()).eval(); }

    void validate() const {
        int n = n_modes();
        require(n >= 1, ErrorKind::InvalidArgument, "state needs at least one mode");
        require(mean.size() == 2 * n && cov.rows() == 2 * n && cov.cols() == 2 * n,
                ErrorKind::InvalidArgument, "state dimensions inconsistent with labels");
        std::set<ModeLabel> seen(labels.begin(), labels.end());
        require(static_cast<int>(seen.size()) == n, ErrorKind::InvalidArgument, "duplicate mode labels");
    }

    int index_of(const ModeLabel &l) const {
        auto it = std::find(labels.begin(), labels.end(), l);
        require(it != labels.end(), ErrorKind::InvalidArgument, "unknown mode " + l.str());
        return static_cast<int>(it - labels.begin());
    }
};

inline GaussianState vacuum_state(int n) {
    require(n >= 1, ErrorKind::InvalidArgument, "vacuum_state needs n >= 1");
    GaussianState s;
    s.mean = Vec::Zero(2 * n);
    s.cov = kV0 * Mat::Identity(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) s.labels.push_back({'M', i});
    return s;
}

enum class PrimitiveKind { Identity, Rotation, Squeeze, Shear, BeamSplitter };

struct Primitive {
    PrimitiveKind kind = PrimitiveKind::Identity;
    double param = 0.0;
    int i = 0;
    int j = -1;

    static Primitive identity() { return {}; }
    static Primitive rotation(double theta, int mode) { return {PrimitiveKind::Rotation, theta, mode, -1}; }
    static Primitive squeeze(double r, int mode) { return {PrimitiveKind::Squeeze, r, mode, -1}; }
    static Primitive shear(double sigma, int mode) { return {PrimitiveKind::Shear, sigma, mode, -1}; }
    /// Arrow from mode i to mode j: x_i -> (x_i - x_j)/sqrt2, x_j -> (x_i + x_j)/sqrt2.
    static Primitive beamsplitter(int from, int to) { return {PrimitiveKind::BeamSplitter, 0.0, from, to}; }
};

inline Mat primitive_symplectic(const Primitive &p, int n) {
    require(n >= 1, ErrorKind::InvalidArgument, "mode count must be positive");
    require(std::isfinite(p.param), ErrorKind::InvalidArgument, "primitive parameter not finite");
    Mat s = Mat::Identity(2 * n, 2 * n);
    if (p.kind == PrimitiveKind::Identity) return s;
    require(p.i >= 0 && p.i < n, ErrorKind::InvalidArgument, "target mode out of range");
    auto put = [&](int m, const Mat &b) {
        s(m, m) = b(0, 0);
        s(m, n + m) = b(0, 1);
        s(n + m, m) = b(1, 0);
        s(n + m, n + m) = b(1, 1);
    };
    switch (p.kind) {
        case PrimitiveKind::Rotation: put(p.i, rot2(p.param)); break;
        case PrimitiveKind::Squeeze: put(p.i, squeeze2(p.param)); break;
        case PrimitiveKind::Shear: put(p.i, shear2(p.param)); break;
        case PrimitiveKind::BeamSplitter: {
            require(p.j >= 0 && p.j < n, ErrorKind::InvalidArgument, "target mode out of range");
            require(p.i != p.j, ErrorKind::InvalidArgument, "beamsplitter modes coincide");
            const double h = 1.0 / std::sqrt(2.0);
            for (int off : {0, n}) {
                int a = off + p.i, b = off + p.j;
                s(a, a) = h;
                s(a, b) = -h;
                s(b, a) = h;
                s(b, b) = h;
            }
            break;
        }
        case PrimitiveKind::Identity: break;
    }
    return s;
}

inline GaussianState apply_symplectic(const GaussianState &state, const Mat &s) {
    require(s.rows() == 2 * state.n_modes() && s.cols() == s.rows(), ErrorKind::InvalidArgument,
            "symplectic dimension does not match state");
    GaussianState out = state;
    out.mean = s * state.mean;
    out.cov = s * state.cov * s.transpose();
    out.symmetrize();
    return out;
}

struct HomodyneResult {
    std::optional<double> outcome;
    double outcome_mean = 0.0;
    double outcome_variance = 0.0;
    GaussianState posterior;
};

inline constexpr double kDegenerateVariance = 1e-14;

namespace detail {

inline HomodyneResult homodyne_impl(const GaussianState &state, int mode, double theta, ShotRng *rng,
                                    std::optional<double> forced) {
    const int n = state.n_modes();
    require(mode >= 0 && mode < n, ErrorKind::InvalidArgument, "homodyne mode out of range");
    Vec c = Vec::Zero(2 * n);
    c(mode) = std::cos(theta);
    c(n + mode) = std::sin(theta);
    HomodyneResult res;
    Vec sc = state.cov * c;
    res.outcome_variance = c.dot(sc);
    res.outcome_mean = c.dot(state.mean);
    require(res.outcome_variance > kDegenerateVariance, ErrorKind::DegenerateMeasurement,
            "outcome variance below threshold");
    double value = res.outcome_mean;
    if (forced) {
        value = *forced;
        res.outcome = value;
    } else if (rng) {
        value = rng->normal(res.outcome_mean, std::sqrt(res.outcome_variance));
        res.outcome = value;
    }
    std::vector<int> keep;
    for (int i = 0; i < 2 * n; ++i)
        if (i != mode && i != n + mode) keep.push_back(i);
    const int m = static_cast<int>(keep.size());
    GaussianState post;
    post.mean.resize(m);
    post.cov.resize(m, m);
    for (int a = 0; a < m; ++a) {
        post.mean(a) = state.mean(keep[a]) + sc(keep[a]) * (value - res.outcome_mean) / res.outcome_variance;
        for (int b = 0; b < m; ++b)
            post.cov(a, b) = state.cov(keep[a], keep[b]) - sc(keep[a]) * sc(keep[b]) / res.outcome_variance;
    }
    for (int i = 0; i < n; ++i)
        if (i != mode) post.labels.push_back(state.labels[i]);
    post.symmetrize();
    res.posterior = std::move(post);
    return res;
}

}  // namespace detail

/// Measures x cos(theta) + p sin(theta) of `mode` and removes the mode.
/// Deterministic when rng is null (mean conditioned on the outcome mean).
inline HomodyneResult homodyne(const GaussianState &state, int mode, double theta, ShotRng *rng = nullptr) {
    return detail::homodyne_impl(state, mode, theta, rng, std::nullopt);
}

/// Conditioning on a given outcome value.
inline HomodyneResult homodyne_with_outcome(const GaussianState &state, int mode, double theta, double outcome) {
    return detail::homodyne_impl(state, mode, theta, nullptr, outcome);
}

/// Symplectic spectrum (each value listed once, ascending) of a covariance
/// matrix in xx..pp ordering: moduli of the eigenvalues of i*Omega*cov.
inline std::vector<double> symplectic_eigenvalues(const Mat &cov) {
    const int n = static_cast<int>(cov.rows()) / 2;
    require(cov.rows() == 2 * n && cov.cols() == cov.rows(), ErrorKind::InvalidArgument, "covariance must be 2n x 2n");
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    require((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, ErrorKind::InternalInvariant,
            "covariance not symmetric");
    std::vector<double> nu;
    Eigen::SelfAdjointEigenSolver<Mat> es(cov);
    if (es.eigenvalues().minCoeff() > 0.0) {
        // sqrt(cov) Omega sqrt(cov) is antisymmetric with eigenvalues +-i nu.
        Mat root = es.operatorSqrt();
        Mat a = root * omega(n) * root;
        Eigen::SelfAdjointEigenSolver<Mat> es2(-(a * a).eval());
        for (int i = 0; i < 2 * n; ++i) nu.push_back(std::sqrt(std::max(0.0, es2.eigenvalues()(i))));
    } else {
        Eigen::EigenSolver<Mat> eg(omega(n) * cov);
        for (int i = 0; i < 2 * n; ++i) nu.push_back(std::abs(eg.eigenvalues()(i)));
    }
    std::sort(nu.begin(), nu.end());
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(0.5 * (nu[2 * i] + nu[2 * i + 1]));
    return out;
}

struct PhysicalityReport {
    std::vector<double> eigenvalues;
    double min_eigenvalue = 0.0;
    bool physical = false;
};

inline constexpr double kPhysicalTol = 1e-9;

inline PhysicalityReport check_physical(const Mat &cov) {
    PhysicalityReport r;
    r.eigenvalues = symplectic_eigenvalues(cov);
    r.min_eigenvalue = r.eigenvalues.empty() ? kV0 : r.eigenvalues.front();
    r.physical = r.min_eigenvalue >= kV0 - kPhysicalTol;
    return r;
}

inline PhysicalityReport check_physical(const GaussianState &state) { return check_physical(state.cov); }

}  // namespace cvmbqc

#endif  // CVMBQC_GAUSSIAN_HPP
