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

#ifndef CVMBQC_CORE_HPP
#define CVMBQC_CORE_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cvmbqc {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;

/// Vacuum quadrature variance for hbar = 1.
inline constexpr double kV0 = 0.5;
inline constexpr double kPi = std::numbers::pi;

enum class ErrorKind {
    InvalidArgument,
    DegenerateMeasurement,
    InternalInvariant,
    WiringAmbiguity,
    DegenerateGate,
    PlacementConflict,
    Boundary,
    NeedsCalibration,
    CompensationIncomplete,
    CalibrationSingular,
    DivisionDegenerate,
    IntegrationFailure,
    Config,
};

inline const char *error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::DegenerateMeasurement: return "degenerate-measurement";
        case ErrorKind::InternalInvariant: return "internal-invariant";
        case ErrorKind::WiringAmbiguity: return "wiring-ambiguity";
        case ErrorKind::DegenerateGate: return "degenerate-gate";
        case ErrorKind::PlacementConflict: return "placement-conflict";
        case ErrorKind::Boundary: return "boundary";
        case ErrorKind::NeedsCalibration: return "needs-calibration";
        case ErrorKind::CompensationIncomplete: return "compensation-incomplete";
        case ErrorKind::CalibrationSingular: return "calibration-singular";
        case ErrorKind::DivisionDegenerate: return "division-degenerate";
        case ErrorKind::IntegrationFailure: return "integration-failure";
        case ErrorKind::Config: return "config";
    }
    return "unknown";
}

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

   private:
    ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string &what) {
    if (!cond) throw Error(kind, what);
}

/// Symplectic form [[0, I], [-I, 0]] in xx..pp ordering.
inline Mat omega(int n) {
    Mat w = Mat::Zero(2 * n, 2 * n);
    w.topRightCorner(n, n) = Mat::Identity(n, n);
    w.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    return w;
}

inline double symplectic_defect(const Mat &s) {
    int n = static_cast<int>(s.rows()) / 2;
    Mat w = omega(n);
    return (s * w * s.transpose() - w).cwiseAbs().maxCoeff();
}

inline bool is_symplectic(const Mat &s, double tol = 1e-9) {
    if (s.rows() != s.cols() || s.rows() % 2 != 0) return false;
    return symplectic_defect(s) <= tol;
}

/// 10 log10(var / V0).
inline double to_db(double var) { return 10.0 * std::log10(var / kV0); }
inline double from_db(double db) { return kV0 * std::pow(10.0, db / 10.0); }

inline double max_abs_diff(const Mat &a, const Mat &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

/// 2x2 blocks used throughout, acting on (x, p).
inline Mat rot2(double theta) {
    Mat r(2, 2);
    r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    return r;
}
inline Mat shear2(double sigma) {
    Mat r(2, 2);
    r << 1.0, 0.0, sigma, 1.0;
    return r;
}
inline Mat squeeze2(double r) {
    Mat s(2, 2);
    s << std::exp(-r), 0.0, 0.0, std::exp(r);
    return s;
}

/// Embed per-mode 2x2 blocks into xx..pp ordering.
inline Mat block_diag_modes(const std::vector<Mat> &blocks) {
    int n = static_cast<int>(blocks.size());
    Mat s = Mat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        s(i, i) = blocks[i](0, 0);
        s(i, n + i) = blocks[i](0, 1);
        s(n + i, i) = blocks[i](1, 0);
        s(n + i, n + i) = blocks[i](1, 1);
    }
    return s;
}

}  // namespace cvmbqc

#endif  // CVMBQC_CORE_HPP
