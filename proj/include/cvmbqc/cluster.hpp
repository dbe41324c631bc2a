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

#ifndef CVMBQC_CLUSTER_HPP
#define CVMBQC_CLUSTER_HPP

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "gaussian.hpp"

namespace cvmbqc {

enum class Spatial : int { A = 0, B = 1 };

inline char spatial_char(Spatial s) { return s == Spatial::A ? 'A' : 'B'; }

enum class EdgeConvention { ClusterType, Approximate };

inline const char *convention_name(EdgeConvention c) {
    return c == EdgeConvention::ClusterType ? "cluster_type" : "approximate";
}

struct ClusterParams {
    int N = 12;
    int K = 228;
    double r = 0.5;
    /// Optional impure source variances (var_x, var_p) replacing the pure pair.
    std::optional<std::pair<double, double>> source_var;
    EdgeConvention convention = EdgeConvention::ClusterType;

    void validate() const {
        require(N >= 4 && N % 2 == 0, ErrorKind::InvalidArgument, "N must be even and >= 4");
        require(K >= 3 * N, ErrorKind::InvalidArgument, "K must be >= 3N");
        require(std::isfinite(r) && r >= 0.0, ErrorKind::InvalidArgument, "r must be finite and >= 0");
        if (source_var)
            require(source_var->first > 0 && source_var->second > 0 &&
                        source_var->first * source_var->second >= kV0 * kV0 - 1e-12,
                    ErrorKind::InvalidArgument, "source variances unphysical");
    }

    double var_x() const { return source_var ? source_var->first : kV0 * std::exp(2 * r); }
    double var_p() const { return source_var ? source_var->second : kV0 * std::exp(-2 * r); }

    /// Edge weight t of the nullifier convention.
    double edge_t(EdgeConvention c) const { return c == EdgeConvention::ClusterType ? 0.5 : std::tanh(2 * r) / 2; }
};

/// Closed-form interior nullifier variance of a pure cluster.
inline double nullifier_closed_form(double r, EdgeConvention c) {
    return c == EdgeConvention::ClusterType ? 2 * kV0 * std::exp(-2 * r) : kV0 / std::cosh(2 * r);
}

/// (spatial, temporal) <-> flat mode index 2k + spatial.
struct ModeIndexer {
    int N = 12;
    int K = 228;

    int n_modes() const { return 2 * K; }
    int index(Spatial s, int k) const {
        require(k >= 0 && k < K, ErrorKind::InvalidArgument, "temporal index outside window");
        return 2 * k + static_cast<int>(s);
    }
    ModeLabel label(int i) const { return {i % 2 == 0 ? 'A' : 'B', i / 2}; }
    bool in_window(int k) const { return k >= 0 && k < K; }
    /// Full nullifier neighbourhood (k +- N +- 1) inside the window.
    bool interior(int k) const { return k >= N + 1 && k < K - N - 1; }
    int wire(int k) const { return ((k % N) + N) % N / 2; }
};

struct WiringConfig {
    Spatial short_arm = Spatial::A;
    Spatial long_arm = Spatial::B;
    bool bs1_reversed = false;
    bool bs2_reversed = true;
    /// Source whose squeezer output is turned by pi/2 before BS1.
    Spatial rotated_source = Spatial::A;
    double logic_rotation = -kPi / 4;

    bool operator==(const WiringConfig &) const = default;

    std::string str() const {
        std::ostringstream os;
        os << "short=" << spatial_char(short_arm) << " long=" << spatial_char(long_arm)
           << " bs1=" << (bs1_reversed ? "reversed" : "forward") << " bs2=" << (bs2_reversed ? "reversed" : "forward")
           << " rotated_source=" << spatial_char(rotated_source) << " logic_rotation=" << logic_rotation;
        return os.str();
    }
};

/// Logic-level cluster represented through its generating map: every logic
/// quadrature is a row over independent source quadratures with known
/// variances.  Columns: source x (0..2S-1) then source p (2S..4S-1), source
/// mode 2(j+N+1)+spatial for temporal source index j in [-N-1, K).
struct ClusterState {
    ClusterParams params;
    WiringConfig wiring;
    ModeIndexer idx;
    int n_source_modes = 0;
    Mat X;
    Vec var;

    int n_cols() const { return 2 * n_source_modes; }
    int source_mode(int j, Spatial s) const { return 2 * (j + params.N + 1) + static_cast<int>(s); }

    RowVec quad(Spatial s, int k, bool p) const {
        int m = idx.index(s, k);
        return X.row(p ? idx.n_modes() + m : m);
    }
    RowVec x(Spatial s, int k) const { return quad(s, k, false); }
    RowVec p(Spatial s, int k) const { return quad(s, k, true); }
    RowVec xtheta(Spatial s, int k, double th) const {
        return std::cos(th) * x(s, k) + std::sin(th) * p(s, k);
    }

    double covariance(const RowVec &a, const RowVec &b) const { return a.cwiseProduct(var.transpose()).dot(b); }
    Mat covariance(const Mat &forms) const { return forms * var.asDiagonal() * forms.transpose(); }
    Mat covariance(const Mat &a, const Mat &b) const { return a * var.asDiagonal() * b.transpose(); }

    /// Commutator matrix [f_a, f_b] / i of forms.
    Mat commutators(const Mat &a, const Mat &b) const { return a * omega(n_source_modes) * b.transpose(); }

    /// 1 on anti-squeezed (source x) columns.
    RowVec anti_mask() const {
        RowVec m = RowVec::Zero(n_cols());
        m.head(n_source_modes).setOnes();
        return m;
    }

    /// Source modes with nonzero weight in either quadrature of (s, k).
    std::vector<int> sources_of(Spatial s, int k) const {
        std::vector<int> out;
        RowVec xr = x(s, k), pr = p(s, k);
        for (int m = 0; m < n_source_modes; ++m) {
            double w = std::abs(xr(m)) + std::abs(xr(n_source_modes + m)) + std::abs(pr(m)) +
                       std::abs(pr(n_source_modes + m));
            if (w > 1e-12) out.push_back(m);
        }
        return out;
    }

    /// Copy with the variances of the listed source modes replaced.
    ClusterState with_source_variance(const std::vector<int> &modes, double var_x, double var_p) const {
        ClusterState c = *this;
        for (int m : modes) {
            c.var(m) = var_x;
            c.var(n_source_modes + m) = var_p;
        }
        return c;
    }

    GaussianState state() const {
        GaussianState s;
        s.mean = Vec::Zero(2 * idx.n_modes());
        s.cov = covariance(X);
        for (int i = 0; i < idx.n_modes(); ++i) s.labels.push_back(idx.label(i));
        s.symmetrize();
        return s;
    }
};

inline ClusterState build_coiled_cluster(const ClusterParams &params, const WiringConfig &wiring = {}) {
    params.validate();
    const int N = params.N, K = params.K;
    require(K - N - 1 > N + 1, ErrorKind::InvalidArgument, "window too small for interior modes");
    ClusterState c;
    c.params = params;
    c.wiring = wiring;
    c.idx = {N, K};
    const int S = K + N + 1;
    c.n_source_modes = 2 * S;
    const int cols = 2 * c.n_source_modes;
    struct Pair {
        RowVec xa, pa, xb, pb;
    };
    const double h = 1.0 / std::sqrt(2.0);
    auto bs = [&](const RowVec &xa, const RowVec &pa, const RowVec &xb, const RowVec &pb, bool reversed) {
        if (!reversed) return Pair{h * (xa - xb), h * (pa - pb), h * (xa + xb), h * (pa + pb)};
        return Pair{h * (xa + xb), h * (pa + pb), h * (xb - xa), h * (pb - pa)};
    };
    auto unit = [&](int col) {
        RowVec v = RowVec::Zero(cols);
        v(col) = 1.0;
        return v;
    };
    std::vector<Pair> stage1(S);
    for (int j = -N - 1; j < K; ++j) {
        int ma = c.source_mode(j, Spatial::A), mb = c.source_mode(j, Spatial::B);
        RowVec xa = unit(ma), pa = unit(c.n_source_modes + ma);
        RowVec xb = unit(mb), pb = unit(c.n_source_modes + mb);
        if (wiring.rotated_source == Spatial::A) {
            RowVec t = xa;
            xa = pa;
            pa = -t;
        } else {
            RowVec t = xb;
            xb = pb;
            pb = -t;
        }
        stage1[j + N + 1] = bs(xa, pa, xb, pb, wiring.bs1_reversed);
    }
    auto stage2 = [&](int k) {
        const Pair &a = stage1[(wiring.short_arm == Spatial::A ? k - 1 : k) + N + 1];
        const Pair &b = stage1[(wiring.short_arm == Spatial::B ? k - 1 : k) + N + 1];
        return bs(a.xa, a.pa, b.xb, b.pb, wiring.bs2_reversed);
    };
    const int M = 2 * K;
    c.X = Mat::Zero(2 * M, cols);
    const double cr = std::cos(wiring.logic_rotation), sr = std::sin(wiring.logic_rotation);
    for (int k = 0; k < K; ++k) {
        Pair sa = stage2(wiring.long_arm == Spatial::A ? k - N : k);
        Pair sb = stage2(wiring.long_arm == Spatial::B ? k - N : k);
        int ia = 2 * k, ib = 2 * k + 1;
        c.X.row(ia) = cr * sa.xa + sr * sa.pa;
        c.X.row(M + ia) = -sr * sa.xa + cr * sa.pa;
        c.X.row(ib) = cr * sb.xb + sr * sb.pb;
        c.X.row(M + ib) = -sr * sb.xb + cr * sb.pb;
    }
    c.var.resize(cols);
    c.var.head(c.n_source_modes).setConstant(params.var_x());
    c.var.tail(c.n_source_modes).setConstant(params.var_p());
    return c;
}

struct NullifierValue {
    Spatial spatial;
    int i;
    double variance;
};

inline std::vector<NullifierValue> nullifier_variances(const ClusterState &c, EdgeConvention conv) {
    const int N = c.params.N, K = c.params.K;
    const double t = c.params.edge_t(conv);
    using S = Spatial;
    std::vector<NullifierValue> out;
    for (int i = N + 1; i < K - N - 1; ++i) {
        RowVec na = c.p(S::A, i) - t * (-c.x(S::A, i - 1) - c.x(S::A, i + 1) - c.x(S::B, i + N - 1) +
                                        c.x(S::B, i + N + 1));
        RowVec nb = c.p(S::B, i) - t * (c.x(S::A, i - N - 1) - c.x(S::A, i - N + 1) + c.x(S::B, i - 1) +
                                        c.x(S::B, i + 1));
        out.push_back({S::A, i, c.covariance(na, na)});
        out.push_back({S::B, i, c.covariance(nb, nb)});
    }
    return out;
}

struct WiringCandidate {
    WiringConfig config;
    double max_dev_cluster_type = 0.0;
    double max_dev_approximate = 0.0;
    bool matches = false;
    int equivalence_class = -1;
};

struct WiringValidation {
    WiringConfig chosen;
    std::vector<WiringCandidate> table;
    int n_matches = 0;
    int n_classes = 0;

    std::string diagnostic() const {
        std::ostringstream os;
        for (const auto &t : table)
            os << t.config.str() << " dev_ct=" << t.max_dev_cluster_type << " dev_ap=" << t.max_dev_approximate
               << (t.matches ? " MATCH class=" + std::to_string(t.equivalence_class) : "") << "\n";
        return os.str();
    }
};

/// Enumerates delay-arm, beamsplitter-orientation and source-rotation
/// choices and keeps the configurations reproducing the nullifier closed
/// forms.  Matches that produce the same covariance form one class.
inline WiringValidation validate_wiring_report(const ClusterParams &params) {
    params.validate();
    require(params.r > 0 && !params.source_var, ErrorKind::InvalidArgument,
            "wiring validation needs pure squeezing r > 0");
    ClusterParams small = params;
    small.K = 3 * params.N;
    const double tol = 1e-9;
    WiringValidation v;
    std::vector<Mat> class_cov;
    for (int bits = 0; bits < 32; ++bits) {
        WiringConfig w;
        w.short_arm = (bits & 16) ? Spatial::B : Spatial::A;
        w.long_arm = (bits & 8) ? Spatial::B : Spatial::A;
        w.bs1_reversed = bits & 4;
        w.bs2_reversed = bits & 2;
        w.rotated_source = (bits & 1) ? Spatial::B : Spatial::A;
        ClusterState c = build_coiled_cluster(small, w);
        WiringCandidate cand{w};
        for (auto conv : {EdgeConvention::ClusterType, EdgeConvention::Approximate}) {
            double target = nullifier_closed_form(small.r, conv), dev = 0;
            for (const auto &nv : nullifier_variances(c, conv)) dev = std::max(dev, std::abs(nv.variance - target));
            (conv == EdgeConvention::ClusterType ? cand.max_dev_cluster_type : cand.max_dev_approximate) = dev;
        }
        cand.matches = cand.max_dev_cluster_type < tol && cand.max_dev_approximate < tol;
        if (cand.matches) {
            Mat cov = c.covariance(c.X);
            for (int i = 0; i < static_cast<int>(class_cov.size()); ++i)
                if (max_abs_diff(cov, class_cov[i]) < 1e-12) cand.equivalence_class = i;
            if (cand.equivalence_class < 0) {
                cand.equivalence_class = static_cast<int>(class_cov.size());
                class_cov.push_back(cov);
                if (cand.equivalence_class == 0) v.chosen = w;
            }
            ++v.n_matches;
        }
        v.table.push_back(cand);
    }
    v.n_classes = static_cast<int>(class_cov.size());
    if (v.n_classes != 1)
        throw Error(ErrorKind::WiringAmbiguity,
                    std::to_string(v.n_classes) + " distinct matching wiring classes\n" + v.diagnostic());
    return v;
}

inline WiringConfig validate_wiring(const ClusterParams &params) { return validate_wiring_report(params).chosen; }

}  // namespace cvmbqc

#endif  // CVMBQC_CLUSTER_HPP
