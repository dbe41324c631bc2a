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

#ifndef CVMBQC_EXECUTOR_HPP
#define CVMBQC_EXECUTOR_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include <Eigen/QR>

#include "cluster.hpp"
#include "core.hpp"
#include "gates.hpp"
#include "rng.hpp"

namespace cvmbqc {

/// Linear forms of every scheduled homodyne outcome.  Device rows are the
/// raw BS3 ports; label rows are what displacement tables refer to (device
/// ports for gate modes, values recombined to before BS3 for control modes).
struct MeasurementPlan {
    std::vector<OutcomeLabel> device_labels;
    Mat device_forms;
    std::vector<OutcomeLabel> labels;
    /// labels = recombine * device outcomes.
    Mat recombine;
    Mat forms;

    int label_index(const OutcomeLabel &l) const {
        auto it = std::find(labels.begin(), labels.end(), l);
        return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
    }
};

inline MeasurementPlan make_plan(const ClusterState &c, const BasisSchedule &s) {
    require(s.N == c.params.N && s.K == c.params.K, ErrorKind::InvalidArgument, "schedule/window mismatch");
    std::vector<int> ks;
    for (int k = 0; k < s.K; ++k) {
        if (s.measured(k))
            require(s.a[k].role == s.b[k].role, ErrorKind::InvalidArgument, "device slot needs the same role on A and B");
        if (s.measured(k)) ks.push_back(k);
    }
    const int nd = 2 * static_cast<int>(ks.size());
    MeasurementPlan p;
    p.device_forms.resize(nd, c.n_cols());
    p.recombine = Mat::Zero(nd, nd);
    const double h = 1.0 / std::sqrt(2.0);
    int row = 0;
    for (int k : ks) {
        const double ta = s.a[k].angle, tb = s.b[k].angle;
        RowVec xa = c.x(Spatial::A, k), xb = c.x(Spatial::B, k), pa = c.p(Spatial::A, k), pb = c.p(Spatial::B, k);
        RowVec plus = h * (std::cos(tb) * (xa + xb) + std::sin(tb) * (pa + pb));
        RowVec minus = h * (std::cos(ta) * (xa - xb) + std::sin(ta) * (pa - pb));
        p.device_labels.push_back({'+', k});
        p.device_labels.push_back({'-', k});
        p.device_forms.row(row) = plus;
        p.device_forms.row(row + 1) = minus;
        if (s.a[k].role == Role::Control) {
            p.labels.push_back({'A', k});
            p.labels.push_back({'B', k});
            p.recombine(row, row) = h;
            p.recombine(row, row + 1) = h;
            p.recombine(row + 1, row) = h;
            p.recombine(row + 1, row + 1) = -h;
        } else {
            p.labels.push_back({'+', k});
            p.labels.push_back({'-', k});
            p.recombine(row, row) = 1.0;
            p.recombine(row + 1, row + 1) = 1.0;
        }
        row += 2;
    }
    p.forms = p.recombine * p.device_forms;
    return p;
}

/// Infinite-squeezing-limit regression: coefficients b minimising the
/// anti-squeezed content of targets - b * regressors.
struct LimitFit {
    Mat coef;
    double residual = 0.0;
    int rank = 0;
};

inline LimitFit limit_regression(const Mat &targets, const Mat &regressors, const RowVec &anti) {
    std::vector<int> cols;
    for (int i = 0; i < anti.size(); ++i)
        if (anti(i) != 0.0) cols.push_back(i);
    Mat ta(targets.rows(), cols.size()), ra(regressors.rows(), cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) {
        ta.col(i) = targets.col(cols[i]);
        ra.col(i) = regressors.col(cols[i]);
    }
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(ra.transpose());
    LimitFit f;
    f.coef = cod.solve(ta.transpose()).transpose();
    f.rank = static_cast<int>(cod.rank());
    Mat res = ta - f.coef * ra;
    f.residual = res.size() ? res.cwiseAbs().maxCoeff() : 0.0;
    return f;
}

inline constexpr double kCompensationTol = 1e-8;

/// Forms of the designated modes (both quadratures, xx..pp per group).
struct DesignatedForms {
    Mat out;  // 2n rows
    Mat ref;  // 2n rows
    Mat in;   // 2n rows, raw inputs (B,k)
};

inline DesignatedForms designated_forms(const ClusterState &c, const BasisSchedule &s) {
    const int n = s.n_io();
    DesignatedForms d;
    d.out.resize(2 * n, c.n_cols());
    d.ref.resize(2 * n, c.n_cols());
    d.in.resize(2 * n, c.n_cols());
    for (int i = 0; i < n; ++i) {
        d.out.row(i) = c.x(Spatial::B, s.outputs[i]);
        d.out.row(n + i) = c.p(Spatial::B, s.outputs[i]);
        d.ref.row(i) = c.x(Spatial::A, s.inputs[i] - s.N);
        d.ref.row(n + i) = c.p(Spatial::A, s.inputs[i] - s.N);
        d.in.row(i) = c.x(Spatial::B, s.inputs[i]);
        d.in.row(n + i) = c.p(Spatial::B, s.inputs[i]);
    }
    return d;
}

/// Unit-gain compensation of an executed schedule.  out_c = out - D_out m,
/// ref' = ref - D_ref m, in' = in - D_in m, and out_c = G in' + noise.
struct Compensation {
    std::vector<OutcomeLabel> labels;
    Mat D_out, D_ref, D_in;
    Mat G;
    double residual = 0.0;
    int rank = 0;

    static DisplacementTable sparse(const Mat &D, const std::vector<OutcomeLabel> &labels) {
        DisplacementTable t;
        std::vector<int> keep;
        for (int j = 0; j < D.cols(); ++j)
            if (D.col(j).cwiseAbs().maxCoeff() > 1e-12) keep.push_back(j);
        t.D.resize(D.rows(), keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) {
            t.D.col(i) = D.col(keep[i]);
            t.labels.push_back(labels[keep[i]]);
        }
        return t;
    }
    DisplacementTable output_table() const { return sparse(D_out, labels); }
};

/// Segment controls around the wire pair (A,k0),(B,k0+N).
inline std::vector<OutcomeLabel> segment_controls(int k0, int N) {
    return {{'A', k0 - 1}, {'A', k0 + 1}, {'B', k0 + N - 1}, {'B', k0 + N + 1}};
}

inline Compensation derive_compensation(const ClusterState &c, const BasisSchedule &s, const MeasurementPlan &plan) {
    const int n = s.n_io(), L = static_cast<int>(plan.labels.size()), N = s.N;
    DesignatedForms d = designated_forms(c, s);
    const RowVec anti = c.anti_mask();
    Compensation comp;
    comp.labels = plan.labels;
    comp.D_ref = Mat::Zero(2 * n, L);
    comp.D_in = Mat::Zero(2 * n, L);
    for (int i = 0; i < n; ++i) {
        auto ctrl = segment_controls(s.inputs[i] - N, N);
        Mat regs(4, c.n_cols());
        std::vector<int> cols;
        for (int a = 0; a < 4; ++a) {
            int li = plan.label_index(ctrl[a]);
            require(li >= 0, ErrorKind::CompensationIncomplete, "segment control not measured: " + ctrl[a].str());
            cols.push_back(li);
            regs.row(a) = plan.forms.row(li);
        }
        Mat tg(4, c.n_cols());
        tg << d.ref.row(i), d.ref.row(n + i), d.in.row(i), d.in.row(n + i);
        LimitFit f = limit_regression(tg, regs, anti);
        for (int a = 0; a < 4; ++a) {
            comp.D_ref(i, cols[a]) = f.coef(0, a);
            comp.D_ref(n + i, cols[a]) = f.coef(1, a);
            comp.D_in(i, cols[a]) = f.coef(2, a);
            comp.D_in(n + i, cols[a]) = f.coef(3, a);
        }
    }
    Mat in_c = d.in - comp.D_in * plan.forms;
    Mat regs(L + 2 * n, c.n_cols());
    regs << plan.forms, in_c;
    LimitFit f = limit_regression(d.out, regs, anti);
    comp.residual = f.residual;
    comp.rank = f.rank;
    require(f.residual < kCompensationTol, ErrorKind::CompensationIncomplete,
            "outputs keep resource anti-squeezing after compensation");
    comp.D_out = f.coef.leftCols(L);
    comp.G = f.coef.rightCols(2 * n);
    return comp;
}

inline Compensation derive_compensation(const ClusterState &c, const BasisSchedule &s) {
    return derive_compensation(c, s, make_plan(c, s));
}

/// Reorders a covariance of two groups [x(n), p(n)] into xx..pp over 2n modes.
inline Mat groups_to_xxpp(const Mat &cov, int n) {
    require(cov.rows() == 4 * n && cov.cols() == 4 * n, ErrorKind::InvalidArgument, "two groups of n modes expected");
    std::vector<int> perm;
    for (int q = 0; q < 2; ++q)
        for (int g = 0; g < 2; ++g)
            for (int i = 0; i < n; ++i) perm.push_back(2 * n * g + n * q + i);
    Mat out(4 * n, 4 * n);
    for (int a = 0; a < 4 * n; ++a)
        for (int b = 0; b < 4 * n; ++b) out(a, b) = cov(perm[a], perm[b]);
    return out;
}

/// Exact statistics of the designated compensated quadratures.  Ordering of
/// cov: [out_c (x..., p...), ref' (x..., p...)].
struct JointStatistics {
    int n = 0;
    std::vector<int> inputs, outputs;
    Vec mean;
    Mat cov;
    Mat input_cov;
    Mat input_ref;
    Mat noise_cov;
    Mat G;
    Mat commutator;
    std::optional<long> shots;

    Mat out_cov() const { return cov.topLeftCorner(2 * n, 2 * n); }
    Mat ref_cov() const { return cov.bottomRightCorner(2 * n, 2 * n); }
    Mat out_ref() const { return cov.topRightCorner(2 * n, 2 * n); }
    Mat input_block() const {
        Mat m(4 * n, 4 * n);
        m << input_cov, input_ref, input_ref.transpose(), ref_cov();
        return m;
    }
};

inline JointStatistics evaluate(const ClusterState &c, const BasisSchedule &s, const MeasurementPlan &plan,
                                const Compensation &comp) {
    const int n = s.n_io();
    DesignatedForms d = designated_forms(c, s);
    Mat out_c = d.out - comp.D_out * plan.forms;
    Mat ref_c = d.ref - comp.D_ref * plan.forms;
    Mat in_c = d.in - comp.D_in * plan.forms;
    Mat all(4 * n, c.n_cols());
    all << out_c, ref_c;
    JointStatistics st;
    st.n = n;
    st.inputs = s.inputs;
    st.outputs = s.outputs;
    st.cov = c.covariance(all);
    st.cov = 0.5 * (st.cov + st.cov.transpose()).eval();
    st.mean = Vec::Zero(4 * n);
    st.input_cov = c.covariance(in_c);
    st.input_ref = c.covariance(in_c, ref_c);
    st.G = comp.G;
    Mat resid = out_c - comp.G * in_c;
    st.noise_cov = c.covariance(resid);
    st.commutator = c.commutators(all, all);
    return st;
}

inline JointStatistics run_deterministic(const ClusterState &c, const BasisSchedule &s) {
    MeasurementPlan plan = make_plan(c, s);
    return evaluate(c, s, plan, derive_compensation(c, s, plan));
}

/// Bayes conditioning on every scheduled homodyne (BS3 applied first), in
/// ascending k or in the given temporal order.  Returns the covariance of
/// [out (x..., p...), ref (x..., p...)].
struct ConditionalStatistics {
    Mat cov;
    double min_outcome_variance = 0.0;
};

inline ConditionalStatistics run_conditional(const ClusterState &c, const BasisSchedule &s,
                                             const std::vector<int> *order = nullptr) {
    Mat cov = c.covariance(c.X);
    const int M = c.idx.n_modes();
    const double h = 1.0 / std::sqrt(2.0);
    std::vector<int> ks;
    if (order)
        ks = *order;
    else
        for (int k = 0; k < s.K; ++k)
            if (s.measured(k)) ks.push_back(k);
    ConditionalStatistics out;
    out.min_outcome_variance = INFINITY;
    for (int k : ks) {
        require(s.measured(k), ErrorKind::InvalidArgument, "order lists an unmeasured mode");
        int ia = c.idx.index(Spatial::A, k), ib = c.idx.index(Spatial::B, k);
        // BS3 as arrow A -> B: A' = (A-B)/sqrt2 ('-'), B' = (A+B)/sqrt2 ('+').
        std::vector<int> rows = {ia, ib, M + ia, M + ib};
        Mat mix(4, 4);
        mix << h, -h, 0, 0, h, h, 0, 0, 0, 0, h, -h, 0, 0, h, h;
        Mat sub_rows(4, cov.cols());
        for (int a = 0; a < 4; ++a) sub_rows.row(a) = cov.row(rows[a]);
        sub_rows = mix * sub_rows;
        for (int a = 0; a < 4; ++a) cov.row(rows[a]) = sub_rows.row(a);
        Mat sub_cols(cov.rows(), 4);
        for (int a = 0; a < 4; ++a) sub_cols.col(a) = cov.col(rows[a]);
        sub_cols = sub_cols * mix.transpose();
        for (int a = 0; a < 4; ++a) cov.col(rows[a]) = sub_cols.col(a);
        for (auto [i, th] : {std::pair{ia, s.a[k].angle}, std::pair{ib, s.b[k].angle}}) {
            Vec cvec = std::cos(th) * cov.col(i) + std::sin(th) * cov.col(M + i);
            double v = std::cos(th) * cvec(i) + std::sin(th) * cvec(M + i);
            require(v > kDegenerateVariance, ErrorKind::DegenerateMeasurement, "outcome variance below threshold");
            out.min_outcome_variance = std::min(out.min_outcome_variance, v);
            cov.noalias() -= cvec * cvec.transpose() / v;
        }
    }
    const int n = s.n_io();
    std::vector<int> pick;
    for (int i = 0; i < n; ++i) pick.push_back(c.idx.index(Spatial::B, s.outputs[i]));
    for (int i = 0; i < n; ++i) pick.push_back(M + c.idx.index(Spatial::B, s.outputs[i]));
    for (int i = 0; i < n; ++i) pick.push_back(c.idx.index(Spatial::A, s.inputs[i] - s.N));
    for (int i = 0; i < n; ++i) pick.push_back(M + c.idx.index(Spatial::A, s.inputs[i] - s.N));
    out.cov.resize(pick.size(), pick.size());
    for (std::size_t a = 0; a < pick.size(); ++a)
        for (std::size_t b = 0; b < pick.size(); ++b) out.cov(a, b) = cov(pick[a], pick[b]);
    out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
    return out;
}

/// Per-shot records of a sampled execution.  `designated` holds the output
/// and reference quadratures in their tagged bases (outputs first).
struct SampledRun {
    std::vector<OutcomeLabel> device_labels;
    std::vector<OutcomeLabel> labels;
    Mat recombine;
    Mat outcomes;
    Mat designated;
    std::vector<int> outputs, references;
    std::vector<double> output_angles, reference_angles;
    std::uint64_t seed = 0;
    long shots = 0;

    /// Outcome values in label space (controls recombined to before BS3).
    /// recombine is block diagonal in device pairs.
    Mat label_values() const {
        Mat v(outcomes.rows(), outcomes.cols());
        for (Eigen::Index r = 0; r + 1 < outcomes.cols(); r += 2) {
            auto blk = recombine.block(r, r, 2, 2);
            v.col(r) = blk(0, 0) * outcomes.col(r) + blk(0, 1) * outcomes.col(r + 1);
            v.col(r + 1) = blk(1, 0) * outcomes.col(r) + blk(1, 1) * outcomes.col(r + 1);
        }
        return v;
    }
};

inline SampledRun run_sampled(const ClusterState &c, const BasisSchedule &s, std::uint64_t seed, long shots,
                              int workers = 1) {
    require(shots >= 1, ErrorKind::InvalidArgument, "shots must be >= 1");
    MeasurementPlan plan = make_plan(c, s);
    const int n = s.n_io();
    SampledRun run;
    run.device_labels = plan.device_labels;
    run.labels = plan.labels;
    run.recombine = plan.recombine;
    run.seed = seed;
    run.shots = shots;
    run.outputs = s.outputs;
    run.references = s.references();
    Mat des(2 * n, c.n_cols());
    for (int i = 0; i < n; ++i) {
        const Setting &so = s.b[s.outputs[i]];
        const Setting &sr = s.a[s.inputs[i] - s.N];
        run.output_angles.push_back(so.angle);
        run.reference_angles.push_back(sr.angle);
        des.row(i) = c.xtheta(Spatial::B, s.outputs[i], so.angle);
        des.row(n + i) = c.xtheta(Spatial::A, s.inputs[i] - s.N, sr.angle);
    }
    Mat forms(plan.device_forms.rows() + des.rows(), c.n_cols());
    forms << plan.device_forms, des;
    std::vector<int> used;
    for (int j = 0; j < forms.cols(); ++j)
        if (forms.col(j).cwiseAbs().maxCoeff() > 0.0) used.push_back(j);
    struct Term {
        int col;
        double w;
    };
    std::vector<std::vector<Term>> rows(forms.rows());
    for (int r = 0; r < forms.rows(); ++r)
        for (std::size_t u = 0; u < used.size(); ++u)
            if (forms(r, used[u]) != 0.0) rows[r].push_back({static_cast<int>(u), forms(r, used[u])});
    std::vector<double> sd(used.size());
    for (std::size_t u = 0; u < used.size(); ++u) sd[u] = std::sqrt(c.var(used[u]));
    const int nd = static_cast<int>(plan.device_forms.rows());
    run.outcomes.resize(shots, nd);
    run.designated.resize(shots, 2 * n);
    auto work = [&](long begin, long end) {
        std::vector<double> z(used.size());
        for (long shot = begin; shot < end; ++shot) {
            ShotRng rng(seed, static_cast<std::uint64_t>(shot));
            for (std::size_t u = 0; u < used.size(); ++u) z[u] = sd[u] * rng.normal();
            for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
                double v = 0.0;
                for (const auto &t : rows[r]) v += t.w * z[t.col];
                if (r < nd)
                    run.outcomes(shot, r) = v;
                else
                    run.designated(shot, r - nd) = v;
            }
        }
    };
    workers = std::max(1, workers);
    if (workers == 1) {
        work(0, shots);
    } else {
        std::vector<std::thread> pool;
        long chunk = (shots + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            long b = w * chunk, e = std::min(shots, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto &t : pool) t.join();
    }
    return run;
}

/// raw - D m for each designated column listed in `columns` (one table row per column).
inline Mat compensate(const SampledRun &run, const DisplacementTable &table, const std::vector<int> &columns) {
    require(static_cast<int>(columns.size()) == table.D.rows(), ErrorKind::InvalidArgument,
            "one designated column per table row");
    Mat values = run.label_values();
    Mat out(run.shots, columns.size());
    std::vector<int> idx;
    for (const auto &l : table.labels) {
        auto it = std::find(run.labels.begin(), run.labels.end(), l);
        require(it != run.labels.end(), ErrorKind::CompensationIncomplete, "outcome not recorded: " + l.str());
        idx.push_back(static_cast<int>(it - run.labels.begin()));
    }
    for (std::size_t r = 0; r < columns.size(); ++r) {
        Vec v = run.designated.col(columns[r]);
        for (std::size_t j = 0; j < idx.size(); ++j)
            if (table.D(r, j) != 0.0) v -= table.D(r, j) * values.col(idx[j]);
        out.col(r) = v;
    }
    return out;
}

/// Table rows for the tagged bases of a sampled run: outputs then references.
inline DisplacementTable tagged_table(const Compensation &comp, const SampledRun &run) {
    const int n = static_cast<int>(run.outputs.size());
    Mat D(2 * n, comp.labels.size());
    for (int i = 0; i < n; ++i) {
        double a = run.output_angles[i], b = run.reference_angles[i];
        D.row(i) = std::cos(a) * comp.D_out.row(i) + std::sin(a) * comp.D_out.row(n + i);
        D.row(n + i) = std::cos(b) * comp.D_ref.row(i) + std::sin(b) * comp.D_ref.row(n + i);
    }
    return Compensation::sparse(D, comp.labels);
}

struct CalibrationResult {
    std::vector<OutcomeLabel> labels;
    RowVec coef;
    RowVec se;
    double intercept = 0.0;
    double residual_variance = 0.0;
    long shots = 0;

    double at(const OutcomeLabel &l, double *err = nullptr) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == l) {
                if (err) *err = se(i);
                return coef(i);
            }
        throw Error(ErrorKind::InvalidArgument, "label not in calibration: " + l.str());
    }
};

inline constexpr long kMinCalibrationShots = 10000;

/// Ordinary least squares of one designated column on all recorded outcome
/// values plus an intercept.
inline CalibrationResult calibrate_displacement(const SampledRun &run, int column) {
    require(run.shots >= kMinCalibrationShots, ErrorKind::InvalidArgument, "calibration needs >= 1e4 shots");
    require(column >= 0 && column < run.designated.cols(), ErrorKind::InvalidArgument, "column out of range");
    Mat values = run.label_values();
    const int p = static_cast<int>(values.cols()) + 1;
    Mat X(run.shots, p);
    X.col(0).setOnes();
    X.rightCols(p - 1) = values;
    Vec y = run.designated.col(column);
    Eigen::ColPivHouseholderQR<Mat> piv(X);
    require(piv.rank() == p, ErrorKind::CalibrationSingular, "outcome design matrix rank deficient");
    Eigen::HouseholderQR<Mat> qr(X);
    Vec beta = qr.solve(y);
    Vec resid = y - X * beta;
    CalibrationResult out;
    out.shots = run.shots;
    out.labels = run.labels;
    out.residual_variance = resid.squaredNorm() / static_cast<double>(run.shots - p);
    Mat R = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    Mat Rinv = R.triangularView<Eigen::Upper>().solve(Mat::Identity(p, p));
    Vec diag = Rinv.rowwise().squaredNorm();
    out.intercept = beta(0);
    out.coef = beta.tail(p - 1).transpose();
    out.se = (diag.tail(p - 1) * out.residual_variance).cwiseSqrt().transpose();
    return out;
}

/// Calibration resource: every source squeezed at r_cal except the sources
/// feeding the listed input modes (B,k).
inline ClusterState calibration_cluster(const ClusterState &c, const std::vector<int> &inputs, double r_cal) {
    std::vector<int> keep;
    for (int k : inputs)
        for (int m : c.sources_of(Spatial::B, k)) keep.push_back(m);
    std::vector<int> others;
    for (int m = 0; m < c.n_source_modes; ++m)
        if (std::find(keep.begin(), keep.end(), m) == keep.end()) others.push_back(m);
    return c.with_source_variance(others, kV0 * std::exp(2 * r_cal), kV0 * std::exp(-2 * r_cal));
}

/// Two-mode wire segment (A,k),(B,k+N) after control measurements.
struct WireSegment {
    int k = 0;
    int wire = 0;
    int edge_sign = 0;
    Mat D;    // rows xA, xB, pA, pB; columns segment_controls(k)
    Mat cov;  // compensated (xA, xB, pA, pB)
    double nullifier_a = 0.0;
    double nullifier_b = 0.0;
};

struct WireProjection {
    std::vector<WireSegment> segments;
    std::optional<SampledRun> records;
};

/// Measures every control mode at its default angle and returns the
/// interior wire segments.  In sampled mode the control records are kept.
inline WireProjection project_wires(const ClusterState &c, bool sampled = false, std::uint64_t seed = 0,
                                    long shots = 0, int workers = 1) {
    const int N = c.params.N, K = c.params.K;
    BasisSchedule s = BasisSchedule::defaults(N, K);
    MeasurementPlan plan = make_plan(c, s);
    const RowVec anti = c.anti_mask();
    WireProjection wp;
    for (int k = 0; k + N < K; k += 2) {
        if (!c.idx.interior(k - 1) || !c.idx.interior(k + N + 1)) continue;
        auto ctrl = segment_controls(k, N);
        Mat regs(4, c.n_cols());
        for (int a = 0; a < 4; ++a) regs.row(a) = plan.forms.row(plan.label_index(ctrl[a]));
        Mat tg(4, c.n_cols());
        tg << c.x(Spatial::A, k), c.x(Spatial::B, k + N), c.p(Spatial::A, k), c.p(Spatial::B, k + N);
        LimitFit f = limit_regression(tg, regs, anti);
        Mat comp = tg - f.coef * regs;
        WireSegment seg;
        seg.k = k;
        seg.wire = c.idx.wire(k);
        seg.edge_sign = seg.wire % 2 == 0 ? -1 : 1;
        seg.D = f.coef;
        seg.cov = c.covariance(comp);
        RowVec na = comp.row(2) - seg.edge_sign * comp.row(1);
        RowVec nb = comp.row(3) - seg.edge_sign * comp.row(0);
        seg.nullifier_a = c.covariance(na, na);
        seg.nullifier_b = c.covariance(nb, nb);
        wp.segments.push_back(seg);
    }
    if (sampled) wp.records = run_sampled(c, s, seed, shots, workers);
    return wp;
}

}  // namespace cvmbqc

#endif  // CVMBQC_EXECUTOR_HPP
