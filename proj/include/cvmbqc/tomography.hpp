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

#ifndef CVMBQC_TOMOGRAPHY_HPP
#define CVMBQC_TOMOGRAPHY_HPP

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "executor.hpp"
#include "gates.hpp"

namespace cvmbqc {

struct EpsilonEstimate {
    std::optional<double> even, odd;
    double sd_even = 0.0, sd_odd = 0.0;
    int n_even = 0, n_odd = 0;
    /// Per-input raw values <p_in' x_ref'>.
    std::vector<double> per_input;
    bool no_uncertainty = false;

    double for_parity(int wire) const {
        const auto &v = wire % 2 == 0 ? even : odd;
        require(v.has_value(), ErrorKind::DivisionDegenerate, "no epsilon for this wire parity");
        return *v;
    }
};

inline void pool_parity(const std::vector<double> &vals, std::optional<double> &mean, double &sd, int &count) {
    count = static_cast<int>(vals.size());
    if (vals.empty()) return;
    double m = 0.0;
    for (double v : vals) m += v;
    m /= count;
    mean = m;
    double ss = 0.0;
    for (double v : vals) ss += (v - m) * (v - m);
    sd = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
}

/// epsilon_j = <p_in' x_ref'> per wire pair, pooled per parity.
inline EpsilonEstimate estimate_epsilon(const JointStatistics &st, int N) {
    EpsilonEstimate e;
    std::vector<double> ev, od;
    for (int j = 0; j < st.n; ++j) {
        double v = st.input_ref(st.n + j, j);
        e.per_input.push_back(v);
        (((st.inputs[j] % N) / 2) % 2 == 0 ? ev : od).push_back(v);
    }
    pool_parity(ev, e.even, e.sd_even, e.n_even);
    pool_parity(od, e.odd, e.sd_odd, e.n_odd);
    e.no_uncertainty = (e.n_even < 2 && e.even) || (e.n_odd < 2 && e.odd);
    return e;
}

inline constexpr double kMinEpsilon = 1e-15;

/// Estimator from output/reference correlations; out_ref rows are outputs
/// (x..., p...), columns references (x..., p...).
inline Mat estimate_symplectic(const Mat &out_ref, const std::vector<double> &eps) {
    const int n = static_cast<int>(eps.size());
    require(out_ref.rows() == 2 * n && out_ref.cols() == 2 * n, ErrorKind::InvalidArgument, "correlation block size");
    Mat S(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        require(std::abs(eps[j]) > kMinEpsilon, ErrorKind::DivisionDegenerate, "epsilon vanishes");
        for (int i = 0; i < n; ++i) {
            S(i, j) = out_ref(i, n + j) / eps[j];
            S(i, n + j) = out_ref(i, j) / eps[j];
            S(n + i, j) = out_ref(n + i, n + j) / eps[j];
            S(n + i, n + j) = out_ref(n + i, j) / eps[j];
        }
    }
    return S;
}

inline Vec estimate_gate_noise(const Mat &S, const Mat &out_cov, const Mat &in_cov) {
    return (out_cov - S * in_cov * S.transpose()).diagonal();
}

struct InputVariances {
    std::optional<std::pair<double, double>> even, odd;
    std::pair<double, double> sd_even{0, 0}, sd_odd{0, 0};
};

/// Marginal (Var x, Var p) of the compensated inputs, references ignored.
inline InputVariances input_variance_estimate(const JointStatistics &st, int N) {
    std::array<std::vector<double>, 2> ex, ep;
    for (int j = 0; j < st.n; ++j) {
        int par = ((st.inputs[j] % N) / 2) % 2;
        ex[par].push_back(st.input_cov(j, j));
        ep[par].push_back(st.input_cov(st.n + j, st.n + j));
    }
    InputVariances iv;
    for (int par : {0, 1}) {
        std::optional<double> mx, mp;
        double sx = 0, sp = 0;
        int c = 0;
        pool_parity(ex[par], mx, sx, c);
        pool_parity(ep[par], mp, sp, c);
        if (mx) (par == 0 ? iv.even : iv.odd) = std::make_pair(*mx, *mp);
        (par == 0 ? iv.sd_even : iv.sd_odd) = {sx, sp};
    }
    return iv;
}

struct TransferReport {
    Mat S_hat;
    Vec noise;
    Mat input_cov;
    std::vector<double> eps;
    std::string provenance = "deterministic";
    long shots = 0;
};

inline std::vector<double> epsilon_per_input(const EpsilonEstimate &e, const std::vector<int> &inputs, int N) {
    std::vector<double> out;
    for (int k : inputs) out.push_back(e.for_parity((k % N) / 2));
    return out;
}

inline TransferReport tomography_from_statistics(const JointStatistics &st, int N) {
    TransferReport t;
    EpsilonEstimate e = estimate_epsilon(st, N);
    t.eps = epsilon_per_input(e, st.inputs, N);
    t.S_hat = estimate_symplectic(st.out_ref(), t.eps);
    t.input_cov = st.input_cov;
    t.noise = estimate_gate_noise(t.S_hat, st.out_cov(), st.input_cov);
    return t;
}

inline TransferReport tomography_deterministic(const ClusterState &c, const BasisSchedule &s) {
    return tomography_from_statistics(run_deterministic(c, s), s.N);
}

/// Mean of a product column with its standard error, plus the 10-batch SE.
struct Moment {
    double mean = 0.0;
    double se = 0.0;
    double batch_se = 0.0;
};

inline Moment product_moment(const Vec &a, const Vec &b, int batches = 10) {
    const long n = a.size();
    Vec prod = a.cwiseProduct(b);
    Moment m;
    m.mean = prod.mean();
    double var = (prod.array() - m.mean).square().sum() / static_cast<double>(n - 1);
    m.se = std::sqrt(var / static_cast<double>(n));
    std::vector<double> bm;
    long per = n / batches;
    for (int i = 0; i < batches && per > 0; ++i) bm.push_back(prod.segment(i * per, per).mean());
    if (bm.size() > 1) {
        double mu = 0;
        for (double v : bm) mu += v;
        mu /= bm.size();
        double ss = 0;
        for (double v : bm) ss += (v - mu) * (v - mu);
        m.batch_se = std::sqrt(ss / (bm.size() - 1) / bm.size());
    }
    return m;
}

/// Tomography from shots: four (output basis, reference basis) runs of the
/// circuit plus two companion runs of the unprocessed wire pairs.
struct SampledTomography {
    int n = 0;
    Mat S_hat, S_se, S_batch_se;
    Mat out_ref, out_ref_se;
    Vec out_var, out_var_se;
    Vec in_var, in_var_se;
    std::vector<double> eps, eps_se;
    Vec noise, noise_se;
    long shots = 0;
};

inline std::uint64_t run_seed(std::uint64_t seed, int run) { return mix64(seed ^ mix64(0x5eedULL + run)); }

struct CompensatedRun {
    Mat values;  // shots x 2n: outputs then references, tagged bases
};

inline CompensatedRun sampled_compensated(const ClusterState &c, const BasisSchedule &s, std::uint64_t seed,
                                          long shots, int workers) {
    Compensation comp = derive_compensation(c, s);
    SampledRun run = run_sampled(c, s, seed, shots, workers);
    std::vector<int> cols;
    for (int i = 0; i < 2 * s.n_io(); ++i) cols.push_back(i);
    return {compensate(run, tagged_table(comp, run), cols)};
}

inline SampledTomography tomography_sampled(const ClusterState &c, const Circuit &circ, std::uint64_t seed,
                                            long shots, int workers = 1) {
    const int N = c.params.N, K = c.params.K;
    SampledTomography t;
    t.shots = shots;
    BasisSchedule base = compile_schedule(circ, N, K);
    const int n = base.n_io();
    t.n = n;
    // quadrant runs indexed by (out_p, ref_p)
    std::array<std::array<Mat, 2>, 2> q;
    int run_id = 0;
    for (int op : {0, 1})
        for (int rp : {0, 1}) {
            BasisSchedule s = compile_schedule(circ, N, K, {op == 1, rp == 1});
            q[op][rp] = sampled_compensated(c, s, run_seed(seed, run_id++), shots, workers).values;
        }
    std::array<Mat, 2> comp;  // [0]: inputs x, refs p ; [1]: inputs p, refs x
    comp[0] = sampled_compensated(c, companion_schedule(base.inputs, N, K, {false, true}), run_seed(seed, run_id++),
                                  shots, workers)
                  .values;
    comp[1] = sampled_compensated(c, companion_schedule(base.inputs, N, K, {true, false}), run_seed(seed, run_id++),
                                  shots, workers)
                  .values;
    // epsilon per parity from both companion correlations of every wire of that parity
    std::array<std::vector<Moment>, 2> by_parity;
    for (int j = 0; j < n; ++j) {
        int par = ((base.inputs[j] % N) / 2) % 2;
        by_parity[par].push_back(product_moment(comp[0].col(j), comp[0].col(n + j)));
        by_parity[par].push_back(product_moment(comp[1].col(j), comp[1].col(n + j)));
    }
    std::array<double, 2> eps_p{0, 0}, eps_se_p{0, 0};
    for (int par : {0, 1}) {
        if (by_parity[par].empty()) continue;
        double m = 0, v = 0;
        for (const auto &mo : by_parity[par]) {
            m += mo.mean;
            v += mo.se * mo.se;
        }
        double cnt = static_cast<double>(by_parity[par].size());
        eps_p[par] = m / cnt;
        eps_se_p[par] = std::sqrt(v) / cnt;
    }
    for (int j = 0; j < n; ++j) {
        int par = ((base.inputs[j] % N) / 2) % 2;
        t.eps.push_back(eps_p[par]);
        t.eps_se.push_back(eps_se_p[par]);
        require(std::abs(eps_p[par]) > kMinEpsilon, ErrorKind::DivisionDegenerate, "sampled epsilon vanishes");
    }
    t.in_var.resize(2 * n);
    t.in_var_se.resize(2 * n);
    for (int j = 0; j < n; ++j) {
        Moment mx = product_moment(comp[0].col(j), comp[0].col(j));
        Moment mp = product_moment(comp[1].col(j), comp[1].col(j));
        t.in_var(j) = mx.mean;
        t.in_var_se(j) = mx.se;
        t.in_var(n + j) = mp.mean;
        t.in_var_se(n + j) = mp.se;
    }
    t.out_ref.resize(2 * n, 2 * n);
    t.out_ref_se.resize(2 * n, 2 * n);
    Mat batch_se(2 * n, 2 * n);
    for (int op : {0, 1})
        for (int rp : {0, 1})
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Moment m = product_moment(q[op][rp].col(i), q[op][rp].col(n + j));
                    t.out_ref(op * n + i, rp * n + j) = m.mean;
                    t.out_ref_se(op * n + i, rp * n + j) = m.se;
                    batch_se(op * n + i, rp * n + j) = m.batch_se;
                }
    t.S_hat = estimate_symplectic(t.out_ref, t.eps);
    t.S_se = Mat::Zero(2 * n, 2 * n);
    t.S_batch_se = Mat::Zero(2 * n, 2 * n);
    for (int a = 0; a < 2 * n; ++a)
        for (int b = 0; b < 2 * n; ++b) {
            int j = b % n;
            int rcol = b < n ? n + j : j;  // S column b reads reference column rcol
            double c0 = t.out_ref(a, rcol), se0 = t.out_ref_se(a, rcol), e = t.eps[j], se_e = t.eps_se[j];
            t.S_se(a, b) = std::sqrt(se0 * se0 / (e * e) + c0 * c0 * se_e * se_e / (e * e * e * e));
            t.S_batch_se(a, b) = batch_se(a, rcol) / std::abs(e);
        }
    t.out_var.resize(2 * n);
    t.out_var_se.resize(2 * n);
    for (int op : {0, 1})
        for (int i = 0; i < n; ++i) {
            Moment a = product_moment(q[op][0].col(i), q[op][0].col(i));
            Moment b = product_moment(q[op][1].col(i), q[op][1].col(i));
            t.out_var(op * n + i) = 0.5 * (a.mean + b.mean);
            t.out_var_se(op * n + i) = 0.5 * std::sqrt(a.se * a.se + b.se * b.se);
        }
    Mat in_cov = t.in_var.asDiagonal();
    t.noise = t.out_var - (t.S_hat * in_cov * t.S_hat.transpose()).diagonal();
    t.noise_se = t.out_var_se;
    return t;
}

}  // namespace cvmbqc

#endif  // CVMBQC_TOMOGRAPHY_HPP
