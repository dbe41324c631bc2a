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

#ifndef CVMBQC_GATES_HPP
#define CVMBQC_GATES_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cluster.hpp"
#include "core.hpp"

namespace cvmbqc {

enum class GateKind { Rotation, ShearF, Squeeze, CZ, Identity };

inline const char *gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::Rotation: return "R";
        case GateKind::ShearF: return "P";
        case GateKind::Squeeze: return "S";
        case GateKind::CZ: return "CZ";
        case GateKind::Identity: return "I";
    }
    return "?";
}

/// A gate placed with its (first) input on mode (B, k), k even.  Single-mode
/// gates teleport (B,k) -> (B,k+N); CZ couples wires w, w+1 and maps
/// (B,k),(B,k+2) -> (B,k+2N),(B,k+2N+2).
struct GateSpec {
    GateKind kind = GateKind::Identity;
    double param = 0.0;
    int k = 0;

    static GateSpec rotation(double theta, int k) { return {GateKind::Rotation, theta, k}; }
    static GateSpec shear(double sigma, int k) { return {GateKind::ShearF, sigma, k}; }
    static GateSpec squeeze(double r, int k) { return {GateKind::Squeeze, r, k}; }
    static GateSpec cz(double g, int k) { return {GateKind::CZ, g, k}; }
    static GateSpec identity(int k) { return {GateKind::Identity, 0.0, k}; }

    int wire(int N) const { return (k % N) / 2; }
    int parity_sign(int N) const { return wire(N) % 2 == 0 ? 1 : -1; }
    int n_modes() const { return kind == GateKind::CZ ? 2 : 1; }
    std::vector<int> inputs() const { return kind == GateKind::CZ ? std::vector<int>{k, k + 2} : std::vector<int>{k}; }
    std::vector<int> outputs(int N) const {
        return kind == GateKind::CZ ? std::vector<int>{k + 2 * N, k + 2 * N + 2} : std::vector<int>{k + N};
    }

    void validate(int N) const {
        require(std::isfinite(param), ErrorKind::InvalidArgument, "gate parameter not finite");
        require(k >= 0 && k % 2 == 0, ErrorKind::InvalidArgument, "gate input index must be even");
        if (kind == GateKind::CZ)
            require(wire(N) + 1 < N / 2, ErrorKind::InvalidArgument, "CZ needs wire w+1 < N/2");
    }

    std::string str() const {
        std::ostringstream os;
        os << gate_kind_name(kind) << "(" << param << ")@" << k;
        return os.str();
    }
};

/// Default control-mode angle (-1)^((k-1)/2) pi/4.
inline double control_angle(int k) { return (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * kPi / 4; }

enum class Role { Control, Gate, Wire, Output, Reference };

inline const char *role_name(Role r) {
    switch (r) {
        case Role::Control: return "control";
        case Role::Gate: return "gate";
        case Role::Wire: return "wire";
        case Role::Output: return "output";
        case Role::Reference: return "reference";
    }
    return "?";
}

struct Setting {
    double angle = 0.0;
    Role role = Role::Wire;
};

/// Homodyne angle and role for every (spatial, temporal) mode of a window.
/// Control/Gate temporal modes are read through the BS3 device: the '-'
/// port (A-B)/sqrt2 at theta_A and the '+' port (A+B)/sqrt2 at theta_B.
struct BasisSchedule {
    int N = 12;
    int K = 228;
    std::vector<Setting> a, b;
    /// Temporal indices of the circuit inputs (B,k) and outputs (B,k), in wire order.
    std::vector<int> inputs, outputs;

    static BasisSchedule defaults(int N, int K) {
        BasisSchedule s;
        s.N = N;
        s.K = K;
        s.a.resize(K);
        s.b.resize(K);
        for (int k = 1; k < K; k += 2) s.a[k] = s.b[k] = {control_angle(k), Role::Control};
        return s;
    }

    Setting &at(Spatial sp, int k) { return sp == Spatial::A ? a.at(k) : b.at(k); }
    const Setting &at(Spatial sp, int k) const { return sp == Spatial::A ? a.at(k) : b.at(k); }
    bool measured(int k) const { return a[k].role == Role::Control || a[k].role == Role::Gate; }
    std::vector<int> references() const {
        std::vector<int> r;
        for (int k : inputs) r.push_back(k - N);
        return r;
    }
    int n_io() const { return static_cast<int>(inputs.size()); }

    std::string to_csv() const {
        std::ostringstream os;
        os.precision(17);
        os << "k,spatial,angle_radians,role\n";
        for (int k = 0; k < K; ++k)
            for (Spatial sp : {Spatial::A, Spatial::B}) {
                const Setting &s = at(sp, k);
                os << k << "," << spatial_char(sp) << "," << s.angle << "," << role_name(s.role) << "\n";
            }
        return os.str();
    }
};

struct FragmentEntry {
    int k;
    double theta_a;
    double theta_b;
};

inline constexpr double kDegenerateSin = 1e-12;

inline void check_teleportation(double theta_a, double theta_b) {
    double s = std::sin(theta_b - theta_a);
    require(std::isfinite(s) && std::abs(s) > kDegenerateSin, ErrorKind::DegenerateGate,
            "sin(theta_-) vanishes, teleportation denominator undefined");
}

inline std::vector<FragmentEntry> basis_for_gate(const GateSpec &g, int N) {
    g.validate(N);
    const double j = g.parity_sign(N);
    std::vector<FragmentEntry> f;
    switch (g.kind) {
        case GateKind::Identity:
        case GateKind::Rotation: {
            double th = g.kind == GateKind::Identity ? 0.0 : g.param;
            f.push_back({g.k, (th - j * kPi / 2) / 2, (th + j * kPi / 2) / 2});
            break;
        }
        case GateKind::ShearF: f.push_back({g.k, 0.0, kPi / 2 - std::atan(g.param / 2)}); break;
        case GateKind::Squeeze: {
            double a = std::atan(std::exp(g.param));
            f.push_back({g.k, -j * a, j * a});
            break;
        }
        case GateKind::CZ: {
            const double a = std::atan(g.param / 2);
            const int k = g.k;
            f.push_back({k, kPi / 4, -kPi / 4});
            f.push_back({k + 2, j * kPi / 4, -j * kPi / 4});
            f.push_back({k + N, j * (kPi / 2 - a), 0.0});
            f.push_back({k + N + 1, j * kPi / 4, j * (kPi / 4 + 2 * a)});
            f.push_back({k + N + 2, j * (kPi / 2 - a), 0.0});
            break;
        }
    }
    for (const auto &e : f)
        if (!(g.kind == GateKind::CZ && e.k == g.k + N + 1)) check_teleportation(e.theta_a, e.theta_b);
    return f;
}

/// j R(theta_+/2) S(tan(theta_-/2)) R(theta_+/2) for a teleportation step.
inline Mat teleportation_symplectic(double theta_a, double theta_b, int j) {
    check_teleportation(theta_a, theta_b);
    const double tp = theta_a + theta_b, tm = theta_b - theta_a;
    const double s = std::tan(tm / 2);
    Mat sq(2, 2);
    sq << 1.0 / s, 0.0, 0.0, s;
    return j * rot2(tp / 2) * sq * rot2(tp / 2);
}

inline Mat fourier_power(int j) { return rot2(j * kPi / 2); }

inline Mat cz_symplectic(double g) {
    Mat c = Mat::Identity(4, 4);
    c(2, 1) = g;
    c(3, 0) = g;
    return c;
}

inline Mat expected_symplectic(const GateSpec &g, int N) {
    g.validate(N);
    const int j = g.parity_sign(N);
    switch (g.kind) {
        case GateKind::Identity: return Mat::Identity(2, 2);
        case GateKind::Rotation: return rot2(g.param);
        case GateKind::ShearF: return fourier_power(j) * shear2(g.param);
        case GateKind::Squeeze: return squeeze2(g.param);
        case GateKind::CZ: return block_diag_modes({fourier_power(1), fourier_power(j)}) * cz_symplectic(g.param);
    }
    return {};
}

/// Two-mode noise covariance of the CZ step in units of e^{-2r} V0, keyed by
/// coupling g and parity of the first wire.
struct CzNoiseEntry {
    double g = 0.0;
    Mat noise_even;
    Mat noise_odd;
    std::vector<double> factors() const {
        std::vector<double> f;
        for (int i = 0; i < 4; ++i) f.push_back(noise_even(i, i));
        return f;
    }
};

struct CzNoiseTable {
    std::string version;
    std::vector<CzNoiseEntry> entries;

    const CzNoiseEntry *find(double g) const {
        for (const auto &e : entries)
            if (std::abs(e.g - g) < 1e-12) return &e;
        return nullptr;
    }
};

/// Per-step noise covariance in units of e^{-2r} V0.
inline Mat step_noise_covariance(const GateSpec &g, int N, const CzNoiseTable *table) {
    if (g.kind != GateKind::CZ) return 4.0 * Mat::Identity(2, 2);
    const CzNoiseEntry *e = table ? table->find(g.param) : nullptr;
    if (!e) throw Error(ErrorKind::NeedsCalibration, "no cached CZ noise for g=" + std::to_string(g.param));
    return g.wire(N) % 2 == 0 ? e->noise_even : e->noise_odd;
}

inline std::vector<double> expected_noise_factors(const GateSpec &g, int N, const CzNoiseTable *table = nullptr) {
    g.validate(N);
    Mat c = step_noise_covariance(g, N, table);
    std::vector<double> f;
    for (int i = 0; i < c.rows(); ++i) f.push_back(c(i, i));
    return f;
}

/// Outcome label: '+'/'-' for BS3 device ports, 'A'/'B' for control values
/// recombined to before BS3.
struct OutcomeLabel {
    char kind = 'A';
    int k = 0;
    bool operator==(const OutcomeLabel &) const = default;
    auto operator<=>(const OutcomeLabel &) const = default;
    std::string str() const { return std::string(1, kind) + "," + std::to_string(k); }
    static OutcomeLabel parse(const std::string &s) {
        require(s.size() >= 3 && s[1] == ',', ErrorKind::InvalidArgument, "bad outcome label " + s);
        return {s[0], std::stoi(s.substr(2))};
    }
};

struct DisplacementTable {
    Mat D;
    std::vector<OutcomeLabel> labels;
};

/// Single-mode by-product: 2x2 block on (m+, m-) and the 2x4 wire block on
/// the neighbouring control values.
inline DisplacementTable displacement_matrix_single(const GateSpec &g, int N) {
    require(g.kind != GateKind::CZ, ErrorKind::InvalidArgument, "single-mode gate expected");
    auto f = basis_for_gate(g, N);
    const double ta = f[0].theta_a, tb = f[0].theta_b;
    const double j = g.parity_sign(N);
    const double pre = j * std::sqrt(2.0) / std::sin(tb - ta);
    const double h = 1.0 / std::sqrt(2.0);
    DisplacementTable t;
    t.D.resize(2, 6);
    t.D << -pre * std::cos(ta), pre * std::cos(tb), -j * h, -j * h, -j * h, j * h,
        pre * std::sin(ta), -pre * std::sin(tb), h, -h, h, h;
    const int k = g.k;
    t.labels = {{'+', k}, {'-', k}, {'A', k - 1}, {'A', k + 1}, {'B', k + N - 1}, {'B', k + N + 1}};
    return t;
}

struct TomographyQuadrant {
    bool out_p = false;
    bool ref_p = false;
};

struct Circuit {
    std::vector<GateSpec> gates;
};

inline BasisSchedule compile_schedule(const Circuit &c, int N, int K, TomographyQuadrant q = {},
                                      bool tag_io = true) {
    BasisSchedule s = BasisSchedule::defaults(N, K);
    ModeIndexer idx{N, K};
    std::set<int> produced, consumed;
    std::vector<int> ins, outs;
    for (const auto &g : c.gates) {
        for (const auto &e : basis_for_gate(g, N)) {
            require(idx.in_window(e.k), ErrorKind::Boundary, "gate fragment outside window: " + g.str());
            require(s.a[e.k].role != Role::Gate, ErrorKind::PlacementConflict,
                    "overlapping gate fragments at k=" + std::to_string(e.k));
            s.a[e.k] = {e.theta_a, Role::Gate};
            s.b[e.k] = {e.theta_b, Role::Gate};
        }
        for (int k : g.inputs()) {
            require(!consumed.count(k), ErrorKind::PlacementConflict, "mode consumed twice: B," + std::to_string(k));
            consumed.insert(k);
            if (produced.count(k))
                produced.erase(k);
            else
                ins.push_back(k);
        }
        for (int k : g.outputs(N)) produced.insert(k);
    }
    outs.assign(produced.begin(), produced.end());
    std::sort(ins.begin(), ins.end());
    require(ins.size() == outs.size(), ErrorKind::PlacementConflict, "circuit inputs and outputs do not pair up");
    for (std::size_t i = 0; i < ins.size(); ++i) {
        require(idx.interior(ins[i] - N - 1) && idx.interior(outs[i] + 1), ErrorKind::Boundary,
                "gate neighbourhood not interior");
        require(idx.wire(ins[i]) == idx.wire(outs[i]), ErrorKind::PlacementConflict, "output wire mismatch");
    }
    s.inputs = ins;
    s.outputs = outs;
    if (tag_io) {
        for (int k : outs) {
            require(s.b[k].role == Role::Wire, ErrorKind::PlacementConflict, "output slot occupied");
            s.b[k] = {q.out_p ? kPi / 2 : 0.0, Role::Output};
        }
        for (int k : ins) {
            require(s.a[k - N].role == Role::Wire, ErrorKind::PlacementConflict, "reference slot occupied");
            s.a[k - N] = {q.ref_p ? kPi / 2 : 0.0, Role::Reference};
        }
    }
    return s;
}

/// Wire pairs left unprocessed: input (B,k) read directly against its
/// reference (A,k-N).  Used for epsilon and input-variance statistics.
inline BasisSchedule companion_schedule(const std::vector<int> &inputs, int N, int K, TomographyQuadrant q = {}) {
    BasisSchedule s = BasisSchedule::defaults(N, K);
    ModeIndexer idx{N, K};
    for (int k : inputs) {
        require(k % 2 == 0 && idx.interior(k - N - 1) && idx.interior(k + 1), ErrorKind::Boundary,
                "companion wire pair not interior");
        s.b[k] = {q.out_p ? kPi / 2 : 0.0, Role::Output};
        s.a[k - N] = {q.ref_p ? kPi / 2 : 0.0, Role::Reference};
    }
    s.inputs = inputs;
    s.outputs = inputs;
    return s;
}

struct ExpectedTransfer {
    Mat S;
    /// Accumulated added-noise covariance in units of e^{-2r} V0.
    Mat noise_cov;
    std::vector<double> noise_factors;
};

/// Ordered product of step symplectics with noise propagated through the
/// downstream steps.  Circuit modes follow the sorted input order.
inline ExpectedTransfer compose_circuit(const Circuit &c, int N, const CzNoiseTable *table = nullptr) {
    std::vector<int> cur;
    {
        std::set<int> produced;
        std::vector<int> ins;
        for (const auto &g : c.gates) {
            for (int k : g.inputs())
                if (produced.count(k))
                    produced.erase(k);
                else
                    ins.push_back(k);
            for (int k : g.outputs(N)) produced.insert(k);
        }
        std::sort(ins.begin(), ins.end());
        cur = ins;
    }
    const int n = static_cast<int>(cur.size());
    ExpectedTransfer t;
    t.S = Mat::Identity(2 * n, 2 * n);
    t.noise_cov = Mat::Zero(2 * n, 2 * n);
    for (const auto &g : c.gates) {
        g.validate(N);
        auto ins = g.inputs();
        auto outs = g.outputs(N);
        std::vector<int> pos;
        for (int k : ins) {
            auto it = std::find(cur.begin(), cur.end(), k);
            require(it != cur.end(), ErrorKind::PlacementConflict, "gate input not on a live mode: " + g.str());
            pos.push_back(static_cast<int>(it - cur.begin()));
        }
        const int m = static_cast<int>(pos.size());
        Mat local = expected_symplectic(g, N);
        Mat lnoise = step_noise_covariance(g, N, table);
        Mat step = Mat::Identity(2 * n, 2 * n), nstep = Mat::Zero(2 * n, 2 * n);
        for (int a = 0; a < 2 * m; ++a)
            for (int b = 0; b < 2 * m; ++b) {
                int ra = (a < m ? 0 : n) + pos[a % m], rb = (b < m ? 0 : n) + pos[b % m];
                step(ra, rb) = local(a, b);
                nstep(ra, rb) = lnoise(a, b);
            }
        t.S = step * t.S;
        t.noise_cov = step * t.noise_cov * step.transpose() + nstep;
        for (int i = 0; i < m; ++i) cur[pos[i]] = outs[i];
    }
    for (int i = 0; i < 2 * n; ++i) t.noise_factors.push_back(t.noise_cov(i, i));
    return t;
}

/// Encoder on wires w0, w0+1, w0+2 starting at input k0: two F F C_Z(1) steps,
/// R(-pi/2) and R(pi/2) on the outer wires, and eight identities.
inline Circuit encoder_circuit(int k0, int N) {
    Circuit c;
    const int k = k0;
    c.gates.push_back(GateSpec::cz(1.0, k));
    c.gates.push_back(GateSpec::identity(k + 4));
    c.gates.push_back(GateSpec::identity(k + 4 + N));
    c.gates.push_back(GateSpec::identity(k + 2 * N));
    c.gates.push_back(GateSpec::cz(1.0, k + 2 * N + 2));
    c.gates.push_back(GateSpec::identity(k + 3 * N));
    c.gates.push_back(GateSpec::rotation(-kPi / 2, k + 4 * N));
    c.gates.push_back(GateSpec::identity(k + 4 * N + 2));
    c.gates.push_back(GateSpec::rotation(kPi / 2, k + 4 * N + 4));
    for (int t : {0, 2, 4}) c.gates.push_back(GateSpec::identity(k + 5 * N + t));
    return c;
}

/// Smallest interior input index on wire w.
inline int first_placement(int w, int N) {
    int k = 2 * N + 2;
    while ((k % N) / 2 != w) k += 2;
    return k;
}

}  // namespace cvmbqc

#endif  // CVMBQC_GATES_HPP
