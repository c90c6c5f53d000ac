// Copyright 2026 The sa3d Authors
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

// Hamiltonians, adiabatic / superadiabatic frames and dissipators.
//
// Effective three-level objects act on the ordered basis
// {|phi_1>, |Psi_d>, |psi_5>}; adiabatic-frame objects act on the ordered
// basis {|n'_+>, |n'_0>, |n'_->}.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "hilbert.hpp"

namespace sa3d {

inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kSqrt3 = std::numbers::sqrt3;

/// Couplings of the atom-cavity-fiber system. All four are stored so that the
/// physical couplings can be detuned from the reference `g` the pulses are
/// designed for.
struct ModelParams {
    double g_a = 70.0 / kSqrt2;
    double g_b = 70.0;
    double v = 70.0;
    double g = 70.0;
    double t_f = 1.0;

    /// sqrt(2) g_A = v = g_B = g.
    static ModelParams nominal(double g, double t_f = 1.0) {
        ModelParams p{g / kSqrt2, g, g, g, t_f};
        p.validate();
        return p;
    }

    /// Nominal point with fractional offsets (x' = x (1 + delta)) on the
    /// individual physical couplings. `g` itself stays the design reference.
    static ModelParams deviated(double g, double t_f, double dg_a, double dg_b, double dv) {
        ModelParams p{g / kSqrt2 * (1.0 + dg_a), g * (1.0 + dg_b), g * (1.0 + dv), g, t_f};
        p.validate();
        return p;
    }

    void validate() const {
        if (!(g_a > 0 && g_b > 0 && v > 0 && g > 0)) throw invalid_input("couplings must be positive");
        if (!(t_f > 0)) throw invalid_input("t_f must be positive");
    }

    bool is_nominal(double tol = 1e-12) const {
        const double s = tol * g;
        return std::abs(kSqrt2 * g_a - g) <= s && std::abs(v - g) <= s && std::abs(g_b - g) <= s;
    }
};

// ---------------------------------------------------------------------------
// Reduced states

/// (|phi_{2k+1}> + |phi_{2k+2}>)/sqrt2, k = 1..5.
inline StateVector psi_plus(const StateSpace& s, int k) {
    if (k < 1 || k > 5) throw invalid_input("psi index must be in 1..5");
    return superpose({{1.0, phi(s, 2 * k + 1)}, {1.0, phi(s, 2 * k + 2)}}).state;
}

/// (|phi_{2k+1}> - |phi_{2k+2}>)/sqrt2, k = 1..5.
inline StateVector psi_minus(const StateSpace& s, int k) {
    if (k < 1 || k > 5) throw invalid_input("psi index must be in 1..5");
    return superpose({{1.0, phi(s, 2 * k + 1)}, {-1.0, phi(s, 2 * k + 2)}}).state;
}

/// Zero-energy eigenstate of H0: (|phi_2> - |psi_2> + |psi_4>)/sqrt3.
inline StateVector psi_d(const StateSpace& s) {
    return superpose({{1.0, phi(s, 2)}, {-1.0, psi_plus(s, 2)}, {1.0, psi_plus(s, 4)}}).state;
}

/// H0 eigenstate with eigenvalue +-g (sign = +1 / -1).
inline StateVector psi_1(const StateSpace& s, int sign) {
    const double pm = sign >= 0 ? 1.0 : -1.0;
    StateVector v = -0.5 * (phi(s, 2) + pm * (psi_plus(s, 1) - psi_plus(s, 3)) - psi_plus(s, 4));
    return v;
}

/// H0 eigenstate with eigenvalue +-sqrt3 g.
inline StateVector psi_2(const StateSpace& s, int sign) {
    const double pm = sign >= 0 ? 1.0 : -1.0;
    StateVector v = (phi(s, 2) + 2.0 * psi_plus(s, 2) + pm * kSqrt3 * (psi_plus(s, 1) + psi_plus(s, 3)) +
                     psi_plus(s, 4)) /
                    (2.0 * kSqrt3);
    return v;
}

/// Target (|g g> + |L L> + |R R>)/sqrt3 with all fields in vacuum.
inline StateVector target_state(const StateSpace& s) {
    return superpose({{1.0, phi(s, 1)}, {1.0, phi(s, 11)}, {1.0, phi(s, 12)}}).state;
}

// ---------------------------------------------------------------------------
// Full model

/// Interaction Hamiltonian on the 18-state space for instantaneous Rabi
/// frequencies Omega_A, Omega_B. Sink rows and columns are zero.
inline OperatorMatrix full_hamiltonian(const ModelParams& p, double omega_a, double omega_b) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(18, 18);
    auto couple = [&h](int i, int j, double x) {
        h(i - 1, j - 1) += x;
        h(j - 1, i - 1) += x;
    };
    couple(1, 2, omega_a);
    couple(2, 3, p.g_a);
    couple(2, 4, p.g_a);
    couple(3, 5, p.v);
    couple(4, 6, p.v);
    couple(5, 7, p.v);
    couple(6, 8, p.v);
    couple(7, 9, p.g_b);
    couple(8, 10, p.g_b);
    couple(9, 11, omega_b);
    couple(10, 12, omega_b);
    return {std::move(h), true};
}

struct H0VDecomposition {
    OperatorMatrix h0;
    OperatorMatrix v;
};

/// Splits the symmetric-sector Hamiltonian into the static dressed part H0 and
/// the drive V, both written over the dressed basis. Only valid at the
/// nominal coupling point.
inline H0VDecomposition h0_v_decomposition(const ModelParams& p, double omega_a, double omega_b) {
    if (!p.is_nominal(1e-9)) throw invalid_input("h0_v_decomposition requires sqrt2 g_A = v = g_B = g");
    const StateSpace s;
    const double g = p.g;
    const StateVector d = psi_d(s);
    const StateVector p1p = psi_1(s, +1), p1m = psi_1(s, -1);
    const StateVector p2p = psi_2(s, +1), p2m = psi_2(s, -1);
    const StateVector f1 = phi(s, 1), q5 = psi_plus(s, 5);

    Eigen::MatrixXcd h0 = g * (projector(p1p) - projector(p1m)) + kSqrt3 * g * (projector(p2p) - projector(p2m));

    const StateVector bra_a = d - (kSqrt3 / 2.0) * (p1p + p1m) + 0.5 * (p2p + p2m);
    const StateVector ket_b = d + (kSqrt3 / 2.0) * (p1p + p1m) + 0.5 * (p2p + p2m);
    Eigen::MatrixXcd v = (omega_a / kSqrt3) * outer(f1, bra_a) + (omega_b / kSqrt3) * outer(ket_b, q5);
    v += v.adjoint().eval();
    return {{std::move(h0), true}, {std::move(v), true}};
}

// ---------------------------------------------------------------------------
// Effective three-level model

using Vec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3cd;

namespace eff {
inline constexpr int kPhi1 = 0;
inline constexpr int kPsiD = 1;
inline constexpr int kPsi5 = 2;
}  // namespace eff

namespace adiabatic {
inline constexpr int kPlus = 0;
inline constexpr int kZero = 1;
inline constexpr int kMinus = 2;
}  // namespace adiabatic

inline Mat3 effective_hamiltonian(double omega1, double omega2) {
    Mat3 h = Mat3::Zero();
    h(eff::kPhi1, eff::kPsiD) = h(eff::kPsiD, eff::kPhi1) = omega1;
    h(eff::kPsiD, eff::kPsi5) = h(eff::kPsi5, eff::kPsiD) = omega2;
    return h;
}

/// Lifts an effective-basis vector to the 18-state space.
inline StateVector embed_effective(const StateSpace& s, const Vec3& x) {
    return x(eff::kPhi1) * phi(s, 1) + x(eff::kPsiD) * psi_d(s) + x(eff::kPsi5) * psi_plus(s, 5);
}

/// theta0, theta1, Omega, Omega' and their rates at one instant.
struct FrameAngles {
    double theta0 = 0.0;
    double theta0_dot = 0.0;
    double theta1 = 0.0;
    double theta1_dot = 0.0;
    double omega = 0.0;
    double omega_prime = 0.0;
    /// Reference amplitude (Omega_0) for the degeneracy threshold.
    double omega_scale = 1.0;
};

inline constexpr double kDegeneracyRatio = 1e-12;

struct EigenTriple {
    Vec3 plus;
    Vec3 minus;
    Vec3 zero;
};

/// Instantaneous eigenstates of the effective Hamiltonian, eigenvalues +Omega,
/// -Omega, 0, with the signs of the textbook dark/bright decomposition.
inline EigenTriple adiabatic_eigenstates(const FrameAngles& a) {
    if (!(a.omega >= kDegeneracyRatio * a.omega_scale)) throw frame_degenerate("Omega vanishes; adiabatic basis undefined");
    const double s = std::sin(a.theta0), c = std::cos(a.theta0);
    EigenTriple t;
    t.plus = Vec3(s, 1.0, c) / kSqrt2;
    t.minus = Vec3(s, -1.0, c) / kSqrt2;
    t.zero = Vec3(c, 0.0, -s);
    return t;
}

namespace detail {
inline Mat3 rows_from_conjugates(const Vec3& plus, const Vec3& zero, const Vec3& minus) {
    Mat3 u;
    u.row(adiabatic::kPlus) = plus.adjoint();
    u.row(adiabatic::kZero) = zero.adjoint();
    u.row(adiabatic::kMinus) = minus.adjoint();
    return u;
}
}  // namespace detail

/// U0 = sum_k |n'_k><n_k(t)|, depends on theta0 only.
inline Mat3 adiabatic_transform(double theta0) {
    FrameAngles a;
    a.theta0 = theta0;
    a.omega = 1.0;
    const auto n = adiabatic_eigenstates(a);
    return detail::rows_from_conjugates(n.plus, n.zero, n.minus);
}

inline Mat3 adiabatic_frame_hamiltonian(const FrameAngles& a) {
    const cplx c = kI * a.theta0_dot / kSqrt2;
    Mat3 h = Mat3::Zero();
    h(adiabatic::kPlus, adiabatic::kPlus) = a.omega;
    h(adiabatic::kMinus, adiabatic::kMinus) = -a.omega;
    h(adiabatic::kPlus, adiabatic::kZero) = c;
    h(adiabatic::kMinus, adiabatic::kZero) = c;
    h(adiabatic::kZero, adiabatic::kPlus) = std::conj(c);
    h(adiabatic::kZero, adiabatic::kMinus) = std::conj(c);
    return h;
}

/// First-iteration counterdiabatic term: i theta0_dot (|phi1><psi5| - h.c.).
/// Effective-level comparator only; never lifted to the full model.
inline Mat3 cd1(const FrameAngles& a) {
    Mat3 h = Mat3::Zero();
    h(eff::kPhi1, eff::kPsi5) = kI * a.theta0_dot;
    h(eff::kPsi5, eff::kPhi1) = -kI * a.theta0_dot;
    return h;
}

/// Eigenstates of the adiabatic-frame Hamiltonian (components in the n' basis),
/// eigenvalues +Omega', -Omega', 0.
inline EigenTriple superadiabatic_states(const FrameAngles& a) {
    if (!(a.omega_prime >= kDegeneracyRatio * a.omega_scale))
        throw frame_degenerate("Omega' vanishes; superadiabatic basis undefined");
    const double s = std::sin(a.theta1), c = std::cos(a.theta1);
    auto in_nprime = [](cplx plus, cplx zero, cplx minus) {
        Vec3 v;
        v(adiabatic::kPlus) = plus;
        v(adiabatic::kZero) = zero;
        v(adiabatic::kMinus) = minus;
        return v;
    };
    EigenTriple t;
    t.plus = in_nprime(kI * (1.0 + c), kSqrt2 * s, kI * (1.0 - c)) / 2.0;
    t.minus = in_nprime(kI * (1.0 - c), -kSqrt2 * s, kI * (1.0 + c)) / 2.0;
    t.zero = in_nprime(-kI * s, kSqrt2 * c, kI * s) / kSqrt2;
    return t;
}

/// U1 = sum_k |n~_k><n''_k(t)|, depends on theta1 only.
inline Mat3 superadiabatic_transform(double theta1) {
    FrameAngles a;
    a.theta1 = theta1;
    a.omega_prime = 1.0;
    const auto n = superadiabatic_states(a);
    return detail::rows_from_conjugates(n.plus, n.zero, n.minus);
}

/// Second-iteration counterdiabatic term, -i U0^dag U1^dag dU1/dt U0 in the
/// effective basis. Same coupling pattern as the effective Hamiltonian, so it
/// is realized by adding (Omega'_1, Omega'_2) = (cd2(0,1), cd2(1,2)) to the
/// drives.
inline Mat3 cd2(const FrameAngles& a) {
    return effective_hamiltonian(a.theta1_dot * std::cos(a.theta0), -a.theta1_dot * std::sin(a.theta0));
}

// ---------------------------------------------------------------------------
// Dissipation

struct CollapseChannel {
    std::string name;
    double rate = 0.0;  // coefficient of D[c] rho = c rho c^dag - {c^dag c, rho}/2
    OperatorMatrix op;
};

namespace detail {

inline OperatorMatrix jump_operator(const std::function<std::optional<BasisState>(const BasisState&)>& act) {
    const StateSpace s;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(18, 18);
    for (std::size_t src = 0; src < s.dimension(); ++src) {
        if (auto dst = act(s[src])) {
            m(static_cast<Eigen::Index>(s.index_of(*dst)), static_cast<Eigen::Index>(src)) = 1.0;
        }
    }
    return {std::move(m), false};
}

}  // namespace detail

/// Collapse channels for spontaneous emission and cavity/fiber leakage:
/// atom A e -> {g, L, R} and atom B e_i -> {g, L, R} at gamma/2 each, every
/// cavity and fiber polarization mode at kappa.
inline std::vector<CollapseChannel> lindblad_channels(const ModelParams& /*params*/, double gamma, double kappa) {
    if (!(gamma >= 0.0) || !(kappa >= 0.0)) throw invalid_input("decay rates must be non-negative");
    std::vector<CollapseChannel> out;
    out.reserve(15);

    constexpr std::array a_targets{AtomALevel::g, AtomALevel::L, AtomALevel::R};
    for (AtomALevel j : a_targets) {
        auto op = detail::jump_operator([j](const BasisState& b) -> std::optional<BasisState> {
            if (b.atom_a != AtomALevel::e) return std::nullopt;
            BasisState r = b;
            r.atom_a = j;
            return r;
        });
        out.push_back({"A:" + std::string(to_string(j)) + "<-e", gamma / 2.0, std::move(op)});
    }

    constexpr std::array b_excited{AtomBLevel::eL, AtomBLevel::eR};
    constexpr std::array b_targets{AtomBLevel::g, AtomBLevel::L, AtomBLevel::R};
    for (AtomBLevel ei : b_excited) {
        for (AtomBLevel j : b_targets) {
            auto op = detail::jump_operator([ei, j](const BasisState& b) -> std::optional<BasisState> {
                if (b.atom_b != ei) return std::nullopt;
                BasisState r = b;
                r.atom_b = j;
                return r;
            });
            out.push_back({"B:" + std::string(to_string(j)) + "<-" + std::string(to_string(ei)), gamma / 2.0,
                           std::move(op)});
        }
    }

    auto photon_loss = [](Photon BasisState::*field, Photon pol) {
        return detail::jump_operator([field, pol](const BasisState& b) -> std::optional<BasisState> {
            if (b.*field != pol) return std::nullopt;
            BasisState r = b;
            r.*field = Photon::vac;
            return r;
        });
    };
    for (Photon pol : {Photon::L, Photon::R}) {
        out.push_back({"cavA:" + std::string(to_string(pol)), kappa, photon_loss(&BasisState::cav_a, pol)});
    }
    for (Photon pol : {Photon::L, Photon::R}) {
        out.push_back({"cavB:" + std::string(to_string(pol)), kappa, photon_loss(&BasisState::cav_b, pol)});
    }
    for (Photon pol : {Photon::L, Photon::R}) {
        out.push_back({"fiber:" + std::string(to_string(pol)), kappa, photon_loss(&BasisState::fiber, pol)});
    }
    return out;
}

}  // namespace sa3d
