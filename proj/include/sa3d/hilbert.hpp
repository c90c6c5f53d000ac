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

// Computational basis for the two-atom / two-cavity / fiber system.
//
// Only the single-excitation manifold reachable from |g,g;0,0,0> plus the
// zero-excitation states that the dissipators feed are kept, 18 states in
// total. Index order is fixed:
//
//   0..11   phi_1 .. phi_12   (single-excitation manifold)
//   12..17  |L g>, |R g>, |g L>, |g R>, |L R>, |R L>  (x vacuum, decay sinks)
#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace sa3d {

using cplx = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;

inline constexpr cplx kI{0.0, 1.0};

enum class AtomALevel { L, g, R, e };
enum class AtomBLevel { L, g, R, eL, eR };
/// Content of one field location: vacuum or one photon of given polarization.
enum class Photon { vac, L, R };

constexpr std::string_view to_string(AtomALevel l) {
    switch (l) {
        case AtomALevel::L: return "L";
        case AtomALevel::g: return "g";
        case AtomALevel::R: return "R";
        case AtomALevel::e: return "e";
    }
    return "?";
}

constexpr std::string_view to_string(AtomBLevel l) {
    switch (l) {
        case AtomBLevel::L: return "L";
        case AtomBLevel::g: return "g";
        case AtomBLevel::R: return "R";
        case AtomBLevel::eL: return "eL";
        case AtomBLevel::eR: return "eR";
    }
    return "?";
}

constexpr std::string_view to_string(Photon p) {
    switch (p) {
        case Photon::vac: return "0";
        case Photon::L: return "L";
        case Photon::R: return "R";
    }
    return "?";
}

struct BasisState {
    AtomALevel atom_a = AtomALevel::g;
    AtomBLevel atom_b = AtomBLevel::g;
    Photon cav_a = Photon::vac;
    Photon fiber = Photon::vac;
    Photon cav_b = Photon::vac;

    friend constexpr bool operator==(const BasisState&, const BasisState&) = default;

    constexpr int excitations() const {
        int n = 0;
        if (atom_a == AtomALevel::e) ++n;
        if (atom_b == AtomBLevel::eL || atom_b == AtomBLevel::eR) ++n;
        for (Photon p : {cav_a, fiber, cav_b}) {
            if (p != Photon::vac) ++n;
        }
        return n;
    }

    std::string label() const {
        std::string s = "|";
        s += to_string(atom_a);
        s += ",";
        s += to_string(atom_b);
        s += ";";
        s += to_string(cav_a);
        s += ",";
        s += to_string(fiber);
        s += ",";
        s += to_string(cav_b);
        s += ">";
        return s;
    }
};

inline std::ostream& operator<<(std::ostream& os, const BasisState& b) { return os << b.label(); }

namespace detail {

inline constexpr std::array<BasisState, 18> kBasis = {{
    // phi_1 .. phi_12
    {AtomALevel::g, AtomBLevel::g, Photon::vac, Photon::vac, Photon::vac},
    {AtomALevel::e, AtomBLevel::g, Photon::vac, Photon::vac, Photon::vac},
    {AtomALevel::L, AtomBLevel::g, Photon::L, Photon::vac, Photon::vac},
    {AtomALevel::R, AtomBLevel::g, Photon::R, Photon::vac, Photon::vac},
    {AtomALevel::L, AtomBLevel::g, Photon::vac, Photon::L, Photon::vac},
    {AtomALevel::R, AtomBLevel::g, Photon::vac, Photon::R, Photon::vac},
    {AtomALevel::L, AtomBLevel::g, Photon::vac, Photon::vac, Photon::L},
    {AtomALevel::R, AtomBLevel::g, Photon::vac, Photon::vac, Photon::R},
    {AtomALevel::L, AtomBLevel::eL, Photon::vac, Photon::vac, Photon::vac},
    {AtomALevel::R, AtomBLevel::eR, Photon::vac, Photon::vac, Photon::vac},
    {AtomALevel::L, AtomBLevel::L, Photon::vac, Photon::vac, Photon::vac},
    {AtomALevel::R, AtomBLevel::R, Photon::vac, Photon::vac, Photon::vac},
    // sinks
    {AtomALevel::L, AtomBLevel::g, Photon::vac, Photon::vac, Photon::vac},
    {AtomALevel::R, AtomBLevel::g, Photon::vac, Photon::vac, Photon::vac},
    {AtomALevel::g, AtomBLevel::L, Photon::vac, Photon::vac, Photon::vac},
    {AtomALevel::g, AtomBLevel::R, Photon::vac, Photon::vac, Photon::vac},
    {AtomALevel::L, AtomBLevel::R, Photon::vac, Photon::vac, Photon::vac},
    {AtomALevel::R, AtomBLevel::L, Photon::vac, Photon::vac, Photon::vac},
}};

}  // namespace detail

/// Ordered, immutable basis. Cheap to copy; every instance is identical.
class StateSpace {
public:
    static constexpr std::size_t kDim = 18;
    static constexpr std::size_t kManifoldDim = 12;

    constexpr std::size_t dimension() const { return kDim; }
    std::span<const BasisState, kDim> states() const { return detail::kBasis; }
    const BasisState& operator[](std::size_t i) const { return detail::kBasis.at(i); }

    /// Index of a basis label; throws invalid_input if the label is not admitted.
    std::size_t index_of(const BasisState& s) const {
        for (std::size_t i = 0; i < kDim; ++i) {
            if (detail::kBasis[i] == s) return i;
        }
        throw invalid_input("basis state " + s.label() + " is not in the 18-state space");
    }

    bool contains(const BasisState& s) const {
        for (const auto& b : detail::kBasis) {
            if (b == s) return true;
        }
        return false;
    }

    /// 0-based index of phi_k, k = 1..12.
    static std::size_t phi_index(int k) {
        if (k < 1 || k > 12) throw invalid_input("phi index must be in 1..12");
        return static_cast<std::size_t>(k - 1);
    }

    static constexpr std::size_t sink_begin() { return kManifoldDim; }
};

inline StateSpace build_state_space() { return {}; }

inline StateVector ket(const StateSpace& space, const BasisState& label) {
    StateVector v = StateVector::Zero(static_cast<Eigen::Index>(space.dimension()));
    v(static_cast<Eigen::Index>(space.index_of(label))) = 1.0;
    return v;
}

/// |phi_k>, k = 1..12.
inline StateVector phi(const StateSpace& space, int k) { return ket(space, space[StateSpace::phi_index(k)]); }

struct Superposition {
    StateVector state;
    double raw_norm = 0.0;  // norm before normalization
};

inline Superposition superpose(std::span<const std::pair<cplx, StateVector>> terms) {
    if (terms.empty()) throw degenerate_input("superpose: no terms");
    const Eigen::Index n = terms.front().second.size();
    StateVector acc = StateVector::Zero(n);
    for (const auto& [c, v] : terms) {
        if (v.size() != n) throw invalid_input("superpose: vectors over different spaces");
        acc += c * v;
    }
    const double norm = acc.norm();
    if (!(norm > 1e-14)) throw degenerate_input("superpose: result is the zero vector");
    return {acc / norm, norm};
}

inline Superposition superpose(std::initializer_list<std::pair<cplx, StateVector>> terms) {
    return superpose(std::span<const std::pair<cplx, StateVector>>(terms.begin(), terms.size()));
}

/// Square complex matrix over some basis; `hermitian` records intent and is
/// checked by `hermitian_defect`.
struct OperatorMatrix {
    Eigen::MatrixXcd entries;
    bool hermitian = false;

    Eigen::Index dimension() const { return entries.rows(); }

    OperatorMatrix adjoint() const { return {entries.adjoint(), hermitian}; }

    double hermitian_defect() const {
        if (entries.size() == 0) return 0.0;
        return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    }

    StateVector operator*(const StateVector& v) const { return entries * v; }
};

/// |a><b| on the 18-state space.
inline Eigen::MatrixXcd outer(const StateVector& a, const StateVector& b) { return a * b.adjoint(); }

/// Projector onto a (normalized) state.
inline Eigen::MatrixXcd projector(const StateVector& v) { return v * v.adjoint(); }

}  // namespace sa3d
