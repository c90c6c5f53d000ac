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

// Brute-force tensor-product construction of the two-atom, two-cavity, fiber
// Hamiltonian used as an oracle for the reduced 18-state model.

#pragma once

#include <array>
#include <optional>
#include <tuple>
#include <vector>

#include "sa3d/model.hpp"

namespace sa3d::oracle {

// Factors: atom A (4) x atom B (5) x six single-photon modes, each 0 or 1, in
// the order cavA L, cavA R, fiber L, fiber R, cavB L, cavB R.
constexpr int kModes = 6;
constexpr int kDim = 4 * 5 * (1 << kModes);

enum Mode { cAL, cAR, fL, fR, cBL, cBR };

struct Product {
    int a;     // AtomALevel
    int b;     // AtomBLevel
    int bits;  // photon occupations
};

inline int index_of(const Product& p) { return (p.a * 5 + p.b) * (1 << kModes) + p.bits; }
inline Product product_of(int i) { return {i / (5 << kModes), (i >> kModes) % 5, i & ((1 << kModes) - 1)}; }

inline int mode_bits(Photon p, Mode left, Mode right) {
    if (p == Photon::L) return 1 << left;
    if (p == Photon::R) return 1 << right;
    return 0;
}

inline int embed(const BasisState& s) {
    const int bits = mode_bits(s.cav_a, cAL, cAR) | mode_bits(s.fiber, fL, fR) | mode_bits(s.cav_b, cBL, cBR);
    return index_of({static_cast<int>(s.atom_a), static_cast<int>(s.atom_b), bits});
}

// Returns the 18-state label of a product state if it has one photon at most
// per cavity/fiber.
inline std::optional<BasisState> label_of(const Product& p) {
    auto photon = [&](Mode l, Mode r) -> std::optional<Photon> {
        const bool bl = p.bits >> l & 1, br = p.bits >> r & 1;
        if (bl && br) return std::nullopt;
        return bl ? Photon::L : br ? Photon::R : Photon::vac;
    };
    auto ca = photon(cAL, cAR), f = photon(fL, fR), cb = photon(cBL, cBR);
    if (!ca || !f || !cb) return std::nullopt;
    return BasisState{static_cast<AtomALevel>(p.a), static_cast<AtomBLevel>(p.b), *ca, *f, *cb};
}

using Dense = Eigen::MatrixXd;

// |to><from| on one atom.
inline Dense atom_a_op(AtomALevel to, AtomALevel from) {
    Dense m = Dense::Zero(kDim, kDim);
    for (int i = 0; i < kDim; ++i) {
        Product p = product_of(i);
        if (p.a != static_cast<int>(from)) continue;
        p.a = static_cast<int>(to);
        m(index_of(p), i) = 1.0;
    }
    return m;
}

inline Dense atom_b_op(AtomBLevel to, AtomBLevel from) {
    Dense m = Dense::Zero(kDim, kDim);
    for (int i = 0; i < kDim; ++i) {
        Product p = product_of(i);
        if (p.b != static_cast<int>(from)) continue;
        p.b = static_cast<int>(to);
        m(index_of(p), i) = 1.0;
    }
    return m;
}

inline Dense annihilate(Mode k) {
    Dense m = Dense::Zero(kDim, kDim);
    for (int i = 0; i < kDim; ++i) {
        if (!(i >> k & 1)) continue;
        m(i & ~(1 << k), i) = 1.0;
    }
    return m;
}

// H(t) for real couplings, term by term from the interaction picture model.
inline Dense tensor_hamiltonian(const ModelParams& p, double omega_a, double omega_b) {
    using A = AtomALevel;
    using B = AtomBLevel;
    Dense h = omega_a * atom_a_op(A::g, A::e);
    const std::array<std::tuple<A, B, B, Mode, Mode, Mode>, 2> pol{
        {{A::L, B::L, B::eL, cAL, fL, cBL}, {A::R, B::R, B::eR, cAR, fR, cBR}}};
    for (const auto& [ai, bi, bei, ca, f, cb] : pol) {
        h += omega_b * atom_b_op(bi, bei);
        h += p.g_a * annihilate(ca) * atom_a_op(A::e, ai);
        h += p.g_b * annihilate(cb) * atom_b_op(bei, B::g);
        h += p.v * annihilate(f) * (annihilate(ca).transpose() + annihilate(cb).transpose());
    }
    return h + h.transpose().eval();
}

inline std::vector<Dense> tensor_jumps() {
    using A = AtomALevel;
    using B = AtomBLevel;
    std::vector<Dense> j;
    for (A to : {A::g, A::L, A::R}) j.push_back(atom_a_op(to, A::e));
    for (B e : {B::eL, B::eR})
        for (B to : {B::g, B::L, B::R}) j.push_back(atom_b_op(to, e));
    for (Mode k : {cAL, cAR, cBL, cBR, fL, fR}) j.push_back(annihilate(k));
    return j;
}

}  // namespace sa3d::oracle
