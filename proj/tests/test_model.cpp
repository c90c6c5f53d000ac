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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "sa3d/model.hpp"
#include "sa3d/pulses.hpp"

using namespace sa3d;

namespace {

std::vector<double> sorted_real_eigenvalues(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.begin(), v.end());
    return v;
}

Eigen::MatrixXcd symmetric_sector_projector(const StateSpace& s) {
    Eigen::MatrixXcd p = projector(phi(s, 1)) + projector(phi(s, 2));
    for (int k = 1; k <= 5; ++k) p += projector(psi_plus(s, k));
    return p;
}

FrameAngles angles_at(double t) { return superadiabatic_angle(StirapPulses(StirapParams::defaults(8.0)), t); }

}  // namespace

TEST(FullHamiltonian, ChainCouplings) {
    const ModelParams p{1.1, 2.2, 3.3, 4.4, 1.0};
    const auto h = full_hamiltonian(p, 0.5, 0.7).entries;
    EXPECT_EQ(h.rows(), 18);
    EXPECT_EQ(h(0, 1), cplx(0.5));
    EXPECT_EQ(h(1, 2), cplx(1.1));
    EXPECT_EQ(h(1, 3), cplx(1.1));
    EXPECT_EQ(h(2, 4), cplx(3.3));
    EXPECT_EQ(h(5, 7), cplx(3.3));
    EXPECT_EQ(h(6, 8), cplx(2.2));
    EXPECT_EQ(h(9, 11), cplx(0.7));
    EXPECT_EQ(h(8, 10), cplx(0.7));
    EXPECT_EQ(h(2, 3), cplx(0.0));
    EXPECT_EQ((h - h.adjoint()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(h.bottomRows(6).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(h.rightCols(6).cwiseAbs().maxCoeff(), 0.0);
}

TEST(FullHamiltonian, AntisymmetricStatesDecouple) {
    const StateSpace s;
    const auto h = full_hamiltonian(ModelParams{0.9, 1.3, 1.7, 1.0, 1.0}, 2.1, -0.4).entries;
    const Eigen::MatrixXcd ps = symmetric_sector_projector(s);
    for (int k = 1; k <= 5; ++k) EXPECT_NEAR((ps * h * psi_minus(s, k)).norm(), 0.0, 1e-14) << k;
}

TEST(H0V, DressedSpectrum) {
    const double g = 70.0;
    const auto d = h0_v_decomposition(ModelParams::nominal(g), 0.0, 0.0);
    const auto ev = sorted_real_eigenvalues(d.h0.entries);
    const double s3 = std::sqrt(3.0) * g;
    EXPECT_NEAR(ev.front(), -s3, 1e-10);
    EXPECT_NEAR(ev[1], -g, 1e-10);
    EXPECT_NEAR(ev[16], g, 1e-10);
    EXPECT_NEAR(ev.back(), s3, 1e-10);
    for (int i = 2; i < 16; ++i) EXPECT_NEAR(ev[i], 0.0, 1e-10);
    EXPECT_EQ(d.v.entries.cwiseAbs().maxCoeff(), 0.0);
}

TEST(H0V, SumEqualsProjectedHamiltonian) {
    const StateSpace s;
    const ModelParams p = ModelParams::nominal(70.0);
    const Eigen::MatrixXcd ps = symmetric_sector_projector(s);
    for (auto [oa, ob] : {std::pair{0.0, 0.0}, {3.0, -5.0}, {-12.0, 7.5}}) {
        const auto d = h0_v_decomposition(p, oa, ob);
        const Eigen::MatrixXcd proj = ps * full_hamiltonian(p, oa, ob).entries * ps;
        EXPECT_NEAR((d.h0.entries + d.v.entries - proj).cwiseAbs().maxCoeff(), 0.0, 1e-12);
    }
}

TEST(H0V, RejectsOffNominalCouplings) {
    EXPECT_THROW(h0_v_decomposition(ModelParams::deviated(70.0, 1.0, 0.0, 0.0, 0.05), 1.0, 1.0), invalid_input);
    EXPECT_TRUE(ModelParams::nominal(30.0).is_nominal());
    EXPECT_THROW(ModelParams::nominal(-1.0), invalid_input);
}

TEST(Effective, EigenvaluesForThreeFour) {
    const auto ev = sorted_real_eigenvalues(effective_hamiltonian(3.0, 4.0));
    EXPECT_NEAR(ev[0], -5.0, 1e-12);
    EXPECT_NEAR(ev[1], 0.0, 1e-12);
    EXPECT_NEAR(ev[2], 5.0, 1e-12);
}

TEST(Effective, EmbedMapsOntoReducedStates) {
    const StateSpace s;
    const StateVector v = embed_effective(s, Vec3(0, 1, 0));
    EXPECT_NEAR((v - psi_d(s)).norm(), 0.0, 1e-15);
}

TEST(Adiabatic, EigenstatesSolveEffectiveHamiltonian) {
    const StirapPulses pulses(StirapParams::defaults(8.0));
    for (double t : {0.1, 0.37, 0.5, 0.81}) {
        const FrameAngles a = mixing_angle(pulses, t);
        const Mat3 h = effective_hamiltonian(pulses.omega1(t).value, pulses.omega2(t).value);
        const EigenTriple e = adiabatic_eigenstates(a);
        EXPECT_NEAR((h * e.plus - a.omega * e.plus).norm(), 0.0, 1e-12);
        EXPECT_NEAR((h * e.minus + a.omega * e.minus).norm(), 0.0, 1e-12);
        EXPECT_NEAR((h * e.zero).norm(), 0.0, 1e-12);
        EXPECT_NEAR((adiabatic_transform(a.theta0) * adiabatic_transform(a.theta0).adjoint() - Mat3::Identity()).norm(), 0.0,
                    1e-14);
    }
}

TEST(Adiabatic, DarkStateMatchesTargetAtTheEnd) {
    FrameAngles a;
    a.theta0 = -std::atan(std::sqrt(2.0));
    a.omega = 1.0;
    const Vec3 n0 = adiabatic_eigenstates(a).zero;
    EXPECT_NEAR(std::abs(n0.dot(Vec3(1.0, 0.0, std::sqrt(2.0)) / std::sqrt(3.0))), 1.0, 1e-15);
}

TEST(Adiabatic, DegenerateFrameThrows) {
    FrameAngles a;
    a.omega = 0.0;
    EXPECT_THROW(adiabatic_eigenstates(a), frame_degenerate);
    EXPECT_THROW(superadiabatic_states(a), frame_degenerate);
}

TEST(Superadiabatic, StatesDiagonalizeAdiabaticFrameHamiltonian) {
    for (double t : {0.2, 0.45, 0.66}) {
        const FrameAngles a = angles_at(t);
        const Mat3 h1 = adiabatic_frame_hamiltonian(a);
        const EigenTriple n = superadiabatic_states(a);
        EXPECT_NEAR((h1 * n.plus - a.omega_prime * n.plus).norm(), 0.0, 1e-10) << t;
        EXPECT_NEAR((h1 * n.minus + a.omega_prime * n.minus).norm(), 0.0, 1e-10) << t;
        EXPECT_NEAR((h1 * n.zero).norm(), 0.0, 1e-10) << t;
    }
}

TEST(CounterDiabatic, SecondTermHasEffectiveForm) {
    for (double t : {0.05, 0.3, 0.5, 0.7, 0.95}) {
        const FrameAngles a = angles_at(t);
        const Mat3 c = cd2(a);
        EXPECT_NEAR((c - c.adjoint()).norm(), 0.0, 1e-15);
        EXPECT_EQ(c(eff::kPhi1, eff::kPsi5), cplx(0.0));
        EXPECT_EQ(c(eff::kPhi1, eff::kPhi1), cplx(0.0));
        const cplx x = c(eff::kPhi1, eff::kPsiD), y = c(eff::kPsiD, eff::kPsi5);
        EXPECT_NEAR(std::norm(x) + std::norm(y), a.theta1_dot * a.theta1_dot, 1e-12 * (1 + a.theta1_dot * a.theta1_dot));
    }
}

// Closed forms against -i U^dag dU built by finite differences of the
// closed-form transforms.
TEST(CounterDiabatic, ClosedFormsMatchFiniteDifferences) {
    const StirapPulses pulses(StirapParams::defaults(8.0));
    auto u0 = [&](double t) { return adiabatic_transform(mixing_angle(pulses, t).theta0); };
    auto u1 = [&](double t) { return superadiabatic_transform(superadiabatic_angle(pulses, t).theta1); };
    const double h = 1e-4;
    auto d = [h](const auto& f, double t) -> Mat3 {
        return (-f(t + 2 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2 * h)) / (12.0 * h);
    };
    for (double t : {0.1, 0.33, 0.5, 0.62, 0.9}) {
        const FrameAngles a = superadiabatic_angle(pulses, t);
        const Mat3 U0 = u0(t), U1 = u1(t);
        const Mat3 he = effective_hamiltonian(pulses.omega1(t).value, pulses.omega2(t).value);
        EXPECT_NEAR((adiabatic_frame_hamiltonian(a) - (U0 * he * U0.adjoint() + kI * d(u0, t) * U0.adjoint())).norm(), 0.0,
                    1e-7);
        EXPECT_NEAR((cd1(a) - (-kI * U0.adjoint() * d(u0, t))).norm(), 0.0, 1e-7);
        EXPECT_NEAR((cd2(a) - (-kI * U0.adjoint() * U1.adjoint() * d(u1, t) * U0)).norm(), 0.0, 1e-7);
    }
}

TEST(Lindblad, FifteenChannelsWithLiteralRates) {
    const auto ch = lindblad_channels(ModelParams::nominal(70.0), 0.4, 0.3);
    ASSERT_EQ(ch.size(), 15u);
    std::set<std::string> names;
    for (const auto& c : ch) names.insert(c.name);
    EXPECT_EQ(names.size(), 15u);
    for (int i = 0; i < 9; ++i) EXPECT_DOUBLE_EQ(ch[i].rate, 0.2);
    for (int i = 9; i < 15; ++i) EXPECT_DOUBLE_EQ(ch[i].rate, 0.3);
}

TEST(Lindblad, AtomDecayLandsInSink) {
    const StateSpace s;
    const auto ch = lindblad_channels(ModelParams::nominal(70.0), 1.0, 1.0);
    const auto it = std::find_if(ch.begin(), ch.end(), [](const auto& c) { return c.name == "A:L<-e"; });
    ASSERT_NE(it, ch.end());
    const StateVector out = it->op * phi(s, 2);
    const BasisState lg{AtomALevel::L, AtomBLevel::g, Photon::vac, Photon::vac, Photon::vac};
    EXPECT_NEAR((out - ket(s, lg)).norm(), 0.0, 1e-15);
    EXPECT_EQ(s.index_of(lg), 12u);
}

TEST(Lindblad, FiberLossEmptiesFiber) {
    const StateSpace s;
    const auto ch = lindblad_channels(ModelParams::nominal(70.0), 1.0, 1.0);
    const auto it = std::find_if(ch.begin(), ch.end(), [](const auto& c) { return c.name == "fiber:R"; });
    ASSERT_NE(it, ch.end());
    const StateVector out = it->op * phi(s, 6);
    const BasisState rg{AtomALevel::R, AtomBLevel::g, Photon::vac, Photon::vac, Photon::vac};
    EXPECT_NEAR((out - ket(s, rg)).norm(), 0.0, 1e-15);
    EXPECT_NEAR((it->op * phi(s, 5)).norm(), 0.0, 1e-15);
}

TEST(Lindblad, NegativeRatesRejected) {
    EXPECT_THROW(lindblad_channels(ModelParams::nominal(70.0), -1e-3, 0.0), invalid_input);
    EXPECT_THROW(lindblad_channels(ModelParams::nominal(70.0), 0.0, -1e-3), invalid_input);
}
