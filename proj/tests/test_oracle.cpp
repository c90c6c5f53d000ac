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

#include <random>
#include <set>

#include "sa3d/model.hpp"
#include "sa3d/pulses.hpp"
#include "tensor_oracle.hpp"

using namespace sa3d;
using namespace sa3d::oracle;

TEST(TensorOracle, EmbeddingIsInjective) {
    const StateSpace s;
    std::set<int> seen;
    for (const auto& b : s.states()) {
        const int i = embed(b);
        EXPECT_TRUE(seen.insert(i).second);
        EXPECT_EQ(*label_of(product_of(i)), b);
    }
    EXPECT_EQ(kDim, 1280);
}

TEST(TensorOracle, ProjectedHamiltonianMatchesAtRandomTimes) {
    const StateSpace s;
    const StirapParams pp = StirapParams::defaults(8.0);
    std::mt19937_64 rng(20260501);
    std::uniform_real_distribution<double> time(0.0, 1.0), coupling(0.5, 1.5);
    for (int sample = 0; sample < 20; ++sample) {
        const double t = time(rng);
        // Independent couplings so every matrix element is distinguishable.
        const ModelParams p{70.0 / std::sqrt(2.0) * coupling(rng), 70.0 * coupling(rng), 70.0 * coupling(rng), 70.0, 1.0};
        const PulseSet drives(Scheme::STA, pp);
        const double oa = drives.drives(t).omega1, ob = drives.drives(t).omega2;
        const Dense big = tensor_hamiltonian(p, oa, ob);
        const auto small = full_hamiltonian(p, oa, ob).entries;
        for (std::size_t i = 0; i < s.dimension(); ++i)
            for (std::size_t j = 0; j < s.dimension(); ++j)
                ASSERT_NEAR(std::abs(small(i, j) - big(embed(s[i]), embed(s[j]))), 0.0, 1e-12)
                    << "t=" << t << " " << s[i] << " " << s[j];
    }
}

// The manifold is closed under H: nothing leaks out of phi_1..phi_12.
TEST(TensorOracle, ManifoldClosedUnderHamiltonian) {
    const StateSpace s;
    const Dense big = tensor_hamiltonian(ModelParams::nominal(70.0), 3.0, 4.0);
    std::set<int> manifold;
    for (int k = 1; k <= 12; ++k) manifold.insert(embed(s[StateSpace::phi_index(k)]));
    for (int src : manifold)
        for (int dst = 0; dst < kDim; ++dst)
            if (big(dst, src) != 0.0) {
                EXPECT_TRUE(manifold.count(dst)) << src << " -> " << dst;
            }
}

TEST(TensorOracle, CollapseOperatorsStayInBasis) {
    const StateSpace s;
    std::set<std::string> reached;
    for (int k = 1; k <= 12; ++k) reached.insert(s[StateSpace::phi_index(k)].label());
    for (const Dense& c : tensor_jumps()) {
        for (int k = 1; k <= 12; ++k) {
            const Eigen::VectorXd out = c.col(embed(s[StateSpace::phi_index(k)]));
            for (int i = 0; i < kDim; ++i) {
                if (out(i) == 0.0) continue;
                const auto lbl = label_of(product_of(i));
                ASSERT_TRUE(lbl.has_value());
                ASSERT_TRUE(s.contains(*lbl)) << *lbl;
                reached.insert(lbl->label());
            }
        }
    }
    // Four of the six sinks are reachable; |g,L> and |g,R> are not.
    EXPECT_EQ(reached.size(), 16u);
    EXPECT_FALSE(reached.count(BasisState{AtomALevel::g, AtomBLevel::L, Photon::vac, Photon::vac, Photon::vac}.label()));
}

TEST(TensorOracle, ReducedJumpsMatchTensorJumps) {
    const StateSpace s;
    const auto reduced = lindblad_channels(ModelParams::nominal(70.0), 1.0, 1.0);
    const auto big = tensor_jumps();
    ASSERT_EQ(reduced.size(), big.size());
    for (std::size_t c = 0; c < big.size(); ++c)
        for (std::size_t i = 0; i < s.dimension(); ++i)
            for (std::size_t j = 0; j < s.dimension(); ++j)
                EXPECT_EQ(reduced[c].op.entries(i, j).real(), big[c](embed(s[i]), embed(s[j]))) << reduced[c].name;
}
