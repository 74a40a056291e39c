// Copyright 2026 The darkrsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "darkrsp/error.hpp"
#include "darkrsp/quantum_core.hpp"
#include "oracles.hpp"

using namespace darkrsp;
using namespace darkrsp::testing;

namespace {

PureState random_state(const SubsystemLayout &layout, Rng &rng) {
    Vector v(static_cast<Eigen::Index>(layout.total_dim()));
    for (auto &x : v) {
        x = Complex(rng.normal(), rng.normal());
    }
    return PureState::normalized(layout, v);
}

SubsystemLayout mixed_layout() {
    return SubsystemLayout({2, 3, 2, 4}, {"Alice", "Alice", "Bob", "Charlie"});
}

}  // namespace

TEST(SubsystemLayout, TotalDimAndSlots) {
    const auto l = mixed_layout();
    EXPECT_EQ(l.total_dim(), 48u);
    EXPECT_EQ(l.slots_of("Alice"), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(l.party_names(), (std::vector<std::string>{"Alice", "Bob", "Charlie"}));
    EXPECT_THROW(SubsystemLayout({2, 1}, {"A", "B"}), Error);
    EXPECT_THROW(SubsystemLayout({2, 2}, {"A"}), Error);
}

TEST(PureState, RejectsUnnormalized) {
    Vector v(2);
    v << 1.0, 1.0;
    EXPECT_THROW(PureState(SubsystemLayout::uniform(2, 1, "A"), v), Error);
    EXPECT_NO_THROW(PureState::normalized(SubsystemLayout::uniform(2, 1, "A"), v));
    EXPECT_THROW(PureState::normalized(SubsystemLayout::uniform(2, 1, "A"), Vector::Zero(2)), Error);
}

TEST(PureState, BasisIsBigEndian) {
    const std::vector<int> digits{1, 2, 0, 3};
    const auto s = PureState::basis(mixed_layout(), digits);
    // 1*(3*2*4) + 2*(2*4) + 0*4 + 3
    EXPECT_EQ(std::abs(s.amplitudes()[24 + 16 + 3]), 1.0);
}

TEST(PureState, PermutedMatchesIndexOracle) {
    Rng rng(3);
    const auto s = random_state(mixed_layout(), rng);
    const std::vector<std::size_t> order{2, 0, 3, 1};
    const auto p = s.permuted(order);
    EXPECT_EQ(p.layout().dims(), (std::vector<int>{2, 2, 4, 3}));
    for (std::size_t i = 0; i < s.total_dim(); ++i) {
        const auto d = oracle_digits(i, s.layout().dims());
        std::vector<int> nd(order.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            nd[k] = d[order[k]];
        }
        EXPECT_EQ(p.amplitudes()[static_cast<Eigen::Index>(oracle_index(nd, p.layout().dims()))],
                  s.amplitudes()[static_cast<Eigen::Index>(i)]);
    }
}

TEST(Tensor, KroneckerOrder) {
    Rng rng(5);
    const auto a = random_state(SubsystemLayout::uniform(2, 1, "A"), rng);
    const auto b = random_state(SubsystemLayout::uniform(3, 1, "B"), rng);
    const auto ab = tensor({a, b});
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 3; ++j) {
            EXPECT_NEAR(std::abs(ab.amplitudes()[i * 3 + j] - a.amplitudes()[i] * b.amplitudes()[j]), 0.0, 1e-15);
        }
    }
}

TEST(ApplyUnitary, MatchesKroneckerOracle) {
    Rng rng(11);
    const auto layout = mixed_layout();
    const std::vector<std::vector<std::size_t>> target_sets{{0}, {1}, {3}, {1, 3}, {3, 0}, {2, 1, 0}};
    for (const auto &targets : target_sets) {
        int d = 1;
        for (auto t : targets) {
            d *= layout.dim(t);
        }
        const auto u = haar_unitary(d, rng);
        const auto s = random_state(layout, rng);
        const auto got = apply_unitary(s, u, targets);
        const Vector want = oracle_embed(u.entries(), targets, layout.dims()) * s.amplitudes();
        EXPECT_LT((got.amplitudes() - want).norm(), 1e-12);
    }
}

TEST(ApplyUnitary, RejectsBadTargets) {
    Rng rng(1);
    const auto s = random_state(mixed_layout(), rng);
    EXPECT_THROW(apply_unitary(s, UnitaryOp::identity(2), {1}), Error);
    EXPECT_THROW(apply_unitary(s, UnitaryOp::identity(4), {0, 0}), Error);
    EXPECT_THROW(apply_unitary(s, UnitaryOp::identity(2), {7}), Error);
}

TEST(MeasureProjective, ProbabilitiesAndPostStatesMatchOracle) {
    Rng rng(17);
    const auto layout = mixed_layout();
    const auto s = random_state(layout, rng);
    const std::vector<std::size_t> measured{3, 1};
    const auto branches = measure_projective(s, measured);
    ASSERT_EQ(branches.size(), 12u);
    double total = 0.0;
    for (const auto &b : branches) {
        total += b.probability;
        // Oracle: project by brute force over all indices.
        Vector kept(4);
        kept.setZero();
        double p = 0.0;
        for (std::size_t i = 0; i < layout.total_dim(); ++i) {
            const auto d = oracle_digits(i, layout.dims());
            if (d[3] == b.outcome[0] && d[1] == b.outcome[1]) {
                const auto amp = s.amplitudes()[static_cast<Eigen::Index>(i)];
                p += std::norm(amp);
                kept[d[0] * 2 + d[2]] += amp;
            }
        }
        EXPECT_NEAR(b.probability, p, 1e-14);
        ASSERT_TRUE(b.post_state.has_value());
        EXPECT_EQ(b.post_state->layout().dims(), (std::vector<int>{2, 2}));
        EXPECT_NEAR(fidelity(*b.post_state, PureState::normalized(b.post_state->layout(), kept)), 1.0, 1e-12);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(MeasureProjective, ZeroProbabilityBranchHasNoPostState) {
    const std::vector<int> digits{1, 0};
    const auto s = PureState::basis(SubsystemLayout::uniform(2, 2, "A"), digits);
    const std::vector<std::size_t> measured{0};
    const auto b = measure_projective(s, measured);
    EXPECT_EQ(b[0].probability, 0.0);
    EXPECT_FALSE(b[0].post_state.has_value());
    EXPECT_TRUE(b[1].post_state.has_value());
}

TEST(PartialTrace, MatchesOracleAndIsDensityMatrix) {
    Rng rng(23);
    const auto layout = mixed_layout();
    const auto s = random_state(layout, rng);
    const std::vector<std::size_t> keep{3, 0};
    const auto rho = partial_trace(s, keep);
    const Matrix want = oracle_partial_trace(s.amplitudes(), layout.dims(), keep);
    EXPECT_LT((rho.entries() - want).norm(), 1e-12);
    EXPECT_NEAR(rho.entries().trace().real(), 1.0, 1e-12);
    EXPECT_LT((rho.entries() - rho.entries().adjoint()).norm(), 1e-14);
}

TEST(Entropy, BellAndProduct) {
    Vector bell(4);
    bell << 1.0, 0.0, 0.0, 1.0;
    const auto s = PureState::normalized(SubsystemLayout::uniform(2, 2, "A"), bell / std::sqrt(2.0));
    const std::vector<std::size_t> first{0};
    EXPECT_NEAR(von_neumann_entropy(partial_trace(s, first)), 1.0, 1e-12);
    const std::vector<int> zero{0, 0};
    EXPECT_NEAR(von_neumann_entropy(partial_trace(PureState::basis(s.layout(), zero), first)), 0.0, 1e-12);
}

TEST(Schmidt, EntropyAgreesWithSchmidtSpectrum) {
    Rng rng(29);
    const auto layout = mixed_layout();
    for (int trial = 0; trial < 5; ++trial) {
        const auto s = random_state(layout, rng);
        const std::vector<std::size_t> a{0, 2};
        const std::vector<std::size_t> b{1, 3};
        const auto sc = schmidt_coefficients(s, a, b);
        double h = 0.0;
        double norm = 0.0;
        for (double c : sc) {
            norm += c * c;
            if (c * c > 0) {
                h -= c * c * std::log2(c * c);
            }
        }
        EXPECT_NEAR(norm, 1.0, 1e-12);
        EXPECT_NEAR(h, von_neumann_entropy(partial_trace(s, a)), 1e-10);
        EXPECT_FALSE(is_product_across(s, a, b));
    }
    const auto p = tensor({random_state(SubsystemLayout({2, 3}, {"A", "A"}), rng),
                           random_state(SubsystemLayout({2, 4}, {"B", "B"}), rng)});
    const std::vector<std::size_t> a{0, 1};
    const std::vector<std::size_t> b{2, 3};
    EXPECT_TRUE(is_product_across(p, a, b));
}

TEST(Fidelity, PureAndMixedAgree) {
    Rng rng(31);
    const auto layout = SubsystemLayout({3, 2}, {"A", "B"});
    const auto a = random_state(layout, rng);
    const auto b = random_state(layout, rng);
    const DensityMatrix rho(a.amplitudes() * a.amplitudes().adjoint());
    EXPECT_NEAR(fidelity(a, a), 1.0, 1e-14);
    EXPECT_NEAR(fidelity(a, b), std::norm(a.amplitudes().dot(b.amplitudes())), 1e-14);
    EXPECT_NEAR(fidelity(rho, b), fidelity(a, b), 1e-12);
}

TEST(Haar, UnitaryAndSpecialUnitary) {
    Rng rng(37);
    for (int d = 1; d <= 6; ++d) {
        const auto u = haar_unitary(d, rng);
        EXPECT_LT((u.entries().adjoint() * u.entries() - Matrix::Identity(d, d)).norm(), 1e-12);
        const auto su = haar_special_unitary(d, rng);
        EXPECT_NEAR(std::abs(su.entries().determinant() - Complex(1.0)), 0.0, 1e-12);
    }
}

TEST(Haar, FirstMomentVanishes) {
    // E[U] = 0 for Haar U(d); a sample mean of 4000 draws sits well inside 0.1.
    Rng rng(41);
    Matrix sum = Matrix::Zero(3, 3);
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        sum += haar_unitary(3, rng).entries();
    }
    EXPECT_LT((sum / n).cwiseAbs().maxCoeff(), 0.1);
}

TEST(UnitaryOp, ValidationAndAlgebra) {
    Matrix m(2, 2);
    m << 1.0, 1.0, 0.0, 1.0;
    EXPECT_THROW(UnitaryOp{m}, Error);
    Rng rng(43);
    const auto u = haar_unitary(3, rng);
    EXPECT_LT(((u * u.adjoint()).entries() - Matrix::Identity(3, 3)).norm(), 1e-12);
    const std::vector<Complex> phases{1.0, -1.0, Complex(0, 1)};
    EXPECT_EQ(UnitaryOp::diagonal(phases).entries()(2, 2), Complex(0, 1));
}

TEST(Rng, DeterministicAndSplittable) {
    Rng a(99);
    Rng b(99);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a(), b());
    }
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    Rng c(5);
    double mean = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = c.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        mean += u;
    }
    EXPECT_NEAR(mean / 20000, 0.5, 0.01);
}

TEST(Unflatten, RoundTrip) {
    const std::vector<int> dims{3, 2, 5};
    for (std::size_t i = 0; i < 30; ++i) {
        EXPECT_EQ(unflatten(i, dims), oracle_digits(i, dims));
    }
}

TEST(Invariants, UnitarityAndMeasurementCompleteness) {
    Rng rng(47);
    for (int t = 0; t < 50; ++t) {
        const auto layout = mixed_layout();
        const auto s = random_state(layout, rng);
        const std::vector<std::size_t> targets{static_cast<std::size_t>(t % 4)};
        const auto u = haar_unitary(layout.dim(targets[0]), rng);
        EXPECT_NEAR(apply_unitary(s, u, targets).amplitudes().norm(), 1.0, 1e-12);
        const std::vector<std::size_t> measured{static_cast<std::size_t>((t + 1) % 4), static_cast<std::size_t>(t % 4)};
        double total = 0.0;
        for (const auto &b : measure_projective(s, measured)) {
            total += b.probability;
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(Invariants, ComplementaryEntropiesAgree) {
    Rng rng(53);
    for (int t = 0; t < 20; ++t) {
        const auto s = random_state(mixed_layout(), rng);
        const std::vector<std::size_t> a{0, 3};
        const std::vector<std::size_t> b{1, 2};
        EXPECT_NEAR(von_neumann_entropy(partial_trace(s, a)), von_neumann_entropy(partial_trace(s, b)), 1e-9);
    }
}

TEST(Invariants, ProductDetectionAgreesWithGramRank) {
    // Oracle: the reshaped amplitude matrix M has rank 1 iff M M^dagger has a
    // single nonzero eigenvalue.
    Rng rng(59);
    const auto layout = SubsystemLayout({2, 3, 2}, {"A", "B", "B"});
    const std::vector<std::size_t> a{0};
    const std::vector<std::size_t> b{1, 2};
    int products = 0;
    for (int t = 0; t < 200; ++t) {
        PureState s = random_state(layout, rng);
        if (t % 2 == 0) {
            s = tensor({random_state(SubsystemLayout({2}, {"A"}), rng),
                        random_state(SubsystemLayout({3, 2}, {"B", "B"}), rng)});
        }
        Matrix m(2, 6);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 6; ++j) {
                m(i, j) = s.amplitudes()[i * 6 + j];
            }
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(m * m.adjoint());
        const bool oracle = es.eigenvalues().minCoeff() < 1e-12;
        EXPECT_EQ(is_product_across(s, a, b), oracle);
        products += oracle ? 1 : 0;
    }
    EXPECT_EQ(products, 100);
}

TEST(Invariants, ProductDetectionExamples) {
    const std::vector<int> d01{0, 1};
    const auto p = PureState::basis(SubsystemLayout::uniform(2, 2, "A"), d01);
    const std::vector<std::size_t> a{0};
    const std::vector<std::size_t> b{1};
    EXPECT_TRUE(is_product_across(p, a, b));
    Vector singlet(4);
    singlet << 0.0, 1.0, -1.0, 0.0;
    EXPECT_FALSE(is_product_across(PureState::normalized(p.layout(), singlet), a, b));
    const std::vector<std::size_t> bad{0, 0};
    EXPECT_THROW(is_product_across(p, bad, b), Error);
}
