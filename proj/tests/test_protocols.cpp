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
#include <numbers>
#include <numeric>

#include "darkrsp/error.hpp"
#include "darkrsp/protocols.hpp"
#include "oracles.hpp"

using namespace darkrsp;
using namespace darkrsp::testing;

namespace {

const double kLog3 = std::log2(3.0);

std::vector<EnsembleSpec> qubit_families() {
    return {EnsembleSpec::qubit_polar_real(), EnsembleSpec::qubit_equatorial(), EnsembleSpec::qubit_polar_imag(),
            EnsembleSpec::qubit_fixed_phase(2.1)};
}

std::vector<double> grid() {
    std::vector<double> g;
    for (int i = 0; i < 7; ++i) {
        g.push_back(-2.0 + 4.0 * i / 6.0);
    }
    return g;
}

ProtocolConfig config(DarkStateSpec r, EnsembleSpec e, EnsembleParams p, int parties = -1) {
    ProtocolConfig c;
    c.resource = r;
    c.ensemble = e;
    c.params = p;
    c.parties = parties < 0 ? resource_parties(r) : parties;
    return c;
}

double total_probability(const Transcript &t) {
    double s = 0.0;
    for (const auto &o : t.outcomes) {
        s += o.probability;
    }
    return s;
}

void expect_exact(const Transcript &t) {
    EXPECT_NEAR(t.success_probability, 1.0, 1e-10);
    EXPECT_NEAR(total_probability(t), 1.0, 1e-10);
    for (const auto &o : t.outcomes) {
        if (o.degenerate) {
            continue;
        }
        EXPECT_TRUE(o.success);
        for (double f : o.fidelities) {
            EXPECT_GE(f, 1.0 - 1e-10);
        }
    }
}

}  // namespace

TEST(Classify, Combinations) {
    EXPECT_EQ(classify_combination(config(resource::Singlet{}, EnsembleSpec::qubit_equatorial(), QubitParams{})),
              ProtocolKind::Exact);
    EXPECT_EQ(classify_combination(
                  config(resource::SuperposedFourQubit{1, 1}, EnsembleSpec::qubit_polar_real(), QubitParams{})),
              ProtocolKind::Probabilistic);
    EXPECT_EQ(classify_combination(config(resource::Antisymmetric{3}, EnsembleSpec::qutrit_general(), QutritParams{})),
              ProtocolKind::Probabilistic);
    EXPECT_THROW(classify_combination(config(resource::Antisymmetric{3}, EnsembleSpec::qubit_equatorial(), QubitParams{})),
                 Error);
    EXPECT_THROW(classify_combination(config(resource::FourQubitA{}, EnsembleSpec::qubit_equatorial(), QubitParams{}, 1)),
                 Error);
    EXPECT_THROW(classify_combination(config(resource::Singlet{}, EnsembleSpec::qutrit_equatorial(), QutritParams{})),
                 Error);
}

TEST(ExactQubit, SingleParty) {
    Rng rng(100);
    for (const auto &fam : qubit_families()) {
        for (int t = 0; t < 30; ++t) {
            const auto tr = run_exact_rsp(config(resource::Singlet{}, fam, random_params(fam, rng)));
            ASSERT_EQ(tr.outcomes.size(), 2u);
            expect_exact(tr);
            EXPECT_NEAR(tr.ledger.ebits, 1.0, 1e-9);
            EXPECT_NEAR(tr.ledger.cbits_total, 1.0, 1e-12);
        }
    }
}

TEST(ExactQubit, SingletBranchesNeedNothingOrTheFlip) {
    // Outcome 0 leaves Bob with psi_1 (needs the correction), outcome 1 with psi_0.
    const auto tr = run_exact_rsp(config(resource::Singlet{}, EnsembleSpec::qubit_polar_real(), QubitParams{1.0, 0.0}));
    EXPECT_EQ(tr.outcomes[0].messages[0], 1);
    EXPECT_EQ(tr.outcomes[1].messages[0], 0);
    EXPECT_NEAR(tr.outcomes[0].probability, 0.5, 1e-12);
}

TEST(ExactQubit, TwoParty) {
    Rng rng(101);
    for (const DarkStateSpec r : {DarkStateSpec{resource::FourQubitA{}}, DarkStateSpec{resource::FourQubitB{}}}) {
        for (const auto &fam : qubit_families()) {
            for (int t = 0; t < 30; ++t) {
                const auto tr = run_exact_rsp(config(r, fam, random_params(fam, rng)));
                ASSERT_EQ(tr.outcomes.size(), 4u);
                expect_exact(tr);
                for (const auto &o : tr.outcomes) {
                    EXPECT_EQ(o.fidelities.size(), 2u);
                }
                EXPECT_NEAR(tr.ledger.ebits, 2.0, 1e-9);
                EXPECT_NEAR(tr.ledger.cbits_total, 2.0, 1e-12);
            }
        }
    }
}

TEST(ExactQubit, CrossTermBranchSendsDifferentCorrections) {
    const auto tr = run_exact_rsp(config(resource::FourQubitA{}, EnsembleSpec::qubit_equatorial(), QubitParams{std::numbers::pi / 2, 0.8}));
    bool differing = false;
    for (const auto &o : tr.outcomes) {
        differing = differing || o.messages[0] != o.messages[1];
    }
    EXPECT_TRUE(differing);
}

TEST(ExactQubit, ManyParties) {
    Rng rng(102);
    for (int m : {3, 4}) {
        for (int t = 0; t < 5; ++t) {
            std::vector<int> matching(static_cast<std::size_t>(m));
            std::iota(matching.begin(), matching.end(), 0);
            for (int i = m - 1; i > 0; --i) {
                std::swap(matching[static_cast<std::size_t>(i)],
                          matching[static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(i + 1))]);
            }
            const auto fam = qubit_families()[static_cast<std::size_t>(t % 4)];
            const auto tr = run_exact_rsp(config(resource::SingletMatchingProduct{m, matching}, fam, random_params(fam, rng)));
            expect_exact(tr);
            EXPECT_NEAR(tr.ledger.ebits, m, 1e-9);
            EXPECT_NEAR(tr.ledger.cbits_total, m, 1e-12);
        }
    }
}

TEST(Superposed, FormulaWorkedValues) {
    const auto p10 = success_probability_formula(1, 0);
    EXPECT_NEAR(p10.ps, 0.5, 1e-15);
    EXPECT_NEAR(p10.p00, 0.25, 1e-15);
    EXPECT_NEAR(p10.p01, 0.25, 1e-15);
    const auto p11 = success_probability_formula(1, 1);
    EXPECT_NEAR(p11.ps, 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(p11.p01, 5.0 / 12.0, 1e-15);
    EXPECT_THROW(success_probability_formula(0, 0), Error);
    for (double a : grid()) {
        for (double b : grid()) {
            if (a == 0 && b == 0) {
                continue;
            }
            const auto p = success_probability_formula(a, b);
            EXPECT_NEAR(p.p00 + p.p11 + p.p01 + p.p10, 1.0, 1e-12);
        }
    }
}

TEST(Superposed, EnumerationMatchesFormulaOnGrid) {
    Rng rng(103);
    for (double a : grid()) {
        for (double b : grid()) {
            if (std::abs(a) < 1e-12 && std::abs(b) < 1e-12) {
                continue;
            }
            const auto fam = qubit_families()[rng() % 4];
            const auto tr = run_probabilistic_rsp(config(resource::SuperposedFourQubit{a, b}, fam, random_params(fam, rng)));
            const auto f = success_probability_formula(a, b);
            ASSERT_EQ(tr.outcomes.size(), 4u);
            EXPECT_NEAR(tr.outcomes[0].probability, f.p00, 1e-10);
            EXPECT_NEAR(tr.outcomes[1].probability, f.p01, 1e-10);
            EXPECT_NEAR(tr.outcomes[2].probability, f.p10, 1e-10);
            EXPECT_NEAR(tr.outcomes[3].probability, f.p11, 1e-10);
            EXPECT_NEAR(tr.success_probability, f.ps, 1e-10) << a << "," << b;
            EXPECT_NEAR(total_probability(tr), 1.0, 1e-10);
        }
    }
}

TEST(Superposed, SeparabilityAwareDominatesLiteral) {
    Rng rng(104);
    for (double a : grid()) {
        for (double b : grid()) {
            if (std::abs(a) < 1e-12 && std::abs(b) < 1e-12) {
                continue;
            }
            auto c = config(resource::SuperposedFourQubit{a, b}, EnsembleSpec::qubit_equatorial(),
                            random_params(EnsembleSpec::qubit_equatorial(), rng));
            const double literal = run_probabilistic_rsp(c).success_probability;
            c.classifier = Classifier::SeparabilityAware;
            EXPECT_GE(run_probabilistic_rsp(c).success_probability, literal - 1e-12);
        }
    }
}

TEST(Superposed, ExactEndpointsUnderSeparabilityAware) {
    auto c = config(resource::SuperposedFourQubit{1, 0}, EnsembleSpec::qubit_polar_real(), QubitParams{0.7, 0.0});
    EXPECT_NEAR(run_probabilistic_rsp(c).success_probability, 0.5, 1e-12);
    c.classifier = Classifier::SeparabilityAware;
    EXPECT_NEAR(run_probabilistic_rsp(c).success_probability, 1.0, 1e-12);
    c.resource = resource::SuperposedFourQubit{1, -1};
    EXPECT_NEAR(run_probabilistic_rsp(c).success_probability, 1.0, 1e-12);
}

TEST(Superposed, LocalEntanglementIsUseless) {
    auto c = config(resource::SuperposedFourQubit{0, 1}, EnsembleSpec::qubit_equatorial(), QubitParams{std::numbers::pi / 2, 1.0});
    EXPECT_NEAR(run_probabilistic_rsp(c).success_probability, 0.0, 1e-12);
    c.classifier = Classifier::SeparabilityAware;
    const auto tr = run_probabilistic_rsp(c);
    for (const auto &o : tr.outcomes) {
        if (o.outcome[0] != o.outcome[1] && !o.degenerate) {
            EXPECT_FALSE(o.success);
        }
    }
    // The Bob-Charlie state on each mixed branch is the singlet itself.
    const auto s = build(resource::SuperposedFourQubit{0, 1});
    const std::vector<std::size_t> alice{0, 1};
    for (const auto &b : measure_projective(s, alice)) {
        if (b.post_state) {
            const std::vector<std::size_t> bob{0};
            const std::vector<std::size_t> charlie{1};
            EXPECT_FALSE(is_product_across(*b.post_state, bob, charlie));
        }
    }
}

TEST(Superposed, EntanglementFormulaMatchesEntropyOracle) {
    for (double a : grid()) {
        for (double b : grid()) {
            if (std::abs(a) < 1e-12 && std::abs(b) < 1e-12) {
                continue;
            }
            const auto s = build(resource::SuperposedFourQubit{a, b});
            const double oracle = oracle_entropy_bits(oracle_partial_trace(s.amplitudes(), {2, 2, 2, 2}, {0, 1}));
            const double e = entanglement_formula(a, b);
            EXPECT_NEAR(e, oracle, 1e-9) << a << "," << b;
            EXPECT_LE(e, 2.0 + 1e-12);
        }
    }
    EXPECT_NEAR(entanglement_formula(1, 0), 2.0, 1e-12);
    EXPECT_NEAR(entanglement_formula(0, 1), 0.0, 1e-12);
    const double e11 = entanglement_formula(1, 1);
    EXPECT_GT(e11, 0.0);
    EXPECT_LT(e11, 2.0);
}

TEST(Superposed, LedgerAccountingOptions) {
    auto c = config(resource::SuperposedFourQubit{1, 1}, EnsembleSpec::qubit_polar_real(), QubitParams{0.4, 0.0});
    c.accounting = MessageAccounting::SuccessOnly;
    EXPECT_NEAR(run_probabilistic_rsp(c).ledger.cbits_per_party, 1.0, 1e-12);
    c.accounting = MessageAccounting::SuccessFail;
    EXPECT_NEAR(run_probabilistic_rsp(c).ledger.cbits_per_party, kLog3, 1e-12);
    c.accounting = MessageAccounting::FullOutcome;
    EXPECT_NEAR(run_probabilistic_rsp(c).ledger.cbits_per_party, 2.0, 1e-12);
    EXPECT_NEAR(run_probabilistic_rsp(c).ledger.ebits, entanglement_formula(1, 1), 1e-9);
}

TEST(Qutrit, ExactEquatorial) {
    Rng rng(105);
    for (int t = 0; t < 30; ++t) {
        const auto p = random_params(EnsembleSpec::qutrit_equatorial(), rng);
        const auto tr = run_exact_rsp(config(resource::Antisymmetric{3}, EnsembleSpec::qutrit_equatorial(), p));
        expect_exact(tr);
        int live = 0;
        for (const auto &o : tr.outcomes) {
            if (!o.degenerate) {
                ++live;
                EXPECT_NEAR(o.probability, 1.0 / 6.0, 1e-12);
            }
        }
        EXPECT_EQ(live, 6);
        EXPECT_NEAR(tr.ledger.ebits, kLog3, 1e-9);
        EXPECT_NEAR(tr.ledger.cbits_total, kLog3, 1e-12);
    }
}

TEST(Qutrit, ExactTwoPartyProduct) {
    Rng rng(106);
    for (int t = 0; t < 5; ++t) {
        const auto p = random_params(EnsembleSpec::qutrit_equatorial(), rng);
        const auto tr = run_exact_rsp(config(resource::AntisymmetricProduct{3, 2}, EnsembleSpec::qutrit_equatorial(), p));
        expect_exact(tr);
        EXPECT_NEAR(tr.ledger.cbits_total, 2 * kLog3, 1e-12);
        EXPECT_NEAR(tr.ledger.ebits, 2 * kLog3, 1e-9);
    }
}

TEST(Qutrit, Probabilistic) {
    Rng rng(107);
    for (int t = 0; t < 20; ++t) {
        const auto g = run_probabilistic_rsp(config(resource::Antisymmetric{3}, EnsembleSpec::qutrit_general(),
                                                    random_params(EnsembleSpec::qutrit_general(), rng)));
        EXPECT_NEAR(g.success_probability, 1.0 / 3.0, 1e-10);
        EXPECT_NEAR(total_probability(g), 1.0, 1e-10);
        const auto r = run_probabilistic_rsp(config(resource::Antisymmetric{3}, EnsembleSpec::qutrit_restricted(),
                                                    random_params(EnsembleSpec::qutrit_restricted(), rng)));
        EXPECT_NEAR(r.success_probability, 2.0 / 3.0, 1e-10);
        for (const auto &o : r.outcomes) {
            if (o.success) {
                EXPECT_GE(o.fidelities[0], 1.0 - 1e-10);
                EXPECT_TRUE(o.messages[0] == 0 || o.messages[0] == 1);
            }
        }
    }
}

TEST(Qutrit, SingleParticleMeasurementLeavesRemoteEntangled) {
    // One qutrit per party, Alice measures hers: Bob-Charlie stay entangled.
    Rng rng(108);
    const auto s = build(resource::Antisymmetric{3}).with_parties({"Alice", "Bob", "Charlie"});
    for (int t = 0; t < 10; ++t) {
        const std::vector<std::size_t> alice{0};
        const auto rotated = apply_unitary(s, haar_unitary(3, rng), alice);
        for (const auto &b : measure_projective(rotated, alice)) {
            ASSERT_TRUE(b.post_state.has_value());
            const std::vector<std::size_t> bob{0};
            const std::vector<std::size_t> charlie{1};
            EXPECT_FALSE(is_product_across(*b.post_state, bob, charlie));
        }
    }
}

TEST(Joint, SixBranchesAllSucceed) {
    Rng rng(109);
    for (int t = 0; t < 30; ++t) {
        const auto p = std::get<QutritParams>(random_params(EnsembleSpec::qutrit_equatorial(), rng));
        const auto tr = run_joint_rsp(p);
        EXPECT_EQ(tr.kind, ProtocolKind::Joint);
        int live = 0;
        for (const auto &o : tr.outcomes) {
            if (o.degenerate) {
                EXPECT_EQ(o.outcome[0], o.outcome[1]);
                continue;
            }
            ++live;
            EXPECT_NEAR(o.probability, 1.0 / 6.0, 1e-12);
            EXPECT_TRUE(o.success);
            EXPECT_GE(o.fidelities[0], 1.0 - 1e-10);
        }
        EXPECT_EQ(live, 6);
        EXPECT_NEAR(tr.success_probability, 1.0, 1e-10);
        ASSERT_EQ(tr.ledger.channels.size(), 3u);
        for (const auto &ch : tr.ledger.channels) {
            EXPECT_NEAR(ch.cbits, kLog3, 1e-12);
        }
    }
}

TEST(Joint, WorkedBranchAndZeroPhase) {
    const auto tr = run_joint_rsp(QutritParams::equatorial(0.0, 0.0));
    for (const auto &o : tr.outcomes) {
        if (o.outcome == std::vector<int>{0, 2}) {
            EXPECT_EQ(o.messages[0], 1);
        }
    }
    EXPECT_NEAR(tr.success_probability, 1.0, 1e-10);
}

TEST(Qudit, ExactFourier) {
    Rng rng(110);
    for (int d : {3, 4, 5}) {
        const auto spec = EnsembleSpec::qudit_fourier(d);
        for (int t = 0; t < 5; ++t) {
            const auto tr = run_exact_rsp(config(resource::Antisymmetric{d}, spec, random_params(spec, rng)));
            expect_exact(tr);
            EXPECT_NEAR(tr.ledger.cbits_per_party, std::log2(d), 1e-12);
            EXPECT_NEAR(tr.ledger.ebits, std::log2(d), 1e-9);
        }
    }
}

TEST(Qudit, ProbabilisticFour) {
    Rng rng(111);
    for (int t = 0; t < 5; ++t) {
        const auto g = run_probabilistic_rsp(config(resource::Antisymmetric{4}, EnsembleSpec::qudit_general(4),
                                                    random_params(EnsembleSpec::qudit_general(4), rng)));
        EXPECT_NEAR(g.success_probability, 0.25, 1e-10);
        const auto r = run_probabilistic_rsp(config(resource::Antisymmetric{4}, EnsembleSpec::qudit_restricted4(),
                                                    random_params(EnsembleSpec::qudit_restricted4(), rng)));
        EXPECT_NEAR(r.success_probability, 0.5, 1e-10);
        EXPECT_NEAR(r.success_probability, 2.0 / 4.0, 1e-10);
    }
}

TEST(Sampling, DeterministicAndWithinBinomialBand) {
    auto c = config(resource::SuperposedFourQubit{1, 1}, EnsembleSpec::qubit_polar_real(), QubitParams{0.9, 0.0});
    c.mode = Sample{100000, 42};
    const auto a = sample_protocol(c);
    const auto b = sample_protocol(c);
    ASSERT_TRUE(a.sample && b.sample);
    EXPECT_EQ(a.sample->counts, b.sample->counts);
    const double p = 1.0 / 6.0;
    EXPECT_LE(std::abs(a.sample->empirical_success_rate - p), 3.0 * std::sqrt(p * (1 - p) / 1e5));
    std::uint64_t sum = 0;
    for (auto n : a.sample->counts) {
        sum += n;
    }
    EXPECT_EQ(sum, 100000u);
    c.mode = Sample{0, 1};
    EXPECT_THROW(sample_protocol(c), Error);
}

TEST(Sampling, ExactProtocolAlwaysSucceeds) {
    auto c = config(resource::Singlet{}, EnsembleSpec::qubit_equatorial(), QubitParams{std::numbers::pi / 2, 0.3});
    c.mode = Sample{10000, 9};
    EXPECT_EQ(run_protocol(c).sample->empirical_success_rate, 1.0);
}

TEST(Degenerate, ZeroBranchesRecordedWithoutPostState) {
    // Alice's pair of SuperposedFourQubit(0,1) is a singlet, invariant under
    // U x U, so outcomes 00 and 11 never occur.
    const auto tr = run_probabilistic_rsp(
        config(resource::SuperposedFourQubit{0, 1}, EnsembleSpec::qubit_polar_real(), QubitParams{1.2, 0.0}));
    int degenerate = 0;
    for (const auto &o : tr.outcomes) {
        degenerate += o.degenerate ? 1 : 0;
        if (o.degenerate) {
            EXPECT_EQ(o.probability, 0.0);
            EXPECT_FALSE(o.success);
            EXPECT_EQ(o.outcome[0], o.outcome[1]);
        }
    }
    EXPECT_EQ(degenerate, 2);
    EXPECT_NEAR(total_probability(tr), 1.0, 1e-10);
}
