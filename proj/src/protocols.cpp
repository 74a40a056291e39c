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

#include "darkrsp/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "darkrsp/error.hpp"

namespace darkrsp {

namespace {

constexpr double kSuccessFidelity = 1.0 - tol::kInvariance;

bool is_superposed(const DarkStateSpec &spec) {
    return std::holds_alternative<resource::SuperposedFourQubit>(spec);
}

bool is_general_family(Family f) {
    return f == Family::QutritGeneral || f == Family::QutritRestricted || f == Family::QuditGeneral ||
           f == Family::QuditRestricted4;
}

std::string join_digits(const std::vector<int> &digits) {
    std::string out;
    for (int d : digits) {
        out += std::to_string(d);
    }
    return out;
}

std::string join_slots(const std::vector<std::size_t> &slots) {
    std::string out;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        out += (i ? "," : "") + std::to_string(slots[i]);
    }
    return out;
}

std::vector<std::size_t> all_but(std::size_t n, std::size_t skip) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != skip) {
            out.push_back(i);
        }
    }
    return out;
}

DensityMatrix reduced(const PureState &state, std::size_t slot) {
    if (state.size() == 1) {
        const Vector &a = state.amplitudes();
        return DensityMatrix(a * a.adjoint());
    }
    const std::size_t keep[] = {slot};
    return partial_trace(state, keep);
}

struct PartyResult {
    std::optional<int> message;
    double fidelity = 0.0;
};

// Matches each remote slot of `post` against the rotated basis, applies the
// corrections and reports per-party messages and final fidelities.
std::vector<PartyResult> correct_remote(const PureState &post, const EnsembleSpec &spec,
                                        const std::vector<PureState> &basis, Classifier classifier,
                                        bool forced_failure) {
    const std::size_t n = post.size();
    PureState corrected = post;
    std::vector<PartyResult> results(n);
    for (std::size_t j = 0; j < n && !forced_failure; ++j) {
        if (classifier == Classifier::SeparabilityAware && n > 1) {
            const std::size_t self[] = {j};
            const auto rest = all_but(n, j);
            if (!is_product_across(post, self, rest)) {
                continue;
            }
        }
        const DensityMatrix rho = reduced(post, j);
        int best = -1;
        double best_f = 0.0;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            const double f = fidelity(rho, basis[k]);
            if (f > best_f) {
                best_f = f;
                best = static_cast<int>(k);
            }
        }
        if (best < 0 || best_f < kSuccessFidelity || !is_correctable(spec, best)) {
            continue;
        }
        results[j].message = best;
        const std::size_t target[] = {j};
        corrected = apply_unitary(corrected, correction_unitary(spec, best), target);
    }
    for (std::size_t j = 0; j < n; ++j) {
        results[j].fidelity = fidelity(reduced(corrected, j), basis[0]);
    }
    return results;
}

OutcomeRecord degenerate_record(std::vector<int> outcome) {
    OutcomeRecord r;
    r.outcome = std::move(outcome);
    r.probability = 0.0;
    r.degenerate = true;
    return r;
}

double total_success(const std::vector<OutcomeRecord> &records) {
    double p = 0.0;
    for (const auto &r : records) {
        if (r.success) {
            p += r.probability;
        }
    }
    return p;
}

Transcript run_pipeline(const ProtocolConfig &config, ProtocolKind kind) {
    Transcript t;
    t.config = config;
    t.kind = kind;

    const PureState resource_state = build(config.resource);
    const auto &layout = resource_state.layout();
    const auto alice = layout.slots_of(kAlice);
    std::vector<std::size_t> remote;
    for (std::size_t s = 0; s < layout.size(); ++s) {
        if (layout.party(s) != kAlice) {
            remote.push_back(s);
            t.remote_parties.push_back(layout.party(s));
        }
    }
    t.steps.push_back({StepKind::ResourceBuilt, describe(config.resource) + " on " + std::to_string(layout.size()) +
                                                    " subsystems; Alice holds slots " + join_slots(alice)});
    t.ledger.ebits = von_neumann_entropy(partial_trace(resource_state, remote));

    const UnitaryOp prep = preparation_unitary(config.ensemble, config.params);
    const UnitaryOp prep_dag = prep.adjoint();
    PureState state = resource_state;
    for (auto s : alice) {
        const std::size_t target[] = {s};
        state = apply_unitary(state, prep_dag, target);
    }
    t.steps.push_back({StepKind::UnitaryApplied, "Alice applies U^dagger for " + describe(config.ensemble) +
                                                     " on each of her " + std::to_string(alice.size()) + " slots"});

    const auto branches = measure_projective(state, alice);
    t.steps.push_back({StepKind::Measurement, "Alice measures slots " + join_slots(alice) +
                                                  " in the computational basis: " +
                                                  std::to_string(branches.size()) + " outcomes"});

    const auto basis = rotated_basis(config.ensemble, config.params);
    const bool literal_pairs = config.classifier == Classifier::Conservative && is_superposed(config.resource);
    std::size_t corrected_branches = 0;
    for (const auto &branch : branches) {
        if (!branch.post_state) {
            t.outcomes.push_back(degenerate_record(branch.outcome));
            continue;
        }
        const bool forced = literal_pairs && branch.outcome[0] != branch.outcome[1];
        const auto parties = correct_remote(*branch.post_state, config.ensemble, basis, config.classifier, forced);
        OutcomeRecord r;
        r.outcome = branch.outcome;
        r.probability = branch.probability;
        r.success = true;
        for (const auto &p : parties) {
            r.messages.push_back(p.message);
            r.fidelities.push_back(p.fidelity);
            r.success = r.success && p.message.has_value() && p.fidelity >= kSuccessFidelity;
        }
        if (kind == ProtocolKind::Exact && !r.success) {
            fail(ErrorCode::Numerical, "exact protocol: outcome " + join_digits(r.outcome) +
                                           " left a remote state matching no correctable basis element");
        }
        corrected_branches += r.success ? 1 : 0;
        t.outcomes.push_back(std::move(r));
    }

    double alphabet = config.ensemble.d;
    if (kind == ProtocolKind::Probabilistic) {
        switch (config.accounting) {
            case MessageAccounting::SuccessOnly:
                alphabet = correctable_count(config.ensemble);
                break;
            case MessageAccounting::SuccessFail:
                alphabet = correctable_count(config.ensemble) + 1;
                break;
            case MessageAccounting::FullOutcome:
                alphabet = static_cast<double>(branches.size());
                break;
        }
    }
    t.ledger.cbits_per_party = std::log2(alphabet);
    for (const auto &party : t.remote_parties) {
        t.ledger.channels.push_back({kAlice, party, t.ledger.cbits_per_party});
    }
    t.ledger.cbits_total = t.ledger.cbits_per_party * static_cast<double>(t.remote_parties.size());
    t.steps.push_back({StepKind::Messages, "Alice sends each of " + std::to_string(t.remote_parties.size()) +
                                               " parties one symbol from an alphabet of " +
                                               std::to_string(static_cast<int>(alphabet))});
    t.steps.push_back({StepKind::Corrections,
                       "remote parties corrected " + std::to_string(corrected_branches) + " branches"});
    t.success_probability = total_success(t.outcomes);
    return t;
}

}  // namespace

const char *to_string(StepKind kind) {
    switch (kind) {
        case StepKind::ResourceBuilt:
            return "resource";
        case StepKind::UnitaryApplied:
            return "unitary";
        case StepKind::Measurement:
            return "measurement";
        case StepKind::Messages:
            return "messages";
        case StepKind::Corrections:
            return "corrections";
    }
    return "?";
}

ProtocolKind classify_combination(const ProtocolConfig &config) {
    validate(config.ensemble);
    const int d = config.ensemble.d;
    const int rd = resource_dimension(config.resource);
    const std::string what = describe(config.resource) + " + " + describe(config.ensemble);
    if (rd != d) {
        fail(ErrorCode::Configuration, what + ": resource qudits have dimension " + std::to_string(rd) +
                                           " but the ensemble has dimension " + std::to_string(d));
    }
    const int rp = resource_parties(config.resource);
    if (config.parties != rp) {
        fail(ErrorCode::Configuration, what + ": resource serves " + std::to_string(rp) + " parties, config asks for " +
                                           std::to_string(config.parties));
    }
    if (is_superposed(config.resource)) {
        if (is_exact_family(config.ensemble)) {
            return ProtocolKind::Probabilistic;
        }
    } else if (is_exact_family(config.ensemble)) {
        return ProtocolKind::Exact;
    } else if (std::holds_alternative<resource::Antisymmetric>(config.resource) &&
               is_general_family(config.ensemble.family)) {
        return ProtocolKind::Probabilistic;
    }
    fail(ErrorCode::Configuration, what + ": no protocol for this combination");
}

ProtocolKind validate_config(const ProtocolConfig &config) {
    validate(config.resource);
    const auto kind = classify_combination(config);
    validate_params(config.ensemble, config.params);
    if (const auto *s = std::get_if<Sample>(&config.mode); s && s->trials == 0) {
        fail(ErrorCode::InvalidArgument, "sampling needs at least one trial");
    }
    return kind;
}

Transcript run_exact_rsp(const ProtocolConfig &config) {
    if (validate_config(config) != ProtocolKind::Exact) {
        fail(ErrorCode::Configuration, describe(config.resource) + " + " + describe(config.ensemble) +
                                           " is not an exact-protocol combination");
    }
    return run_pipeline(config, ProtocolKind::Exact);
}

Transcript run_probabilistic_rsp(const ProtocolConfig &config) {
    if (validate_config(config) != ProtocolKind::Probabilistic) {
        fail(ErrorCode::Configuration, describe(config.resource) + " + " + describe(config.ensemble) +
                                           " is not a probabilistic-protocol combination");
    }
    return run_pipeline(config, ProtocolKind::Probabilistic);
}

Transcript run_joint_rsp(const QutritParams &params) {
    const EnsembleSpec spec = EnsembleSpec::qutrit_equatorial();
    try {
        validate_params(spec, params);
    } catch (const Error &e) {
        fail(ErrorCode::InvalidArgument, std::string("joint preparation needs equal-magnitude qutrit parameters: ") +
                                             e.what());
    }
    const std::string bob = remote_party_name(0);
    const std::string charlie = remote_party_name(1);

    Transcript t;
    t.config.resource = resource::Antisymmetric{3};
    t.config.ensemble = spec;
    t.config.params = params;
    t.config.parties = 1;
    t.kind = ProtocolKind::Joint;
    t.remote_parties = {charlie};

    const PureState res = build(resource::Antisymmetric{3}).with_parties({kAlice, bob, charlie});
    t.steps.push_back({StepKind::ResourceBuilt, "Antisymmetric(3) with one qutrit each for Alice, Bob, Charlie"});
    const std::size_t charlie_slot[] = {2};
    t.ledger.ebits = von_neumann_entropy(partial_trace(res, charlie_slot));

    const UnitaryOp prep_dag = preparation_unitary(spec, params).adjoint();
    const auto basis = rotated_basis(spec, params);
    const std::size_t first[] = {0};

    const PureState after_alice = apply_unitary(res, prep_dag, first);
    t.steps.push_back({StepKind::UnitaryApplied, "Alice applies U^dagger to her qutrit"});
    const auto alice_branches = measure_projective(after_alice, first);
    t.steps.push_back({StepKind::Measurement, "Alice measures her qutrit: 3 outcomes, sent to Bob and Charlie"});
    t.steps.push_back({StepKind::UnitaryApplied, "Bob applies U^dagger to his qutrit"});
    t.steps.push_back({StepKind::Measurement, "Bob measures his qutrit: 3 outcomes, sent to Charlie"});

    for (const auto &ab : alice_branches) {
        if (!ab.post_state) {
            for (int b = 0; b < 3; ++b) {
                t.outcomes.push_back(degenerate_record({ab.outcome[0], b}));
            }
            continue;
        }
        // Post state slots: 0 = Bob, 1 = Charlie.
        const PureState after_bob = apply_unitary(*ab.post_state, prep_dag, first);
        for (const auto &bb : measure_projective(after_bob, first)) {
            const double p = ab.probability * bb.probability;
            if (!bb.post_state || p < tol::kZeroProbability) {
                t.outcomes.push_back(degenerate_record({ab.outcome[0], bb.outcome[0]}));
                continue;
            }
            const auto parties = correct_remote(*bb.post_state, spec, basis, Classifier::SeparabilityAware, false);
            OutcomeRecord r;
            r.outcome = {ab.outcome[0], bb.outcome[0]};
            r.probability = p;
            r.messages = {parties[0].message};
            r.fidelities = {parties[0].fidelity};
            r.success = parties[0].message.has_value() && parties[0].fidelity >= kSuccessFidelity;
            if (!r.success) {
                fail(ErrorCode::Numerical, "joint protocol: Charlie's state matched no basis element");
            }
            t.outcomes.push_back(std::move(r));
        }
    }

    const double cbits = std::log2(3.0);
    t.ledger.cbits_per_party = cbits;
    t.ledger.channels = {{kAlice, bob, cbits}, {kAlice, charlie, cbits}, {bob, charlie, cbits}};
    t.ledger.cbits_total = 3.0 * cbits;
    t.steps.push_back({StepKind::Messages, "three log2(3)-cbit messages: Alice->Bob, Alice->Charlie, Bob->Charlie"});
    t.steps.push_back({StepKind::Corrections, "Charlie applies U_0k for the index fixed by both outcomes"});
    t.success_probability = total_success(t.outcomes);
    return t;
}

Transcript sample_protocol(const ProtocolConfig &config) {
    const auto *sample = std::get_if<Sample>(&config.mode);
    if (!sample) {
        fail(ErrorCode::InvalidArgument, "sample_protocol needs a Sample run mode");
    }
    if (sample->trials == 0) {
        fail(ErrorCode::InvalidArgument, "sampling needs at least one trial");
    }
    const auto kind = validate_config(config);
    Transcript t = run_pipeline(config, kind);

    std::vector<double> cumulative;
    std::vector<std::size_t> index;
    double acc = 0.0;
    for (std::size_t i = 0; i < t.outcomes.size(); ++i) {
        if (!t.outcomes[i].degenerate) {
            acc += t.outcomes[i].probability;
            cumulative.push_back(acc);
            index.push_back(i);
        }
    }
    const std::uint64_t trials = sample->trials;
    const std::uint64_t seed = sample->seed;
    const std::size_t workers =
        static_cast<std::size_t>(std::clamp<std::uint64_t>(std::thread::hardware_concurrency(), 1, 8));
    const std::uint64_t chunk = (trials + workers - 1) / workers;
    std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(t.outcomes.size(), 0));
    {
        std::vector<std::jthread> threads;
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&, w] {
                const std::uint64_t begin = w * chunk;
                const std::uint64_t end = std::min(trials, begin + chunk);
                for (std::uint64_t trial = begin; trial < end; ++trial) {
                    const double u = Rng(derive_seed(seed, trial)).uniform() * acc;
                    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
                    if (it == cumulative.end()) {
                        --it;
                    }
                    ++partial[w][index[static_cast<std::size_t>(it - cumulative.begin())]];
                }
            });
        }
    }
    SampleSummary s;
    s.trials = trials;
    s.seed = seed;
    s.counts.assign(t.outcomes.size(), 0);
    for (const auto &p : partial) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            s.counts[i] += p[i];
        }
    }
    for (std::size_t i = 0; i < t.outcomes.size(); ++i) {
        if (t.outcomes[i].success) {
            s.successes += s.counts[i];
        }
    }
    s.empirical_success_rate = static_cast<double>(s.successes) / static_cast<double>(trials);
    t.sample = std::move(s);
    return t;
}

Transcript run_protocol(const ProtocolConfig &config) {
    if (std::holds_alternative<Sample>(config.mode)) {
        return sample_protocol(config);
    }
    return validate_config(config) == ProtocolKind::Exact ? run_exact_rsp(config) : run_probabilistic_rsp(config);
}

BranchProbabilities success_probability_formula(double a, double b) {
    const double s = a * a + b * b + a * b;
    if (!(s > 1e-12)) {
        fail(ErrorCode::InvalidArgument, "degenerate normalization: a^2 + b^2 + ab must be > 0");
    }
    BranchProbabilities p;
    p.p00 = a * a / (4.0 * s);
    p.p11 = p.p00;
    p.p01 = ((a + b) * (a + b) + b * b) / (4.0 * s);
    p.p10 = p.p01;
    p.ps = a * a / (2.0 * s);
    return p;
}

double entanglement_formula(double a, double b) {
    const double s = a * a + b * b + a * b;
    if (!(s > 1e-12)) {
        fail(ErrorCode::InvalidArgument, "degenerate normalization: a^2 + b^2 + ab must be > 0");
    }
    const double n2 = 1.0 / (4.0 * s);
    auto xlogx = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };
    const double x = n2 * a * a;
    const double y = n2 * (a + 2.0 * b) * (a + 2.0 * b);
    return -3.0 * xlogx(x) - xlogx(y);
}

}  // namespace darkrsp
