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

// End-to-end remote state preparation over dark-state resources.
//
// Pipeline: build the resource, apply the adjoint preparation unitary to
// every Alice slot, enumerate Alice's computational-basis measurement, match
// each remote party's post-measurement state against the rotated basis, send
// the matched index as the classical message and apply the corresponding
// correction. Messages are computed per party, so one branch may carry
// different corrections for different parties.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "darkrsp/dark_states.hpp"
#include "darkrsp/ensembles.hpp"

namespace darkrsp {

/// How failure branches of probabilistic protocols are decided.
enum class Classifier {
    /// The branches singled out as failures for the superposed resource (Alice
    /// outcomes 01 and 10) fail regardless of the remote state; all other
    /// branches are classified by basis matching.
    Conservative,
    /// A branch fails only if the remote state is not a product of
    /// correctable rotated-basis states.
    SeparabilityAware,
};

/// Classical alphabet per party for probabilistic protocols.
enum class MessageAccounting {
    SuccessOnly,  // one symbol per correctable index
    SuccessFail,  // correctable indices plus a fail symbol
    FullOutcome,  // Alice's full measurement outcome
};

struct Enumerate {};
struct Sample {
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
};
using RunMode = std::variant<Enumerate, Sample>;

struct ProtocolConfig {
    DarkStateSpec resource = resource::Singlet{};
    EnsembleSpec ensemble = EnsembleSpec::qubit_polar_real();
    EnsembleParams params = QubitParams{};
    int parties = 1;
    RunMode mode = Enumerate{};
    Classifier classifier = Classifier::Conservative;
    MessageAccounting accounting = MessageAccounting::SuccessFail;
};

enum class ProtocolKind { Exact, Probabilistic, Joint };

struct OutcomeRecord {
    std::vector<int> outcome;  // Alice's (then Bob's, for joint) measurement digits
    double probability = 0.0;
    // Correction index sent to each remote party; nullopt is the fail token.
    std::vector<std::optional<int>> messages;
    std::vector<double> fidelities;  // per remote party, after correction
    bool success = false;
    bool degenerate = false;  // probability below the zero cutoff; no post state
};

struct ChannelUse {
    std::string from;
    std::string to;
    double cbits = 0.0;
    bool operator==(const ChannelUse &) const = default;
};

struct ResourceLedger {
    double ebits = 0.0;  // entropy of the resource across knowing parties | receivers
    double cbits_per_party = 0.0;
    double cbits_total = 0.0;
    std::vector<ChannelUse> channels;
};

enum class StepKind { ResourceBuilt, UnitaryApplied, Measurement, Messages, Corrections };
const char *to_string(StepKind kind);

struct Step {
    StepKind kind;
    std::string detail;
};

struct SampleSummary {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> counts;  // parallel to Transcript::outcomes
    std::uint64_t successes = 0;
    double empirical_success_rate = 0.0;
};

struct Transcript {
    ProtocolConfig config;
    ProtocolKind kind = ProtocolKind::Exact;
    std::vector<std::string> remote_parties;
    std::vector<Step> steps;
    std::vector<OutcomeRecord> outcomes;
    double success_probability = 0.0;
    ResourceLedger ledger;
    std::optional<SampleSummary> sample;
};

/// Checks resource/ensemble/party compatibility and returns which runner
/// accepts the combination. Throws Error(Configuration) otherwise.
ProtocolKind classify_combination(const ProtocolConfig &config);
/// classify_combination plus resource and parameter validation.
ProtocolKind validate_config(const ProtocolConfig &config);

Transcript run_exact_rsp(const ProtocolConfig &config);
Transcript run_probabilistic_rsp(const ProtocolConfig &config);
/// Alice and Bob (both knowing the target) prepare an equal-magnitude qutrit
/// at Charlie from one antisymmetric qutrit triple held one per party.
Transcript run_joint_rsp(const QutritParams &params);
/// Enumerates, then draws `trials` branches from the exact distribution.
/// Per-trial uniforms come from derive_seed(seed, trial index).
Transcript sample_protocol(const ProtocolConfig &config);
/// Dispatches on the combination and run mode.
Transcript run_protocol(const ProtocolConfig &config);

/// Closed-form branch probabilities for the superposed four-qubit resource.
struct BranchProbabilities {
    double p00 = 0.0;
    double p11 = 0.0;
    double p01 = 0.0;
    double p10 = 0.0;
    double ps = 0.0;
};
BranchProbabilities success_probability_formula(double a, double b);

/// Closed-form entanglement (bits) of the superposed resource across
/// Alice's pair | (Bob, Charlie).
double entanglement_formula(double a, double b);

}  // namespace darkrsp
