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

// Scenario files: a JSON document tagged "darkrsp-scenario/1" listing
// protocol runs and the expectations each must meet. The grammar is
// documented in README.md.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "darkrsp/error.hpp"
#include "darkrsp/protocols.hpp"

namespace darkrsp {

inline constexpr std::string_view kScenarioFormatTag = "darkrsp-scenario/1";

/// "random:<count>:<seed>" parameter source.
struct RandomDraws {
    std::uint64_t count = 1;
    std::uint64_t seed = 0;
};
using ParamSource = std::variant<EnsembleParams, RandomDraws>;

enum class ProtocolChoice { Auto, Exact, Probabilistic, Joint };
const char *to_string(ProtocolChoice choice);

struct Expectation {
    std::optional<double> success_probability;
    // Target is the closed-form success probability of the superposed
    // resource; every branch probability is checked against its formula too.
    bool superposed_formula = false;
    double tolerance = 1e-10;
    // Sample mode: |empirical - target| <= k * sqrt(p(1-p)/trials).
    std::optional<double> empirical_sigma;
    std::optional<double> ebits;
    std::optional<double> cbits_per_party;
    std::optional<double> cbits_total;
    double ledger_tolerance = 1e-9;
    // Lower bound on every successful branch's per-party fidelity.
    std::optional<double> min_fidelity;
};

struct ScenarioEntry {
    std::string name;
    ProtocolChoice protocol = ProtocolChoice::Auto;
    ProtocolConfig config;  // config.params is ignored when `params` holds RandomDraws
    ParamSource params = EnsembleParams{QubitParams{}};
    std::optional<Expectation> expect;
};

struct ScenarioConfig {
    std::string name;
    std::vector<ScenarioEntry> entries;
    std::string output_format = "json";
    std::string output_path;  // empty: stdout
};

struct EntryIssue {
    std::size_t index = 0;
    std::string reason;
};

/// Raised when one or more entries fail validation; lists every offender.
class ScenarioValidationError : public Error {
   public:
    explicit ScenarioValidationError(std::vector<EntryIssue> issues);
    const std::vector<EntryIssue> &issues() const {
        return issues_;
    }

   private:
    std::vector<EntryIssue> issues_;
};

/// Reads, parses and validates. Missing file -> Error(Io); malformed text or
/// schema -> Error(Parse); invalid entries -> ScenarioValidationError.
ScenarioConfig parse_scenario(const std::filesystem::path &path);
ScenarioConfig parse_scenario_text(std::string_view text);

/// Validates every entry before anything runs; throws ScenarioValidationError.
void validate_scenario(const ScenarioConfig &config);

/// Replaces every seed (sample and random-parameter) with one derived from
/// `seed` and the entry index.
void override_seed(ScenarioConfig &config, std::uint64_t seed);
/// Replaces the trial count of every sampling entry.
void override_trials(ScenarioConfig &config, std::uint64_t trials);

/// Parameter draws an entry will run with, in order.
std::vector<EnsembleParams> expand_params(const ScenarioEntry &entry);

std::filesystem::path fixture_dir();
/// Bundled fixture names (file stems), sorted.
std::vector<std::string> list_fixtures();
/// Resolves a fixture name or an existing path.
std::filesystem::path resolve_scenario_path(const std::string &name_or_path);

}  // namespace darkrsp
