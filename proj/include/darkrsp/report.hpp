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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "darkrsp/scenario.hpp"

namespace darkrsp {

inline constexpr std::string_view kReportFormatTag = "darkrsp-report/1";

struct OutcomeRow {
    std::string outcome;  // measurement digits, most significant slot first
    double probability = 0.0;
    bool success = false;
    bool degenerate = false;
    double fidelity_min = 0.0;  // 0 for degenerate rows
    std::vector<std::string> messages;  // correction index or "fail", per remote party
    std::optional<std::uint64_t> count;  // sample mode only
    bool operator==(const OutcomeRow &) const = default;
};

struct LedgerRow {
    double ebits = 0.0;
    double cbits_per_party = 0.0;
    double cbits_total = 0.0;
    std::vector<ChannelUse> channels;
    bool operator==(const LedgerRow &) const = default;
};

struct SampleRow {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t successes = 0;
    double empirical_success_rate = 0.0;
    bool operator==(const SampleRow &) const = default;
};

struct RunReport {
    std::map<std::string, double> params;
    double success_probability = 0.0;
    std::vector<OutcomeRow> outcomes;
    LedgerRow ledger;
    std::optional<SampleRow> sample;
    std::vector<std::string> failures;  // unmet expectations
    bool operator==(const RunReport &) const = default;
};

enum class EntryStatus { Passed, Failed, Errored, Unchecked };
const char *to_string(EntryStatus status);

struct EntryReport {
    std::size_t index = 0;
    std::string name;
    std::string protocol;
    std::string resource;
    std::string ensemble;
    std::string classifier;
    std::string accounting;
    std::vector<RunReport> runs;
    EntryStatus status = EntryStatus::Unchecked;
    std::string error;
    double duration_ms = 0.0;
    bool operator==(const EntryReport &) const = default;
};

struct Report {
    std::string scenario;
    std::vector<EntryReport> entries;
    bool passed = true;  // no entry failed or errored
    bool operator==(const Report &) const = default;
};

enum class ReportFormat { Json, Csv, Text };
ReportFormat report_format_from_string(std::string_view name);

/// Converts one protocol transcript into its report row and checks it
/// against `expect`.
RunReport summarize_run(const Transcript &transcript, const std::optional<Expectation> &expect);

/// Runs one entry; exceptions become an Errored status.
EntryReport run_entry(const ScenarioEntry &entry, std::size_t index);

/// Runs entries concurrently; results are ordered by entry index and do not
/// depend on scheduling.
Report run_scenario(const ScenarioConfig &config);

std::string render_report(const Report &report, ReportFormat format);
/// Writes to `path`, or stdout when `path` is empty.
void emit_report(const Report &report, ReportFormat format, const std::filesystem::path &path);

Report report_from_json(std::string_view text);

}  // namespace darkrsp
