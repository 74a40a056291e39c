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

// darkrsp command line: run, validate and list scenario files.
// Exit status: 0 all expectations met, 1 an expectation failed or an entry
// errored, 2 usage or validation error.

#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "darkrsp/darkrsp.h"

namespace {

constexpr int kExitPassed = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

int report_error(const std::string &context) {
    std::cerr << "darkrsp: " << context << ": " << drsp_last_error() << "\n";
    return kExitUsage;
}

int cmd_run(const std::string &scenario_arg, const std::optional<std::string> &format_arg,
            const std::optional<std::string> &out_arg, const std::optional<std::uint64_t> &seed,
            const std::optional<std::uint64_t> &trials) {
    drsp_scenario *scenario = nullptr;
    if (drsp_scenario_load(scenario_arg.c_str(), &scenario) != DRSP_OK) {
        return report_error(scenario_arg);
    }
    std::unique_ptr<drsp_scenario, decltype(&drsp_scenario_free)> scenario_guard(scenario, drsp_scenario_free);

    drsp_format format = DRSP_FORMAT_JSON;
    const char *file_path = "";
    if (drsp_scenario_output(scenario, &format, &file_path) != DRSP_OK) {
        return report_error(scenario_arg);
    }
    if (format_arg && drsp_format_from_string(format_arg->c_str(), &format) != DRSP_OK) {
        return report_error("--format");
    }
    const std::string path = out_arg ? *out_arg : std::string(file_path);
    if (seed && drsp_scenario_override_seed(scenario, *seed) != DRSP_OK) {
        return report_error("--seed");
    }
    if (trials && drsp_scenario_override_trials(scenario, *trials) != DRSP_OK) {
        return report_error("--trials");
    }

    drsp_report *report = nullptr;
    if (drsp_scenario_run(scenario, &report) != DRSP_OK) {
        return report_error(scenario_arg);
    }
    std::unique_ptr<drsp_report, decltype(&drsp_report_free)> report_guard(report, drsp_report_free);
    if (drsp_report_write(report, format, path.c_str()) != DRSP_OK) {
        return report_error("writing report");
    }
    int passed = 0;
    drsp_report_all_passed(report, &passed);
    return passed ? kExitPassed : kExitFailed;
}

int cmd_validate(const std::string &scenario_arg) {
    drsp_scenario *scenario = nullptr;
    if (drsp_scenario_load(scenario_arg.c_str(), &scenario) != DRSP_OK) {
        return report_error(scenario_arg);
    }
    std::size_t n = 0;
    drsp_scenario_entry_count(scenario, &n);
    drsp_scenario_free(scenario);
    std::cout << scenario_arg << ": " << n << " entr" << (n == 1 ? "y" : "ies") << " valid\n";
    return kExitPassed;
}

int cmd_list_fixtures() {
    char *names = nullptr;
    if (drsp_fixture_list(&names) != DRSP_OK) {
        return report_error("list-fixtures");
    }
    std::cout << names;
    drsp_string_free(names);
    return kExitPassed;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Remote state preparation over dark-state resources"};
    app.require_subcommand(1);
    app.set_version_flag("--version", drsp_version());

    std::string scenario_arg;
    std::optional<std::string> format_arg;
    std::optional<std::string> out_arg;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;

    auto *run = app.add_subcommand("run", "Run a scenario file or bundled fixture and emit a report");
    run->add_option("scenario", scenario_arg, "Scenario path or fixture name")->required();
    run->add_option("--format", format_arg, "Report format")->check(CLI::IsMember({"json", "csv", "text"}));
    run->add_option("--out", out_arg, "Write the report here instead of stdout");
    run->add_option("--seed", seed, "Replace every seed with one derived from this value");
    run->add_option("--trials", trials, "Replace the trial count of every sampling entry")
        ->check(CLI::PositiveNumber);

    std::string validate_arg;
    auto *validate = app.add_subcommand("validate", "Parse and validate a scenario without running it");
    validate->add_option("scenario", validate_arg, "Scenario path or fixture name")->required();

    auto *list = app.add_subcommand("list-fixtures", "List bundled scenario fixtures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPassed : kExitUsage;
    }

    if (*run) {
        return cmd_run(scenario_arg, format_arg, out_arg, seed, trials);
    }
    if (*validate) {
        return cmd_validate(validate_arg);
    }
    if (*list) {
        return cmd_list_fixtures();
    }
    return kExitUsage;
}
