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

#include "darkrsp/darkrsp.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "darkrsp/dark_states.hpp"
#include "darkrsp/protocols.hpp"
#include "darkrsp/report.hpp"
#include "darkrsp/scenario.hpp"

struct drsp_scenario {
    darkrsp::ScenarioConfig config;
};

struct drsp_report {
    darkrsp::Report report;
};

namespace {

thread_local std::string g_last_error;

drsp_status status_of(darkrsp::ErrorCode code) {
    using darkrsp::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument:
            return DRSP_ERR_INVALID_ARGUMENT;
        case ErrorCode::DimensionMismatch:
            return DRSP_ERR_DIMENSION_MISMATCH;
        case ErrorCode::Uncorrectable:
            return DRSP_ERR_UNCORRECTABLE;
        case ErrorCode::Configuration:
            return DRSP_ERR_CONFIGURATION;
        case ErrorCode::Parse:
            return DRSP_ERR_PARSE;
        case ErrorCode::Io:
            return DRSP_ERR_IO;
        case ErrorCode::Numerical:
            return DRSP_ERR_NUMERICAL;
    }
    return DRSP_ERR_INTERNAL;
}

drsp_status set_error(drsp_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

template <class F>
drsp_status guarded(F &&f) {
    try {
        g_last_error.clear();
        f();
        return DRSP_OK;
    } catch (const darkrsp::Error &e) {
        return set_error(status_of(e.code()), e.what());
    } catch (const std::bad_alloc &) {
        return set_error(DRSP_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return set_error(DRSP_ERR_INTERNAL, e.what());
    }
}

char *dup_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (!out) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

darkrsp::ReportFormat to_format(drsp_format f) {
    switch (f) {
        case DRSP_FORMAT_JSON:
            return darkrsp::ReportFormat::Json;
        case DRSP_FORMAT_CSV:
            return darkrsp::ReportFormat::Csv;
        case DRSP_FORMAT_TEXT:
            return darkrsp::ReportFormat::Text;
    }
    darkrsp::fail(darkrsp::ErrorCode::InvalidArgument, "unknown report format");
}

#define DRSP_REQUIRE(ptr)                                                           \
    if (!(ptr)) {                                                                   \
        return set_error(DRSP_ERR_INVALID_ARGUMENT, "null argument: " #ptr);       \
    }

}  // namespace

extern "C" {

const char *drsp_last_error(void) {
    return g_last_error.c_str();
}

const char *drsp_version(void) {
    return "0.1.0";
}

drsp_status drsp_scenario_load(const char *path_or_fixture, drsp_scenario **out) {
    DRSP_REQUIRE(path_or_fixture);
    DRSP_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        auto s = std::make_unique<drsp_scenario>();
        s->config = darkrsp::parse_scenario(darkrsp::resolve_scenario_path(path_or_fixture));
        *out = s.release();
    });
}

drsp_status drsp_scenario_override_seed(drsp_scenario *scenario, uint64_t seed) {
    DRSP_REQUIRE(scenario);
    return guarded([&] { darkrsp::override_seed(scenario->config, seed); });
}

drsp_status drsp_scenario_override_trials(drsp_scenario *scenario, uint64_t trials) {
    DRSP_REQUIRE(scenario);
    return guarded([&] { darkrsp::override_trials(scenario->config, trials); });
}

drsp_status drsp_scenario_entry_count(const drsp_scenario *scenario, size_t *out) {
    DRSP_REQUIRE(scenario);
    DRSP_REQUIRE(out);
    *out = scenario->config.entries.size();
    return DRSP_OK;
}

drsp_status drsp_scenario_output(const drsp_scenario *scenario, drsp_format *format, const char **path) {
    DRSP_REQUIRE(scenario);
    return guarded([&] {
        if (format) {
            switch (darkrsp::report_format_from_string(scenario->config.output_format)) {
                case darkrsp::ReportFormat::Json:
                    *format = DRSP_FORMAT_JSON;
                    break;
                case darkrsp::ReportFormat::Csv:
                    *format = DRSP_FORMAT_CSV;
                    break;
                case darkrsp::ReportFormat::Text:
                    *format = DRSP_FORMAT_TEXT;
                    break;
            }
        }
        if (path) {
            *path = scenario->config.output_path.c_str();
        }
    });
}

void drsp_scenario_free(drsp_scenario *scenario) {
    delete scenario;
}

drsp_status drsp_scenario_run(const drsp_scenario *scenario, drsp_report **out) {
    DRSP_REQUIRE(scenario);
    DRSP_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        auto r = std::make_unique<drsp_report>();
        r->report = darkrsp::run_scenario(scenario->config);
        *out = r.release();
    });
}

drsp_status drsp_report_render(const drsp_report *report, drsp_format format, char **out) {
    DRSP_REQUIRE(report);
    DRSP_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = dup_string(darkrsp::render_report(report->report, to_format(format))); });
}

drsp_status drsp_report_write(const drsp_report *report, drsp_format format, const char *path) {
    DRSP_REQUIRE(report);
    return guarded([&] { darkrsp::emit_report(report->report, to_format(format), path ? path : ""); });
}

drsp_status drsp_report_all_passed(const drsp_report *report, int *out) {
    DRSP_REQUIRE(report);
    DRSP_REQUIRE(out);
    *out = report->report.passed ? 1 : 0;
    return DRSP_OK;
}

void drsp_report_free(drsp_report *report) {
    delete report;
}

void drsp_string_free(char *s) {
    std::free(s);
}

drsp_status drsp_format_from_string(const char *name, drsp_format *out) {
    DRSP_REQUIRE(name);
    DRSP_REQUIRE(out);
    return guarded([&] {
        *out = static_cast<drsp_format>(static_cast<int>(darkrsp::report_format_from_string(name)));
    });
}

drsp_status drsp_fixture_list(char **out) {
    DRSP_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        std::string joined;
        for (const auto &name : darkrsp::list_fixtures()) {
            joined += name + "\n";
        }
        *out = dup_string(joined);
    });
}

drsp_status drsp_fixture_dir(char **out) {
    DRSP_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = dup_string(darkrsp::fixture_dir().string()); });
}

drsp_status drsp_superposed_success(double a, double b, double *p00, double *p11, double *p01, double *p10,
                                    double *ps) {
    return guarded([&] {
        const auto p = darkrsp::success_probability_formula(a, b);
        if (p00) {
            *p00 = p.p00;
        }
        if (p11) {
            *p11 = p.p11;
        }
        if (p01) {
            *p01 = p.p01;
        }
        if (p10) {
            *p10 = p.p10;
        }
        if (ps) {
            *ps = p.ps;
        }
    });
}

drsp_status drsp_superposed_entanglement(double a, double b, double *ebits) {
    DRSP_REQUIRE(ebits);
    return guarded([&] { *ebits = darkrsp::entanglement_formula(a, b); });
}

drsp_status drsp_existence_rule(int n_particles, int d, int *out) {
    DRSP_REQUIRE(out);
    return guarded([&] { *out = darkrsp::existence_rule(n_particles, d) ? 1 : 0; });
}

}  // extern "C"
