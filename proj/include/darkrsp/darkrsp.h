/* Copyright 2026 The darkrsp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the darkrsp simulator.
 *
 * Every function returns a drsp_status. On anything other than DRSP_OK the
 * calling thread's last error message is available from drsp_last_error()
 * until the next call on that thread. Handles are opaque and must be
 * released with the matching *_free function. */

#ifndef DARKRSP_DARKRSP_H
#define DARKRSP_DARKRSP_H

#include <stddef.h>
#include <stdint.h>

#if defined(DARKRSP_BUILDING_LIBRARY)
#define DRSP_API __attribute__((visibility("default")))
#else
#define DRSP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum drsp_status {
    DRSP_OK = 0,
    DRSP_ERR_INVALID_ARGUMENT = 1,
    DRSP_ERR_DIMENSION_MISMATCH = 2,
    DRSP_ERR_UNCORRECTABLE = 3,
    DRSP_ERR_CONFIGURATION = 4,
    DRSP_ERR_PARSE = 5,
    DRSP_ERR_IO = 6,
    DRSP_ERR_NUMERICAL = 7,
    DRSP_ERR_INTERNAL = 8
} drsp_status;

typedef enum drsp_format { DRSP_FORMAT_JSON = 0, DRSP_FORMAT_CSV = 1, DRSP_FORMAT_TEXT = 2 } drsp_format;

typedef struct drsp_scenario drsp_scenario;
typedef struct drsp_report drsp_report;

DRSP_API const char *drsp_last_error(void);
DRSP_API const char *drsp_version(void);

/* Accepts a path or the name of a bundled fixture. Parses and validates every
 * entry; nothing runs until drsp_scenario_run. */
DRSP_API drsp_status drsp_scenario_load(const char *path_or_fixture, drsp_scenario **out);
DRSP_API drsp_status drsp_scenario_override_seed(drsp_scenario *scenario, uint64_t seed);
DRSP_API drsp_status drsp_scenario_override_trials(drsp_scenario *scenario, uint64_t trials);
DRSP_API drsp_status drsp_scenario_entry_count(const drsp_scenario *scenario, size_t *out);
/* Output format and path named inside the scenario file; the path may be "". */
DRSP_API drsp_status drsp_scenario_output(const drsp_scenario *scenario, drsp_format *format, const char **path);
DRSP_API void drsp_scenario_free(drsp_scenario *scenario);

DRSP_API drsp_status drsp_scenario_run(const drsp_scenario *scenario, drsp_report **out);
/* *out is allocated by the library; release with drsp_string_free. */
DRSP_API drsp_status drsp_report_render(const drsp_report *report, drsp_format format, char **out);
/* An empty or NULL path writes to stdout. */
DRSP_API drsp_status drsp_report_write(const drsp_report *report, drsp_format format, const char *path);
DRSP_API drsp_status drsp_report_all_passed(const drsp_report *report, int *out);
DRSP_API void drsp_report_free(drsp_report *report);
DRSP_API void drsp_string_free(char *s);

DRSP_API drsp_status drsp_format_from_string(const char *name, drsp_format *out);

/* Newline-separated bundled fixture names; release with drsp_string_free. */
DRSP_API drsp_status drsp_fixture_list(char **out);
DRSP_API drsp_status drsp_fixture_dir(char **out);

/* Closed-form branch probabilities of the superposed four-qubit resource. */
DRSP_API drsp_status drsp_superposed_success(double a, double b, double *p00, double *p11, double *p01, double *p10,
                                             double *ps);
DRSP_API drsp_status drsp_superposed_entanglement(double a, double b, double *ebits);
/* *out = 1 if an N-particle d-level dark state exists (N a multiple of d). */
DRSP_API drsp_status drsp_existence_rule(int n_particles, int d, int *out);

#ifdef __cplusplus
}
#endif

#endif /* DARKRSP_DARKRSP_H */
