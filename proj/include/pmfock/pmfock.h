/*
 * Copyright 2026 The pmfock Authors
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

/*
 * C interface to the pmfock library.
 *
 * Every call returns a pmf_status. On failure the message is available
 * from pmf_last_error() until the next call on the same thread. Objects
 * returned through out-parameters are owned by the caller and released
 * with the matching *_free function. Strings returned by accessors stay
 * valid for the lifetime of the object they came from.
 */

#ifndef PMFOCK_PMFOCK_H_
#define PMFOCK_PMFOCK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PMF_API __declspec(dllexport)
#else
#define PMF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes. */
typedef enum {
  PMF_OK = 0,
  PMF_ERR_USAGE = 1,      /* invalid argument value */
  PMF_ERR_VALIDATION = 2, /* parse or validation failure */
  PMF_ERR_NUMERIC = 3,    /* a numerical check failed */
} pmf_status;

typedef struct pmf_report pmf_report;
typedef struct pmf_circuit pmf_circuit;

PMF_API const char *pmf_version(void);
PMF_API const char *pmf_last_error(void);
/* Symbolic name of the library error behind the last failure, or "". */
PMF_API const char *pmf_last_error_kind(void);

/* Two-way signalling with inputs a, b in {0,1}. */
PMF_API pmf_status pmf_run_dsd(int a, int b, pmf_report **out);

/*
 * Optical switch. u and v are 2x2 row-major complex matrices given as 8
 * doubles (re, im pairs); pol is a 2-vector given as 4 doubles.
 */
PMF_API pmf_status pmf_run_switch(const double *u, const double *v, const double *pol, double tol,
                                  pmf_report **out);

/*
 * Parses "[c,...]" or "[[c,...],...]" with complex entries written re,
 * imi or re+imi. Writes up to capacity (re, im) pairs to out, row-major,
 * and the shape to rows/cols.
 */
PMF_API pmf_status pmf_parse_literal(const char *text, double *out, size_t capacity, size_t *rows, size_t *cols);

PMF_API pmf_status pmf_circuit_parse(const char *text, double tol, pmf_circuit **out);
PMF_API pmf_status pmf_circuit_load(const char *path, double tol, pmf_circuit **out);
PMF_API size_t pmf_circuit_gate_count(const pmf_circuit *circuit);
PMF_API size_t pmf_circuit_wire_count(const pmf_circuit *circuit);
/* Canonical text form; owned by the circuit. */
PMF_API const char *pmf_circuit_text(const pmf_circuit *circuit);
/* name labels the report (usually the file path). */
PMF_API pmf_status pmf_circuit_run(const pmf_circuit *circuit, const char *name, pmf_report **out);
PMF_API pmf_status pmf_circuit_axioms(const pmf_circuit *circuit, const char *name, double tol,
                                      pmf_report **out);
PMF_API void pmf_circuit_free(pmf_circuit *circuit);

PMF_API pmf_status pmf_selftest(uint64_t seed, int inject_fault, pmf_report **out);

/*
 * Report accessors. A report is produced even when a numerical check
 * fails (status PMF_ERR_NUMERIC) so the caller can still print it.
 */
PMF_API const char *pmf_report_protocol(const pmf_report *report);
PMF_API size_t pmf_report_outcome_count(const pmf_report *report);
PMF_API const char *pmf_report_outcome_label(const pmf_report *report, size_t index);
PMF_API double pmf_report_outcome_probability(const pmf_report *report, size_t index);
/* Returns 0 and leaves the outputs untouched if the report has no counts. */
PMF_API int pmf_report_counts(const pmf_report *report, int *vacuum_inclusive, int *flag);
PMF_API int pmf_report_ok(const pmf_report *report);
PMF_API const char *pmf_report_json(const pmf_report *report);
PMF_API const char *pmf_report_table(const pmf_report *report);
PMF_API void pmf_report_free(pmf_report *report);

#ifdef __cplusplus
}
#endif

#endif /* PMFOCK_PMFOCK_H_ */
