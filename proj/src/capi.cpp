// Copyright 2026 The pmfock Authors
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

#include "pmfock/pmfock.h"

#include <new>
#include <string>

#include "pmfock/report.hpp"

struct pmf_report {
    pmfock::RunReport report;
    std::string json;
    std::string table;
};

struct pmf_circuit {
    pmfock::CircuitSpec spec;
    std::string text;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_error_kind;

pmf_status status_for(pmfock::ErrorCode code) {
    switch (code) {
    case pmfock::ErrorCode::InvalidArgument:
    case pmfock::ErrorCode::IndexOutOfRange: return PMF_ERR_USAGE;
    default: return PMF_ERR_VALIDATION;
    }
}

// Runs fn, translating exceptions into status codes. Errors while reading
// a circuit are always validation failures.
template <typename Fn>
pmf_status guarded(Fn &&fn, bool parsing = false) {
    last_error.clear();
    last_error_kind.clear();
    try {
        return fn();
    } catch (const pmfock::Error &e) {
        last_error = e.what();
        last_error_kind = std::string(pmfock::error_code_name(e.code()));
        return parsing ? PMF_ERR_VALIDATION : status_for(e.code());
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
        return PMF_ERR_NUMERIC;
    } catch (const std::exception &e) {
        last_error = e.what();
        return PMF_ERR_NUMERIC;
    }
}

pmf_status emit(pmfock::RunReport report, pmf_report **out) {
    if (out == nullptr) {
        last_error = "null output pointer";
        return PMF_ERR_USAGE;
    }
    auto *r = new pmf_report{std::move(report), {}, {}};
    r->json = r->report.to_json().dump(2);
    r->table = r->report.to_table();
    *out = r;
    if (!r->report.ok) {
        last_error = r->report.failure;
        return PMF_ERR_NUMERIC;
    }
    return PMF_OK;
}

pmfock::Matrix read_matrix(const double *p) {
    pmfock::Matrix m(2, 2);
    for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = pmfock::Complex(p[2 * i], p[2 * i + 1]);
    return m;
}

}  // namespace

extern "C" {

const char *pmf_version(void) { return "0.1.0"; }

const char *pmf_last_error(void) { return last_error.c_str(); }

const char *pmf_last_error_kind(void) { return last_error_kind.c_str(); }

pmf_status pmf_run_dsd(int a, int b, pmf_report **out) {
    return guarded([&] { return emit(pmfock::report_dsd({a, b}), out); });
}

pmf_status pmf_run_switch(const double *u, const double *v, const double *pol, double tol, pmf_report **out) {
    return guarded([&] {
        if (!u || !v || !pol) throw pmfock::Error(pmfock::ErrorCode::InvalidArgument, "null matrix argument");
        pmfock::SwitchSpec spec;
        spec.u = read_matrix(u);
        spec.v = read_matrix(v);
        spec.polarization = pmfock::Amplitudes(2);
        spec.polarization << pmfock::Complex(pol[0], pol[1]), pmfock::Complex(pol[2], pol[3]);
        return emit(pmfock::report_switch(spec, tol), out);
    });
}

pmf_status pmf_parse_literal(const char *text, double *out, size_t capacity, size_t *rows, size_t *cols) {
    return guarded(
        [&] {
            if (!text || !rows || !cols) throw pmfock::Error(pmfock::ErrorCode::InvalidArgument, "null argument");
            const auto lit = pmfock::parse_complex_literal(text);
            if (lit.values.size() > capacity) {
                throw pmfock::Error(pmfock::ErrorCode::ShapeError,
                                    "literal has " + std::to_string(lit.values.size()) + " entries, expected at most " +
                                        std::to_string(capacity));
            }
            for (std::size_t i = 0; i < lit.values.size(); ++i) {
                out[2 * i] = lit.values[i].real();
                out[2 * i + 1] = lit.values[i].imag();
            }
            *rows = lit.rows;
            *cols = lit.cols;
            return PMF_OK;
        },
        true);
}

pmf_status pmf_circuit_parse(const char *text, double tol, pmf_circuit **out) {
    return guarded([&] {
        if (!text || !out) throw pmfock::Error(pmfock::ErrorCode::InvalidArgument, "null argument");
        auto spec = pmfock::parse_circuit(text, tol);
        auto canonical = pmfock::serialize_circuit(spec);
        *out = new pmf_circuit{std::move(spec), std::move(canonical)};
        return PMF_OK;
    }, true);
}

pmf_status pmf_circuit_load(const char *path, double tol, pmf_circuit **out) {
    return guarded([&] {
        if (!path || !out) throw pmfock::Error(pmfock::ErrorCode::InvalidArgument, "null argument");
        auto spec = pmfock::load_circuit(path, tol);
        auto canonical = pmfock::serialize_circuit(spec);
        *out = new pmf_circuit{std::move(spec), std::move(canonical)};
        return PMF_OK;
    }, true);
}

size_t pmf_circuit_gate_count(const pmf_circuit *circuit) { return circuit ? circuit->spec.gates.size() : 0; }

size_t pmf_circuit_wire_count(const pmf_circuit *circuit) { return circuit ? circuit->spec.wires.size() : 0; }

const char *pmf_circuit_text(const pmf_circuit *circuit) { return circuit ? circuit->text.c_str() : ""; }

pmf_status pmf_circuit_run(const pmf_circuit *circuit, const char *name, pmf_report **out) {
    return guarded([&] {
        if (!circuit) throw pmfock::Error(pmfock::ErrorCode::InvalidArgument, "null circuit");
        return emit(pmfock::report_circuit(circuit->spec, name ? name : ""), out);
    });
}

pmf_status pmf_circuit_axioms(const pmf_circuit *circuit, const char *name, double tol, pmf_report **out) {
    return guarded([&] {
        if (!circuit) throw pmfock::Error(pmfock::ErrorCode::InvalidArgument, "null circuit");
        return emit(pmfock::report_axioms(circuit->spec, name ? name : "", tol), out);
    });
}

void pmf_circuit_free(pmf_circuit *circuit) { delete circuit; }

pmf_status pmf_selftest(uint64_t seed, int inject_fault, pmf_report **out) {
    return guarded([&] { return emit(pmfock::report_selftest({seed, inject_fault != 0}), out); });
}

const char *pmf_report_protocol(const pmf_report *report) { return report ? report->report.protocol.c_str() : ""; }

size_t pmf_report_outcome_count(const pmf_report *report) { return report ? report->report.outcomes.size() : 0; }

const char *pmf_report_outcome_label(const pmf_report *report, size_t index) {
    if (!report || index >= report->report.outcomes.size()) return "";
    return report->report.outcomes[index].label.c_str();
}

double pmf_report_outcome_probability(const pmf_report *report, size_t index) {
    if (!report || index >= report->report.outcomes.size()) return -1.0;
    return report->report.outcomes[index].probability;
}

int pmf_report_counts(const pmf_report *report, int *vacuum_inclusive, int *flag) {
    if (!report || !report->report.counts) return 0;
    if (vacuum_inclusive) *vacuum_inclusive = report->report.counts->vacuum_inclusive;
    if (flag) *flag = report->report.counts->flag;
    return 1;
}

int pmf_report_ok(const pmf_report *report) { return report && report->report.ok ? 1 : 0; }

const char *pmf_report_json(const pmf_report *report) { return report ? report->json.c_str() : ""; }

const char *pmf_report_table(const pmf_report *report) { return report ? report->table.c_str() : ""; }

void pmf_report_free(pmf_report *report) { delete report; }

}  // extern "C"
