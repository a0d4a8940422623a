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

#include "pmfock/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace pmfock {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string complex12(Complex c) { return format_complex(Complex(round12(c.real()), round12(c.imag()))); }

// Literal syntax of circuit files, e.g. [[1,0],[0,-1]].
std::string row_literal(const Amplitudes &v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? "," : "") + complex12(v[i]);
    return out + "]";
}

std::string matrix_literal(const Matrix &m) {
    std::string out = "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) out += (r ? "," : "") + row_literal(m.row(r).transpose());
    return out + "]";
}

void finish(RunReport &report, Clock::time_point start) {
    report.elapsed_ms = ms_since(start);
    if (report.outcomes.empty()) return;
    for (const auto &row : report.outcomes) {
        if (!(row.probability >= -kNormalisationTolerance && row.probability <= 1.0 + kNormalisationTolerance)) {
            report.ok = false;
            report.failure = "probability of " + row.label + " is outside [0,1]";
            return;
        }
    }
    const double total = report.total_probability();
    if (std::abs(total - 1.0) > kNormalisationTolerance) {
        report.ok = false;
        report.failure = "outcome probabilities sum to " + format12(total);
    }
}

}  // namespace

double round12(double x) {
    if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? 0.0 : x;
    return std::strtod(format12(x).c_str(), nullptr);
}

std::string format12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
    return buf;
}

double RunReport::total_probability() const {
    double total = 0.0;
    for (const auto &row : outcomes) total += row.probability;
    return total;
}

json RunReport::to_json() const {
    json j;
    j["protocol"] = protocol;
    j["inputs"] = inputs;
    json out = json::object();
    for (const auto &row : outcomes) out[row.label] = round12(row.probability);
    j["outcomes"] = out;
    json c = json::object();
    if (counts) {
        c["vacuum_inclusive"] = counts->vacuum_inclusive;
        c["flag"] = counts->flag;
    }
    j["counts"] = c;
    j["elapsed_ms"] = std::round(elapsed_ms * 1000.0) / 1000.0;
    for (const auto &[key, value] : extras.items()) j[key] = value;
    j["ok"] = ok;
    if (!ok) j["failure"] = failure;
    return j;
}

std::string RunReport::to_table() const {
    std::ostringstream out;
    out << "protocol  " << protocol << '\n';
    if (!inputs.empty()) {
        out << "inputs   ";
        for (const auto &[key, value] : inputs.items()) {
            out << ' ' << key << '=' << (value.is_string() ? value.get<std::string>() : value.dump());
        }
        out << '\n';
    }
    if (!outcomes.empty()) {
        std::size_t width = std::string("outcome").size();
        for (const auto &row : outcomes) width = std::max(width, row.label.size());
        out << '\n';
        char line[128];
        std::snprintf(line, sizeof line, "  %-*s  %18s\n", static_cast<int>(width), "outcome", "probability");
        out << line;
        for (const auto &row : outcomes) {
            std::snprintf(line, sizeof line, "  %-*s  %18s\n", static_cast<int>(width), row.label.c_str(),
                          format12(row.probability).c_str());
            out << line;
        }
        out << '\n';
    }
    if (counts) {
        out << "counts    vacuum-inclusive=" << counts->vacuum_inclusive << " flag=" << counts->flag << '\n';
    }
    for (const auto &[key, value] : extras.items()) {
        if (key == "suites") {
            for (const auto &suite : value) {
                char line[160];
                std::snprintf(line, sizeof line, "  %-20s %s  (%d checks)\n", suite["name"].get<std::string>().c_str(),
                              suite["passed"].get<bool>() ? "PASS" : "FAIL", suite["checks"].get<int>());
                out << line;
                for (const auto &f : suite["failures"]) out << "      " << f.get<std::string>() << '\n';
            }
            continue;
        }
        std::string padded = key;
        padded.resize(std::max<std::size_t>(padded.size() + 1, 10), ' ');
        out << padded << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
    char elapsed[64];
    std::snprintf(elapsed, sizeof elapsed, "elapsed   %.3f ms\n", elapsed_ms);
    out << elapsed;
    if (!ok) out << "FAILED    " << failure << '\n';
    return out.str();
}

RunReport report_dsd(const DsdInputs &inputs) {
    const auto start = Clock::now();
    inputs.validate();
    RunReport report;
    report.protocol = "dsd";
    report.inputs["a"] = inputs.a;
    report.inputs["b"] = inputs.b;
    for (const auto &o : dsd_distribution(inputs)) {
        report.outcomes.push_back({"a'=" + std::to_string(o.a_prime) + ",b'=" + std::to_string(o.b_prime), o.probability});
    }
    const auto trace = dsd_trace(inputs);
    report.counts = OperationCounts{count_operations(trace, CountingMode::VacuumInclusive),
                                    count_operations(trace, CountingMode::Flag)};
    const auto g = dsd_guesses(inputs);
    report.extras["guesses"] = json{{"parity", g.parity}, {"x", g.x}, {"y", g.y}, {"success", g.success}};
    finish(report, start);
    return report;
}

RunReport report_switch(const SwitchSpec &spec, double tol) {
    const auto start = Clock::now();
    spec.validate(tol);
    RunReport report;
    report.protocol = "switch";
    report.inputs["u"] = matrix_literal(spec.u);
    report.inputs["v"] = matrix_literal(spec.v);
    report.inputs["pol"] = row_literal(spec.polarization);
    const auto r = switch_distribution(spec, SwitchBranch::Superposed, tol);
    report.outcomes = {{"D1", r.d1.probability}, {"D2", r.d2.probability}, {"other", r.other}};
    const auto trace = switch_trace(spec, tol);
    report.counts = OperationCounts{count_operations(trace, CountingMode::VacuumInclusive),
                                    count_operations(trace, CountingMode::Flag)};
    json states = json::object();
    for (const auto &[name, det] : {std::pair{"D1", &r.d1}, std::pair{"D2", &r.d2}}) {
        if (det->probability <= kNormalisationTolerance) {
            states[name] = nullptr;
        } else {
            const Amplitudes s = det->state();
            states[name] = json::array({complex12(s[0]), complex12(s[1])});
        }
    }
    report.extras["states"] = states;
    finish(report, start);
    return report;
}

RunReport report_circuit(const CircuitSpec &spec, const std::string &name) {
    const auto start = Clock::now();
    RunReport report;
    report.protocol = "circuit";
    report.inputs["file"] = name;
    report.inputs["gates"] = spec.gates.size();
    report.inputs["wires"] = spec.wires.size();
    for (const auto &o : run_circuit(spec)) {
        std::string label;
        for (const auto &[gate, value] : o.outcomes) {
            if (!label.empty()) label += ',';
            label += gate + "=" + std::to_string(value);
        }
        report.outcomes.push_back({label.empty() ? "-" : label, o.probability});
    }
    finish(report, start);
    return report;
}

RunReport report_axioms(const CircuitSpec &spec, const std::string &name, double tol) {
    const auto start = Clock::now();
    RunReport report;
    report.protocol = "axioms";
    report.inputs["file"] = name;
    const auto ax = circuit_axioms(spec, tol);
    report.extras["axioms"] = json{{"positive", ax.positive},
                                   {"trace_ok", ax.trace_ok},
                                   {"trace", round12(ax.trace_value)},
                                   {"expected_trace", round12(ax.expected_trace)},
                                   {"min_eigenvalue", round12(ax.min_eigenvalue)}};
    finish(report, start);
    if (!ax.positive || !ax.trace_ok) {
        report.ok = false;
        report.failure = !ax.positive ? "process matrix is not positive" : "trace axiom violated";
    }
    return report;
}

RunReport report_selftest(const SelftestOptions &options) {
    const auto start = Clock::now();
    RunReport report;
    report.protocol = "selftest";
    report.inputs["seed"] = options.seed;
    report.inputs["inject_fault"] = options.inject_fault;
    const auto result = run_selftest(options);
    json suites = json::array();
    std::vector<std::string> failed;
    for (const auto &s : result.suites) {
        suites.push_back(json{{"name", s.name}, {"passed", s.passed}, {"checks", s.checks}, {"failures", s.failures}});
        if (!s.passed) failed.push_back(s.name);
    }
    report.extras["suites"] = suites;
    finish(report, start);
    if (!result.passed()) {
        report.ok = false;
        report.failure = "failing suites:";
        for (const auto &f : failed) report.failure += " " + f;
    }
    return report;
}

}  // namespace pmfock
