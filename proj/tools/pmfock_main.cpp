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

// Command-line front end. Talks to the library only through pmfock.h.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmfock/pmfock.h"

namespace {

struct Globals {
    std::string format = "table";
    double tol = 1e-10;
};

int fail(pmf_status status, const std::string &context) {
    std::fprintf(stderr, "pmfock: %s: %s\n", context.c_str(), pmf_last_error());
    return static_cast<int>(status);
}

// Prints the report (also when a numerical check failed) and frees it.
int finish(pmf_status status, pmf_report *report, const Globals &g) {
    if (report == nullptr) return fail(status, "error");
    const char *text = g.format == "json" ? pmf_report_json(report) : pmf_report_table(report);
    std::fputs(text, stdout);
    if (g.format == "json") std::fputc('\n', stdout);
    if (status != PMF_OK) std::fprintf(stderr, "pmfock: %s\n", pmf_last_error());
    pmf_report_free(report);
    return static_cast<int>(status);
}

const double kR = 1.0 / std::sqrt(2.0);

// 2x2 matrices as 8 doubles (re, im) row-major.
const std::map<std::string, std::vector<double>> kNamedMatrices = {
    {"I", {1, 0, 0, 0, 0, 0, 1, 0}},
    {"X", {0, 0, 1, 0, 1, 0, 0, 0}},
    {"Y", {0, 0, 0, -1, 0, 1, 0, 0}},
    {"Z", {1, 0, 0, 0, 0, 0, -1, 0}},
    {"H", {kR, 0, kR, 0, kR, 0, -kR, 0}},
};

const std::map<std::string, std::vector<double>> kNamedStates = {
    {"h", {1, 0, 0, 0}},       {"v", {0, 0, 1, 0}},       {"d", {kR, 0, kR, 0}},
    {"a", {kR, 0, -kR, 0}},    {"r", {kR, 0, 0, kR}},     {"l", {kR, 0, 0, -kR}},
};

// Returns 0 on success, or an exit code.
int read_literal(const std::string &text, std::size_t rows, std::size_t cols,
                 const std::map<std::string, std::vector<double>> &named, std::vector<double> &out,
                 const char *what) {
    if (auto it = named.find(text); it != named.end()) {
        out = it->second;
        return 0;
    }
    out.assign(2 * rows * cols, 0.0);
    std::size_t r = 0, c = 0;
    const pmf_status status = pmf_parse_literal(text.c_str(), out.data(), rows * cols, &r, &c);
    if (status != PMF_OK) return fail(PMF_ERR_USAGE, std::string("--") + what);
    if (r * c != rows * cols || (rows > 1 && r != rows)) {
        std::fprintf(stderr, "pmfock: --%s: expected %zux%zu entries\n", what, rows, cols);
        return PMF_ERR_USAGE;
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Process-matrix evaluation of single-photon interferometers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", pmf_version());

    Globals g;
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
    app.add_option("--tol", g.tol, "Tolerance for unitarity and normalisation checks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.fallthrough();

    int a = 0, b = 0;
    auto *dsd = app.add_subcommand("run-dsd", "Two-way signalling with one photon");
    dsd->add_option("--a", a, "Alice's bit")->required()->check(CLI::Range(0, 1));
    dsd->add_option("--b", b, "Bob's bit")->required()->check(CLI::Range(0, 1));

    std::string u_text = "I", v_text = "I", pol_text = "h";
    auto *sw = app.add_subcommand("run-switch", "Optical quantum switch");
    sw->add_option("--u", u_text, "Alice's polarisation unitary: I, X, Y, Z, H or [[c,c],[c,c]]")
        ->capture_default_str();
    sw->add_option("--v", v_text, "Bob's polarisation unitary")->capture_default_str();
    sw->add_option("--pol", pol_text, "Input polarisation: h, v, d, a, r, l or [c,c]")->capture_default_str();

    std::string circuit_path;
    auto *run = app.add_subcommand("run-circuit", "Outcome distribution of a circuit file");
    run->add_option("file", circuit_path, "Circuit file")->required();

    std::string axioms_path;
    auto *axioms = app.add_subcommand("axioms", "Check positivity and trace of a circuit's process matrix");
    axioms->add_option("file", axioms_path, "Circuit file")->required();

    std::uint64_t seed = 20260101;
    bool json_flag = false, inject_fault = false;
    auto *selftest = app.add_subcommand("selftest", "Run the built-in invariant suites");
    selftest->add_option("--seed", seed, "Seed for the randomised suites")->capture_default_str();
    selftest->add_flag("--json", json_flag, "Same as --format json");
    selftest->add_flag("--inject-fault", inject_fault, "Mirror the beam-splitter sign in the dSD suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return PMF_ERR_USAGE;
    }

    pmf_report *report = nullptr;
    if (*dsd) {
        const pmf_status status = pmf_run_dsd(a, b, &report);
        return finish(status, report, g);
    }
    if (*sw) {
        std::vector<double> u, v, pol;
        if (int rc = read_literal(u_text, 2, 2, kNamedMatrices, u, "u")) return rc;
        if (int rc = read_literal(v_text, 2, 2, kNamedMatrices, v, "v")) return rc;
        if (int rc = read_literal(pol_text, 1, 2, kNamedStates, pol, "pol")) return rc;
        const pmf_status status = pmf_run_switch(u.data(), v.data(), pol.data(), g.tol, &report);
        return finish(status, report, g);
    }
    if (*run || *axioms) {
        const std::string &path = *run ? circuit_path : axioms_path;
        pmf_circuit *circuit = nullptr;
        pmf_status status = pmf_circuit_load(path.c_str(), g.tol, &circuit);
        if (status != PMF_OK) return fail(status, path);
        status = *run ? pmf_circuit_run(circuit, path.c_str(), &report)
                      : pmf_circuit_axioms(circuit, path.c_str(), g.tol, &report);
        pmf_circuit_free(circuit);
        return finish(status, report, g);
    }
    if (*selftest) {
        if (json_flag) g.format = "json";
        const pmf_status status = pmf_selftest(seed, inject_fault ? 1 : 0, &report);
        return finish(status, report, g);
    }
    return PMF_ERR_USAGE;
}
