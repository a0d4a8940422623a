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

/**
 * @file
 * Run reports shared by the C API and the command-line tool.
 *
 * JSON layout (keys always present):
 *     {"protocol": str, "inputs": {...}, "outcomes": {label: probability},
 *      "counts": {"vacuum_inclusive": n, "flag": n} or {}, "elapsed_ms": x, ...}
 * Protocol-specific extras (guesses, detector states, axioms, suites) follow.
 */

#pragma once

#include <optional>
#include <string>
#include <vector>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include <json.hpp>
#endif

#include "pmfock/circuit.hpp"
#include "pmfock/protocols.hpp"
#include "pmfock/selftest.hpp"

namespace pmfock {

inline constexpr double kNormalisationTolerance = 1e-9;

struct OutcomeRow {
    std::string label;
    double probability = 0.0;
};

struct OperationCounts {
    int vacuum_inclusive = 0;
    int flag = 0;
};

struct RunReport {
    std::string protocol;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    std::vector<OutcomeRow> outcomes;
    std::optional<OperationCounts> counts;
    double elapsed_ms = 0.0;
    nlohmann::ordered_json extras = nlohmann::ordered_json::object();
    /// False when a numerical check (normalisation, axioms, selftest) failed.
    bool ok = true;
    std::string failure;

    double total_probability() const;
    nlohmann::ordered_json to_json() const;
    std::string to_table() const;
};

/// Rounds to 12 significant digits, the precision every report prints.
double round12(double x);
std::string format12(double x);

RunReport report_dsd(const DsdInputs &inputs);
RunReport report_switch(const SwitchSpec &spec, double tol = kDefaultTolerance);
RunReport report_circuit(const CircuitSpec &spec, const std::string &name);
RunReport report_axioms(const CircuitSpec &spec, const std::string &name, double tol = kDefaultTolerance);
RunReport report_selftest(const SelftestOptions &options);

}  // namespace pmfock
