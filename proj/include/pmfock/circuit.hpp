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
 * Line-oriented circuit description files.
 *
 *     # comment
 *     gate L  in() out(L_O:2) op=prepare[1]
 *     gate S  in(S_I^L:2,S_I^V:2) out(S_O^A:2,S_O^B:2) op=unitary[[r00,r01,...],[...],...]
 *     gate A' in(A'_I:2) out() op=measure
 *     wire L.L_O -> S.S_I^L
 *
 * Operation kinds:
 *   prepare[n]          basis state n of the output spaces (inputs must be empty)
 *   prepare[[c0,c1,..]] normalised amplitude vector
 *   unitary[[..],..]    row-major matrix, rows index outputs, columns inputs
 *   measure[n]          projection onto outcome n of the input spaces
 *   measure             every outcome is enumerated when the circuit runs
 *
 * Complex entries are written `re`, `imi` or `re+imi` (`re-imi`); a bare `i` means 1i.
 * Gates are listed in time order; a wire must run from an earlier gate to a
 * later one, and every declared space must be wired exactly once.
 */

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmfock/choi.hpp"

namespace pmfock {

enum class OpKind { Prepare, Unitary, Measure };

struct GateDecl {
    std::string name;
    SpaceList inputs;
    SpaceList outputs;
    OpKind kind = OpKind::Unitary;
    Matrix matrix;                     // Unitary
    std::optional<std::size_t> index;  // prepare[n] / measure[n]
    Amplitudes state;                  // prepare[[...]]
    int line = 0;
};

struct WireDecl {
    std::string from_gate;
    std::string from_space;
    std::string to_gate;
    std::string to_space;
    int line = 0;
};

struct CircuitSpec {
    std::vector<GateDecl> gates;
    std::vector<WireDecl> wires;

    const GateDecl *find_gate(std::string_view name) const;
};

/// Throws CircuitError carrying the 1-based line and column of the problem.
CircuitSpec parse_circuit(std::string_view text, double tol = kDefaultTolerance);
CircuitSpec load_circuit(const std::string &path, double tol = kDefaultTolerance);
std::string serialize_circuit(const CircuitSpec &spec);

/// "[c,...]" (one row) or "[[c,...],...]" in the file's literal syntax.
struct ComplexLiteral {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Complex> values;  // row-major
};
/// Throws CircuitError (line 1) on malformed or ragged input.
ComplexLiteral parse_complex_literal(std::string_view text);

/// Complex literal in the file syntax, shortest form that round-trips.
std::string format_complex(Complex c);

/// Instruments for one assignment of outcomes to the unindexed measurements.
std::vector<InstrumentCJ> circuit_instruments(const CircuitSpec &spec,
                                              const std::map<std::string, std::size_t> &free_outcomes = {});
ProcessVector circuit_process(const CircuitSpec &spec);

struct CircuitOutcome {
    std::map<std::string, std::size_t> outcomes;  // every measuring gate
    double probability = 0.0;
};

/// Probability of every combination of measurement outcomes.
std::vector<CircuitOutcome> run_circuit(const CircuitSpec &spec);

/// Total output dimension of each gate that has outputs, in declaration order.
std::vector<std::size_t> circuit_output_dims(const CircuitSpec &spec);
AxiomReport circuit_axioms(const CircuitSpec &spec, double tol = kDefaultTolerance);

}  // namespace pmfock
