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
 * Builders for two single-photon interferometric protocols.
 *
 * dSD two-way communication: a photon L and a vacuum V enter beam splitter S,
 * Alice (A) and Bob (B) imprint phases (-1)^a and (-1)^b on their arm, a
 * second beam splitter S' recombines the arms and the detectors A', B'
 * read occupation numbers a', b'.
 *
 * Optical quantum switch: the same interferometer with crossed middle wires
 * (A -> B', B -> A'), so the photon meets Alice and Bob in either order.
 * Agents rotate polarisation by U (Alice) and V (Bob) when the photon is
 * present and act trivially on the vacuum. Each arm is a 3-level space
 * {vacuum, h-photon, v-photon}; detectors D1, D2 sit behind S'.
 *
 * Basis index 0 is always the vacuum.
 */

#pragma once

#include <array>
#include <string>
#include <vector>

#include "pmfock/choi.hpp"

namespace pmfock {

// ---------------------------------------------------------------------------
// shared gate builders

/// Sign convention of the beam-splitter Hadamard. `Flipped` swaps which input
/// arm receives the minus sign; it exists for fault-injection tests.
enum class HadamardSign { Standard, Flipped };

/// Beam splitter on two arms of dimension `arm_dim` (vacuum plus arm_dim-1
/// internal photon states). On the single-photon subspace
///     |p,0> -> (|p,0> + |0,p>)/sqrt2,  |0,p> -> (|p,0> - |0,p>)/sqrt2,
/// identity on the vacuum and on two-photon states.
Matrix beam_splitter_matrix(std::size_t arm_dim, HadamardSign sign = HadamardSign::Standard);

InstrumentCJ preparation_gate(const std::string &name, const LabeledSpace &trivial_in, const LabeledSpace &out,
                              const Amplitudes &state);
InstrumentCJ measurement_gate(const std::string &name, const LabeledSpace &in, const LabeledSpace &trivial_out,
                              std::size_t outcome);
InstrumentCJ unitary_gate(const std::string &name, const LabeledOperator &op);

// ---------------------------------------------------------------------------
// dSD protocol

struct DsdInputs {
    int a = 0;
    int b = 0;

    void validate() const;
};

struct DsdOutcome {
    int a_prime = 0;
    int b_prime = 0;
    double probability = 0.0;
};

enum class DsdStage { AfterPrep, AfterS, AfterA, AfterB, AfterSPrime };

struct GateSet {
    std::vector<InstrumentCJ> gates;
    ProcessVector process;
};

/// Gates L, V, S, A, B, S', A', B' and the eight-wire process vector.
GateSet build_dsd(const DsdInputs &inputs, int a_prime, int b_prime, HadamardSign sign = HadamardSign::Standard);

/// p(a',b'|a,b) for the four outcomes (0,0), (0,1), (1,0), (1,1), each from a
/// full contraction.
std::array<DsdOutcome, 4> dsd_distribution(const DsdInputs &inputs, HadamardSign sign = HadamardSign::Standard);

struct DsdGuesses {
    int parity = 0;
    int x = 0;  // Alice's guess of b
    int y = 0;  // Bob's guess of a
    bool success = false;
};

DsdGuesses dsd_guesses(const DsdInputs &inputs, HadamardSign sign = HadamardSign::Standard);

/// The process vector contracted with every gate up to and including `stage`.
LabeledVector dsd_intermediate_state(const DsdInputs &inputs, DsdStage stage,
                                     HadamardSign sign = HadamardSign::Standard);

/// The dSD protocol rebuilt from Fock-space objects with one bosonic mode per
/// wire and cutoff 1.
GateSet build_dsd_fock(const DsdInputs &inputs, int a_prime, int b_prime);
std::array<DsdOutcome, 4> dsd_distribution_fock(const DsdInputs &inputs);

// ---------------------------------------------------------------------------
// optical quantum switch

struct SwitchSpec {
    Matrix u = Matrix::Identity(2, 2);
    Matrix v = Matrix::Identity(2, 2);
    Amplitudes polarization = Amplitudes::Unit(2, 0);

    /// Throws NonUnitary / InvalidArgument.
    void validate(double tol = kDefaultTolerance) const;
};

/// AliceFirst post-selects the branch where the photon leaves S towards
/// Alice (U at A, then V at B'); BobFirst the opposite branch.
enum class SwitchBranch { Superposed, AliceFirst, BobFirst };

GateSet build_switch(const SwitchSpec &spec, std::size_t d1_outcome, std::size_t d2_outcome,
                     SwitchBranch branch = SwitchBranch::Superposed, double tol = kDefaultTolerance);

/// State on (S'_I^A, S'_I^B) after L, V, S, A, B, A', B'.
LabeledVector switch_state_before_recombination(const SwitchSpec &spec, SwitchBranch branch = SwitchBranch::Superposed,
                                                double tol = kDefaultTolerance);

struct DetectorResult {
    double probability = 0.0;
    /// Unnormalised polarisation amplitude (h, v) for a click here and none elsewhere.
    Amplitudes amplitude = Amplitudes::Zero(2);

    /// Post-selected polarisation state; zero if the detector never clicks.
    Amplitudes state() const;
};

struct SwitchResult {
    DetectorResult d1;
    DetectorResult d2;
    /// Probability of every other detector pattern (no click, double click).
    double other = 0.0;
};

SwitchResult switch_distribution(const SwitchSpec &spec, SwitchBranch branch = SwitchBranch::Superposed,
                                 double tol = kDefaultTolerance);

// ---------------------------------------------------------------------------
// operation counting

enum class GateKind { ParticleInteraction, VacuumInteraction, Preparation, Measurement, BeamSplitter };

struct GateFiring {
    std::string gate;
    std::string slot;  // spacetime point; "A|A'" for a time-delocalised operation
    GateKind kind = GateKind::Preparation;
};

struct OperationTrace {
    std::string protocol;
    std::vector<GateFiring> firings;
};

enum class CountingMode { VacuumInclusive, Flag };

/// VacuumInclusive counts every agent interaction, with the photon or with
/// the vacuum; Flag counts only interactions where the particle enters.
/// Preparations, beam splitters and bare detectors are never counted.
int count_operations(const OperationTrace &trace, CountingMode mode);

/// Trace of a dSD run ending in outcome (a', b').
OperationTrace dsd_trace(const DsdInputs &inputs, int a_prime, int b_prime, HadamardSign sign = HadamardSign::Standard);
/// Trace of the dSD run for its most probable outcome.
OperationTrace dsd_trace(const DsdInputs &inputs, HadamardSign sign = HadamardSign::Standard);
OperationTrace switch_trace(const SwitchSpec &spec, double tol = kDefaultTolerance);

std::string_view gate_kind_name(GateKind kind);

}  // namespace pmfock
