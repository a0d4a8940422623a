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

#include "pmfock/protocols.hpp"

#include <algorithm>
#include <cmath>

#include "pmfock/fock.hpp"

namespace pmfock {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// A photon is "present" at a gate when its occupation probability exceeds this.
constexpr double kPresenceThreshold = 1e-12;

// Spaces of the dSD diagram. Trivial (dim 1) spaces give preparations and
// detectors the same input -> output signature as every other gate.
struct DsdSpaces {
    LabeledSpace L_I{"L_I", 1}, L_O{"L_O", 2};
    LabeledSpace V_I{"V_I", 1}, V_O{"V_O", 2};
    LabeledSpace S_IL{"S_I^L", 2}, S_IV{"S_I^V", 2}, S_OA{"S_O^A", 2}, S_OB{"S_O^B", 2};
    LabeledSpace A_I{"A_I", 2}, A_O{"A_O", 2};
    LabeledSpace B_I{"B_I", 2}, B_O{"B_O", 2};
    LabeledSpace Sp_IA{"S'_I^A", 2}, Sp_IB{"S'_I^B", 2}, Sp_OA{"S'_O^A", 2}, Sp_OB{"S'_O^B", 2};
    LabeledSpace Ap_I{"A'_I", 2}, Ap_O{"A'_O", 1};
    LabeledSpace Bp_I{"B'_I", 2}, Bp_O{"B'_O", 1};

    std::vector<Wire> wires() const {
        return {{L_O, S_IL},  {V_O, S_IV},  {S_OA, A_I},  {S_OB, B_I},
                {A_O, Sp_IA}, {B_O, Sp_IB}, {Sp_OA, Ap_I}, {Sp_OB, Bp_I}};
    }
};

struct SwitchSpaces {
    static constexpr std::size_t kArm = 3;
    LabeledSpace L_I{"L_I", 1}, L_O{"L_O", kArm};
    LabeledSpace V_I{"V_I", 1}, V_O{"V_O", kArm};
    LabeledSpace S_IL{"S_I^L", kArm}, S_IV{"S_I^V", kArm}, S_OA{"S_O^A", kArm}, S_OB{"S_O^B", kArm};
    LabeledSpace A_I{"A_I", kArm}, A_O{"A_O", kArm};
    LabeledSpace B_I{"B_I", kArm}, B_O{"B_O", kArm};
    LabeledSpace Ap_I{"A'_I", kArm}, Ap_O{"A'_O", kArm};
    LabeledSpace Bp_I{"B'_I", kArm}, Bp_O{"B'_O", kArm};
    LabeledSpace Sp_IA{"S'_I^A", kArm}, Sp_IB{"S'_I^B", kArm}, Sp_OA{"S'_O^A", kArm}, Sp_OB{"S'_O^B", kArm};
    LabeledSpace D1_I{"D1_I", kArm}, D1_O{"D1_O", 1};
    LabeledSpace D2_I{"D2_I", kArm}, D2_O{"D2_O", 1};

    // The middle wires cross: Alice's first slot feeds Bob's second and vice versa.
    std::vector<Wire> wires() const {
        return {{L_O, S_IL},   {V_O, S_IV},   {S_OA, A_I},   {S_OB, B_I},   {A_O, Bp_I},
                {B_O, Ap_I},   {Ap_O, Sp_IA}, {Bp_O, Sp_IB}, {Sp_OA, D1_I}, {Sp_OB, D2_I}};
    }
};

void check_bit(int value, const char *name) {
    if (value != 0 && value != 1) {
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be 0 or 1, got " + std::to_string(value));
    }
}

Matrix phase_matrix(int bit) {
    Matrix m = Matrix::Identity(2, 2);
    m(1, 1) = bit == 0 ? 1.0 : -1.0;
    return m;
}

// |0><0| (+) rotation on the photon's polarisation.
Matrix agent_matrix(const Matrix &rotation) {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 1.0;
    m.block(1, 1, 2, 2) = rotation;
    return m;
}

// Probability that `label` holds a photon in `state`, relative to its norm.
double occupation_probability(const LabeledVector &state, const LabeledSpace &space) {
    const double total = norm_sq(state);
    if (total == 0.0) return 0.0;
    auto vacuum = partial_inner(basis_state(space, 0), state);
    return std::max(0.0, 1.0 - norm_sq(vacuum) / total);
}

}  // namespace

// ---------------------------------------------------------------------------
// shared gate builders

Matrix beam_splitter_matrix(std::size_t arm_dim, HadamardSign sign) {
    if (arm_dim < 2) throw Error(ErrorCode::InvalidDimension, "beam splitter arms need a photon state");
    const auto d = static_cast<Eigen::Index>(arm_dim);
    Matrix m = Matrix::Identity(d * d, d * d);
    const double flip = sign == HadamardSign::Standard ? 1.0 : -1.0;
    for (Eigen::Index p = 1; p < d; ++p) {
        const Eigen::Index in_first = p * d;  // |p,0>
        const Eigen::Index in_second = p;     // |0,p>
        m(in_first, in_first) = kInvSqrt2;
        m(in_second, in_first) = flip * kInvSqrt2;
        m(in_first, in_second) = kInvSqrt2;
        m(in_second, in_second) = -flip * kInvSqrt2;
    }
    return m;
}

InstrumentCJ preparation_gate(const std::string &name, const LabeledSpace &trivial_in, const LabeledSpace &out,
                              const Amplitudes &state) {
    LabeledOperator op({trivial_in}, {out}, state);
    return InstrumentCJ{name, cj_vector(op), {}, {}};
}

InstrumentCJ measurement_gate(const std::string &name, const LabeledSpace &in, const LabeledSpace &trivial_out,
                              std::size_t outcome) {
    if (outcome >= in.dim) {
        throw Error(ErrorCode::IndexOutOfRange, "outcome " + std::to_string(outcome) + " on '" + in.label + "'");
    }
    Matrix effect = Matrix::Zero(1, static_cast<Eigen::Index>(in.dim));
    effect(0, static_cast<Eigen::Index>(outcome)) = 1.0;
    LabeledOperator op({in}, {trivial_out}, effect);
    return InstrumentCJ{name, cj_vector(op), {}, {{name, static_cast<int>(outcome)}}};
}

InstrumentCJ unitary_gate(const std::string &name, const LabeledOperator &op) {
    return InstrumentCJ{name, cj_vector(op), {}, {}};
}

// ---------------------------------------------------------------------------
// dSD

void DsdInputs::validate() const {
    check_bit(a, "a");
    check_bit(b, "b");
}

GateSet build_dsd(const DsdInputs &inputs, int a_prime, int b_prime, HadamardSign sign) {
    inputs.validate();
    check_bit(a_prime, "a'");
    check_bit(b_prime, "b'");
    const DsdSpaces sp;
    const Matrix h = beam_splitter_matrix(2, sign);

    GateSet set;
    set.gates.push_back(preparation_gate("L", sp.L_I, sp.L_O, Amplitudes::Unit(2, 1)));
    set.gates.push_back(preparation_gate("V", sp.V_I, sp.V_O, Amplitudes::Unit(2, 0)));
    set.gates.push_back(unitary_gate("S", LabeledOperator({sp.S_IL, sp.S_IV}, {sp.S_OA, sp.S_OB}, h)));
    auto alice = unitary_gate("A", LabeledOperator({sp.A_I}, {sp.A_O}, phase_matrix(inputs.a)));
    alice.settings["a"] = inputs.a;
    set.gates.push_back(std::move(alice));
    auto bob = unitary_gate("B", LabeledOperator({sp.B_I}, {sp.B_O}, phase_matrix(inputs.b)));
    bob.settings["b"] = inputs.b;
    set.gates.push_back(std::move(bob));
    set.gates.push_back(unitary_gate("S'", LabeledOperator({sp.Sp_IA, sp.Sp_IB}, {sp.Sp_OA, sp.Sp_OB}, h)));
    auto detector_a = measurement_gate("A'", sp.Ap_I, sp.Ap_O, static_cast<std::size_t>(a_prime));
    detector_a.outcomes["a'"] = a_prime;
    set.gates.push_back(std::move(detector_a));
    auto detector_b = measurement_gate("B'", sp.Bp_I, sp.Bp_O, static_cast<std::size_t>(b_prime));
    detector_b.outcomes["b'"] = b_prime;
    set.gates.push_back(std::move(detector_b));
    set.process = ProcessVector(sp.wires());
    return set;
}

std::array<DsdOutcome, 4> dsd_distribution(const DsdInputs &inputs, HadamardSign sign) {
    std::array<DsdOutcome, 4> out;
    std::size_t n = 0;
    for (int ap = 0; ap <= 1; ++ap) {
        for (int bp = 0; bp <= 1; ++bp) {
            auto set = build_dsd(inputs, ap, bp, sign);
            out[n++] = DsdOutcome{ap, bp, probability_from_vectors(set.gates, set.process)};
        }
    }
    return out;
}

DsdGuesses dsd_guesses(const DsdInputs &inputs, HadamardSign sign) {
    auto dist = dsd_distribution(inputs, sign);
    const auto best = std::max_element(dist.begin(), dist.end(), [](const DsdOutcome &x, const DsdOutcome &y) {
        return x.probability < y.probability;
    });
    DsdGuesses g;
    // Alice's photon means even parity, Bob's means odd.
    if (best->a_prime == 1 && best->b_prime == 0) {
        g.parity = 0;
    } else if (best->a_prime == 0 && best->b_prime == 1) {
        g.parity = 1;
    } else {
        g.parity = -1;
    }
    if (g.parity < 0 || best->probability < 1.0 - 1e-9) {
        g.x = g.y = -1;
        g.success = false;
        return g;
    }
    g.x = g.parity ^ inputs.a;
    g.y = g.parity ^ inputs.b;
    g.success = g.x == inputs.b && g.y == inputs.a;
    return g;
}

LabeledVector dsd_intermediate_state(const DsdInputs &inputs, DsdStage stage, HadamardSign sign) {
    auto set = build_dsd(inputs, 0, 0, sign);
    std::size_t count = 0;
    switch (stage) {
    case DsdStage::AfterPrep: count = 2; break;
    case DsdStage::AfterS: count = 3; break;
    case DsdStage::AfterA: count = 4; break;
    case DsdStage::AfterB: count = 5; break;
    case DsdStage::AfterSPrime: count = 6; break;
    }
    return contract(std::span(set.gates).first(count), set.process);
}

GateSet build_dsd_fock(const DsdInputs &inputs, int a_prime, int b_prime) {
    inputs.validate();
    check_bit(a_prime, "a'");
    check_bit(b_prime, "b'");
    const FockSpec mode(1, Statistics::Boson, 1);
    const FockSpec two_modes(2, Statistics::Boson, 1);
    auto space = [&](const char *label) { return fock_space(mode, label); };
    const LabeledSpace trivial_l("L_I", 1), trivial_v("V_I", 1), trivial_ap("A'_O", 1), trivial_bp("B'_O", 1);

    const Amplitudes vacuum = Amplitudes::Unit(static_cast<Eigen::Index>(mode.dim()), 0);
    const Amplitudes photon = creation_op(mode, 1).entries() * vacuum;

    Matrix splitter(2, 2);
    splitter << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;  // rows: outputs A, B; cols: inputs L, V
    auto lift_splitter = [&](const std::string &in, const std::string &out, const std::vector<std::string> &in_modes,
                             const std::vector<std::string> &out_modes) {
        auto lifted = lift_single_particle_unitary(splitter, two_modes, in, out);
        return factorize_modes(lifted, two_modes, in_modes, out_modes, 1);
    };
    auto phase = [&](int bit, const char *in, const char *out) {
        Matrix u(1, 1);
        u(0, 0) = bit == 0 ? 1.0 : -1.0;
        return lift_single_particle_unitary(u, mode, in, out);
    };
    auto detector = [&](const std::string &name, const char *in, const LabeledSpace &trivial, int occupation) {
        const auto idx = fock_index(mode, FockBasisState{{static_cast<std::size_t>(occupation)}});
        return measurement_gate(name, space(in), trivial, idx);
    };

    GateSet set;
    set.gates.push_back(preparation_gate("L", trivial_l, space("L_O"), photon));
    set.gates.push_back(preparation_gate("V", trivial_v, space("V_O"), vacuum));
    set.gates.push_back(unitary_gate("S", lift_splitter("S_I", "S_O", {"S_I^L", "S_I^V"}, {"S_O^A", "S_O^B"})));
    set.gates.push_back(InstrumentCJ{"A", fock_cj_vector(mode, phase(inputs.a, "A_I", "A_O")), {{"a", inputs.a}}, {}});
    set.gates.push_back(InstrumentCJ{"B", fock_cj_vector(mode, phase(inputs.b, "B_I", "B_O")), {{"b", inputs.b}}, {}});
    set.gates.push_back(
        unitary_gate("S'", lift_splitter("S'_I", "S'_O", {"S'_I^A", "S'_I^B"}, {"S'_O^A", "S'_O^B"})));
    set.gates.push_back(detector("A'", "A'_I", trivial_ap, a_prime));
    set.gates.push_back(detector("B'", "B'_I", trivial_bp, b_prime));

    // Every wire carries the single-mode Fock transport vector.
    const std::vector<std::pair<const char *, const char *>> wiring = {
        {"L_O", "S_I^L"}, {"V_O", "S_I^V"}, {"S_O^A", "A_I"},   {"S_O^B", "B_I"},
        {"A_O", "S'_I^A"}, {"B_O", "S'_I^B"}, {"S'_O^A", "A'_I"}, {"S'_O^B", "B'_I"}};
    std::vector<Wire> wires;
    LabeledVector w = LabeledVector::scalar(1.0);
    for (const auto &[from, to] : wiring) {
        wires.push_back(Wire{space(from), space(to)});
        w = tensor(w, fock_transport_vector(mode, from, to));
    }
    set.process = ProcessVector(std::move(wires));
    // The Fock-built vector must agree with the generic wiring product.
    if (max_abs_diff(w, set.process.vector()) > 0.0) {
        throw Error(ErrorCode::InvalidArgument, "Fock transport vectors disagree with the wiring product");
    }
    return set;
}

std::array<DsdOutcome, 4> dsd_distribution_fock(const DsdInputs &inputs) {
    std::array<DsdOutcome, 4> out;
    std::size_t n = 0;
    for (int ap = 0; ap <= 1; ++ap) {
        for (int bp = 0; bp <= 1; ++bp) {
            auto set = build_dsd_fock(inputs, ap, bp);
            out[n++] = DsdOutcome{ap, bp, probability_from_vectors(set.gates, set.process.vector())};
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// optical switch

void SwitchSpec::validate(double tol) const {
    if (u.rows() != 2 || u.cols() != 2 || v.rows() != 2 || v.cols() != 2) {
        throw Error(ErrorCode::ShapeError, "polarisation rotations must be 2x2");
    }
    if (!is_unitary(u, tol)) throw Error(ErrorCode::NonUnitary, "U is not unitary");
    if (!is_unitary(v, tol)) throw Error(ErrorCode::NonUnitary, "V is not unitary");
    if (polarization.size() != 2) throw Error(ErrorCode::ShapeError, "polarisation must have two amplitudes");
    if (std::abs(polarization.squaredNorm() - 1.0) > tol) {
        throw Error(ErrorCode::InvalidArgument, "input polarisation is not normalised");
    }
}

GateSet build_switch(const SwitchSpec &spec, std::size_t d1_outcome, std::size_t d2_outcome, SwitchBranch branch,
                     double tol) {
    spec.validate(tol);
    const SwitchSpaces sp;
    const auto arm = static_cast<Eigen::Index>(SwitchSpaces::kArm);

    Matrix splitter = beam_splitter_matrix(SwitchSpaces::kArm);
    Matrix first_splitter = splitter;
    if (branch != SwitchBranch::Superposed) {
        // keep only outputs with the photon on the selected arm and vacuum on the other
        for (Eigen::Index row = 0; row < first_splitter.rows(); ++row) {
            const Eigen::Index on_a = row / arm, on_b = row % arm;
            const bool keep = branch == SwitchBranch::AliceFirst ? (on_a > 0 && on_b == 0) : (on_a == 0 && on_b > 0);
            if (!keep) first_splitter.row(row).setZero();
        }
    }
    Amplitudes photon = Amplitudes::Zero(arm);
    photon.segment(1, 2) = spec.polarization;

    GateSet set;
    set.gates.push_back(preparation_gate("L", sp.L_I, sp.L_O, photon));
    set.gates.push_back(preparation_gate("V", sp.V_I, sp.V_O, Amplitudes::Unit(arm, 0)));
    set.gates.push_back(unitary_gate("S", LabeledOperator({sp.S_IL, sp.S_IV}, {sp.S_OA, sp.S_OB}, first_splitter)));
    set.gates.push_back(unitary_gate("A", LabeledOperator({sp.A_I}, {sp.A_O}, agent_matrix(spec.u))));
    set.gates.push_back(unitary_gate("B", LabeledOperator({sp.B_I}, {sp.B_O}, agent_matrix(spec.v))));
    set.gates.push_back(unitary_gate("A'", LabeledOperator({sp.Ap_I}, {sp.Ap_O}, agent_matrix(spec.u))));
    set.gates.push_back(unitary_gate("B'", LabeledOperator({sp.Bp_I}, {sp.Bp_O}, agent_matrix(spec.v))));
    set.gates.push_back(unitary_gate("S'", LabeledOperator({sp.Sp_IA, sp.Sp_IB}, {sp.Sp_OA, sp.Sp_OB}, splitter)));
    set.gates.push_back(measurement_gate("D1", sp.D1_I, sp.D1_O, d1_outcome));
    set.gates.push_back(measurement_gate("D2", sp.D2_I, sp.D2_O, d2_outcome));
    set.process = ProcessVector(sp.wires());
    return set;
}

LabeledVector switch_state_before_recombination(const SwitchSpec &spec, SwitchBranch branch, double tol) {
    auto set = build_switch(spec, 0, 0, branch, tol);
    // leave out the S' -> detector wires so only S'_I^A, S'_I^B remain
    auto wires = set.process.wires();
    wires.erase(wires.end() - 2, wires.end());
    return contract(std::span(set.gates).first(7), ProcessVector(std::move(wires)));
}

Amplitudes DetectorResult::state() const {
    const double n = amplitude.norm();
    if (n == 0.0) return Amplitudes::Zero(2);
    return amplitude / n;
}

SwitchResult switch_distribution(const SwitchSpec &spec, SwitchBranch branch, double tol) {
    SwitchResult result;
    for (std::size_t d1 = 0; d1 < SwitchSpaces::kArm; ++d1) {
        for (std::size_t d2 = 0; d2 < SwitchSpaces::kArm; ++d2) {
            auto set = build_switch(spec, d1, d2, branch, tol);
            const Complex amp = amplitude_from_vectors(set.gates, set.process);
            const double p = std::norm(amp);
            if (d1 > 0 && d2 == 0) {
                result.d1.probability += p;
                result.d1.amplitude[static_cast<Eigen::Index>(d1 - 1)] = amp;
            } else if (d1 == 0 && d2 > 0) {
                result.d2.probability += p;
                result.d2.amplitude[static_cast<Eigen::Index>(d2 - 1)] = amp;
            } else {
                result.other += p;
            }
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// operation counting

std::string_view gate_kind_name(GateKind kind) {
    switch (kind) {
    case GateKind::ParticleInteraction: return "particle-interaction";
    case GateKind::VacuumInteraction: return "vacuum-interaction";
    case GateKind::Preparation: return "preparation";
    case GateKind::Measurement: return "measurement";
    case GateKind::BeamSplitter: return "beam-splitter";
    }
    return "unknown";
}

int count_operations(const OperationTrace &trace, CountingMode mode) {
    int n = 0;
    for (const auto &f : trace.firings) {
        if (f.kind == GateKind::ParticleInteraction) ++n;
        if (f.kind == GateKind::VacuumInteraction && mode == CountingMode::VacuumInclusive) ++n;
    }
    return n;
}

OperationTrace dsd_trace(const DsdInputs &inputs, int a_prime, int b_prime, HadamardSign sign) {
    inputs.validate();
    check_bit(a_prime, "a'");
    check_bit(b_prime, "b'");
    const DsdSpaces sp;
    const auto after_s = dsd_intermediate_state(inputs, DsdStage::AfterS, sign);
    auto agent = [&](const char *gate, const LabeledSpace &in) {
        const bool photon = occupation_probability(after_s, in) > kPresenceThreshold;
        return GateFiring{gate, gate, photon ? GateKind::ParticleInteraction : GateKind::VacuumInteraction};
    };
    auto detector = [](const char *gate, int outcome) {
        return GateFiring{gate, gate, outcome == 1 ? GateKind::ParticleInteraction : GateKind::VacuumInteraction};
    };
    OperationTrace trace;
    trace.protocol = "dsd";
    trace.firings = {
        {"L", "L", GateKind::Preparation},
        {"V", "V", GateKind::Preparation},
        {"S", "S", GateKind::BeamSplitter},
        agent("A", sp.A_I),
        agent("B", sp.B_I),
        {"S'", "S'", GateKind::BeamSplitter},
        detector("A'", a_prime),
        detector("B'", b_prime),
    };
    return trace;
}

OperationTrace dsd_trace(const DsdInputs &inputs, HadamardSign sign) {
    auto dist = dsd_distribution(inputs, sign);
    const auto best = std::max_element(dist.begin(), dist.end(), [](const DsdOutcome &x, const DsdOutcome &y) {
        return x.probability < y.probability;
    });
    return dsd_trace(inputs, best->a_prime, best->b_prime, sign);
}

OperationTrace switch_trace(const SwitchSpec &spec, double tol) {
    const SwitchSpaces sp;
    auto set = build_switch(spec, 0, 0, SwitchBranch::Superposed, tol);
    const auto gates = std::span<const InstrumentCJ>(set.gates);
    const auto after_s = contract(gates.first(3), set.process);
    const auto after_first_slot = contract(gates.first(5), set.process);

    // U and V are each one operation spread over two slots; so is each
    // agent's interaction with the vacuum.
    auto delocalised = [&](const std::string &agent, const std::string &op, const LabeledSpace &early,
                           const LabeledSpace &late) {
        const double photon = occupation_probability(after_s, early) + occupation_probability(after_first_slot, late);
        const double vacuum = 2.0 - photon;
        const std::string slot = early.label.substr(0, 1) + "|" + late.label.substr(0, 2);
        std::vector<GateFiring> out;
        if (photon > kPresenceThreshold) out.push_back({op, slot, GateKind::ParticleInteraction});
        if (vacuum > kPresenceThreshold) out.push_back({"vacuum@" + agent, slot, GateKind::VacuumInteraction});
        return out;
    };

    OperationTrace trace;
    trace.protocol = "switch";
    trace.firings = {{"L", "L", GateKind::Preparation}, {"V", "V", GateKind::Preparation}, {"S", "S", GateKind::BeamSplitter}};
    for (auto &f : delocalised("Alice", "U", sp.A_I, sp.Ap_I)) trace.firings.push_back(f);
    for (auto &f : delocalised("Bob", "V", sp.B_I, sp.Bp_I)) trace.firings.push_back(f);
    trace.firings.push_back({"S'", "S'", GateKind::BeamSplitter});
    trace.firings.push_back({"D1", "D1", GateKind::Measurement});
    trace.firings.push_back({"D2", "D2", GateKind::Measurement});
    return trace;
}

}  // namespace pmfock
