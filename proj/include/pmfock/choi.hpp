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
 * Choi-Jamiolkowski representations of gate operations, process vectors
 * built from wirings, and outcome probabilities.
 *
 * Convention: a pure gate is stored by its CJ vector
 *     cj_vector(M) = sum_i |i>^{G_I} (M^* |i>)^{G_O},
 * and every contraction goes through partial_inner, which conjugates its bra.
 * Builders therefore never conjugate anything themselves.
 */

#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pmfock/tensor.hpp"

namespace pmfock {

struct Wire {
    LabeledSpace from_space;  // output space of the earlier gate
    LabeledSpace to_space;    // input space of the later gate
};

/// Product of one transport vector per wire. The dense vector is built only
/// on request: contraction goes wire by wire, so wirings far larger than
/// memory (the optical switch has 3^20 amplitudes) remain cheap to evaluate.
class ProcessVector {
  public:
    ProcessVector() = default;
    /// Throws DimensionMismatch or LabelCollision for an invalid wiring.
    explicit ProcessVector(std::vector<Wire> wires);

    const std::vector<Wire> &wires() const { return wires_; }
    SpaceList spaces() const;
    /// Product of all wired dimensions, as a double since it may overflow.
    double amplitude_count() const;
    /// prod over wires of dim(wire).
    double norm_sq() const;
    /// Dense tensor product of every transport vector; ShapeError beyond 2^22 amplitudes.
    LabeledVector vector() const;

  private:
    std::vector<Wire> wires_;
};

/// One gate's instrument element for fixed classical settings and outcomes.
struct InstrumentCJ {
    std::string gate;
    std::variant<LabeledVector, LabeledOperator> cj;
    std::map<std::string, int> settings;
    std::map<std::string, int> outcomes;

    bool is_vector() const { return std::holds_alternative<LabeledVector>(cj); }
    const LabeledVector &vector() const;
    /// The CJ matrix; for a vector-form gate this is |c><c|.
    LabeledOperator matrix() const;
};

/// Finite Kraus-style term list of a completely positive map G_I -> G_O.
using KrausChannel = std::vector<LabeledOperator>;

LabeledVector transport_vector(const LabeledSpace &in_space, const LabeledSpace &out_space);

/// [I (x) op^*] |1>>^{G_I G_I}, over G_I followed by G_O.
LabeledVector cj_vector(const LabeledOperator &op);

/// Sum over terms of [(I (x) K)(|1>><<1|)(I (x) K^dagger)]^T, as an operator on G_I (x) G_O.
LabeledOperator cj_matrix(const KrausChannel &channel);
/// |c><c| for a CJ vector c.
LabeledOperator cj_matrix(const LabeledVector &cj);

ProcessVector process_vector_from_wiring(const std::vector<Wire> &wires);

/// Successive partial inner products of every gate's CJ vector with `w`.
/// Dimension-1 spaces are dropped first. No coverage check, so this also
/// yields the intermediate states of a partial contraction.
LabeledVector contract(std::span<const InstrumentCJ> gates, const LabeledVector &w);
/// Same result as contract(gates, w.vector()), but each wire's transport
/// vector joins the state only when a gate first touches it. Wires no gate
/// touched are appended at the end.
LabeledVector contract(std::span<const InstrumentCJ> gates, const ProcessVector &w);

/// Full contraction; the gates' spaces must partition W's spaces exactly.
Complex amplitude_from_vectors(std::span<const InstrumentCJ> gates, const LabeledVector &w);
Complex amplitude_from_vectors(std::span<const InstrumentCJ> gates, const ProcessVector &w);
double probability_from_vectors(std::span<const InstrumentCJ> gates, const ProcessVector &w);
double probability_from_vectors(std::span<const InstrumentCJ> gates, const LabeledVector &w);

/// A Hermitian operator held as sum_r weight_r |v_r><v_r|. The dSD process
/// matrix lives on 2^16 dimensions, so its dense form is out of reach.
struct RankOneSum {
    std::vector<std::pair<double, LabeledVector>> terms;

    static RankOneSum from_process_vector(const ProcessVector &w);
    SpaceList spaces() const;
};

/// Dense |W>><<W| (only sensible for small wirings).
LabeledOperator process_matrix(const ProcessVector &w);

double probability_from_matrices(std::span<const InstrumentCJ> gates, const LabeledOperator &w);
double probability_from_matrices(std::span<const InstrumentCJ> gates, const RankOneSum &w);

struct AxiomReport {
    bool positive = false;
    bool trace_ok = false;
    double trace_value = 0.0;
    double expected_trace = 0.0;
    double min_eigenvalue = 0.0;
};

inline constexpr double kPositivityTolerance = 1e-9;

/// Positivity (min eigenvalue >= -1e-9 ||W||) and Tr W == prod(out_space_dims).
AxiomReport check_process_axioms(const LabeledOperator &w, std::span<const std::size_t> out_space_dims,
                                 double tol = kDefaultTolerance);
AxiomReport check_process_axioms(const RankOneSum &w, std::span<const std::size_t> out_space_dims,
                                 double tol = kDefaultTolerance);
/// |W>><<W| for a wiring, using <W|W> = prod of wire dims instead of the dense vector.
AxiomReport check_process_axioms(const ProcessVector &w, std::span<const std::size_t> out_space_dims,
                                 double tol = kDefaultTolerance);

}  // namespace pmfock
