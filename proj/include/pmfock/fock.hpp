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
 * Truncated Fock spaces for identical particles.
 *
 * A FockSpec fixes the number of single-particle modes, the statistics and a
 * cutoff on the total particle number. Basis states are occupation tuples,
 * ordered by total particle number and, within a sector, with higher
 * occupation of earlier modes first: (0,0), (1,0), (0,1), (2,0), (1,1), ...
 *
 * Fermionic signs follow Jordan-Wigner ordering by mode index, so that
 * |s> = (a_1^dag)^{s_1} ... (a_d^dag)^{s_d} |0> carries no extra sign.
 */

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pmfock/tensor.hpp"

namespace pmfock {

enum class Statistics { Boson, Fermion };

struct FockSpec {
    std::size_t modes = 1;
    Statistics statistics = Statistics::Boson;
    std::size_t cutoff = 1;

    /// Validates modes >= 1; a fermionic cutoff is clamped to the mode count.
    FockSpec(std::size_t modes, Statistics statistics, std::size_t cutoff);
    static FockSpec fermion(std::size_t modes) { return FockSpec(modes, Statistics::Fermion, modes); }

    std::size_t dim() const;
    bool operator==(const FockSpec &) const = default;
};

struct FockBasisState {
    std::vector<std::size_t> occupations;

    std::size_t total() const;
    bool operator==(const FockBasisState &) const = default;
};

std::vector<FockBasisState> fock_basis(const FockSpec &spec);
/// Position of `state` in fock_basis(spec); throws IndexOutOfRange if absent.
std::size_t fock_index(const FockSpec &spec, const FockBasisState &state);
/// Basis positions of the k-particle sector.
std::vector<std::size_t> sector_indices(const FockSpec &spec, std::size_t k);

LabeledSpace fock_space(const FockSpec &spec, std::string label);

/// a_i^dag with 1-based mode index, acting on the space `label`.
LabeledOperator creation_op(const FockSpec &spec, std::size_t mode, const std::string &label = "F");
LabeledOperator annihilation_op(const FockSpec &spec, std::size_t mode, const std::string &label = "F");

/// |1_k>> = sum over occupations of total k of the normalised creation
/// strings applied to the vacuum on both factors.
LabeledVector k_transport_vector(const FockSpec &spec, std::size_t k, const std::string &in_label,
                                 const std::string &out_label);
/// sum_{k=0}^{cutoff} |1_k>>.
LabeledVector fock_transport_vector(const FockSpec &spec, const std::string &in_label, const std::string &out_label);

/// |0><0| + sum_k (1/k!) :U^{(x)k}: for U = sum_ij u_ij b_i^dag a_j, built
/// sector by sector as the (anti)symmetrised k-fold action of u.
LabeledOperator lift_single_particle_unitary(const Matrix &u, const FockSpec &spec, const std::string &in_label,
                                             const std::string &out_label, double tol = kDefaultTolerance);

/// The part of `op` mapping the k-particle sector into itself; zero elsewhere.
LabeledOperator restrict_to_sector(const LabeledOperator &op, const FockSpec &spec, std::size_t k);

struct SectorOperator {
    std::size_t k = 0;
    LabeledOperator op;  // maps the input Fock space to the output Fock space
};

/// sum_k [(I (x) M_k)(|1_k>><<1_k|)]^T over the input Fock space `spec`.
LabeledOperator fock_cj_matrix(const FockSpec &spec, const std::vector<SectorOperator> &sectors);

/// [I (x) M^*] |1>> using the Fock transport vector of `spec`.
LabeledVector fock_cj_vector(const FockSpec &spec, const LabeledOperator &op);

/// Rewrites an operator on one multi-mode Fock space as an operator on the
/// product of single-mode spaces (one label per mode, each truncated at
/// `per_mode_cutoff`). Product states outside the multi-mode truncation are
/// mapped to themselves.
LabeledOperator factorize_modes(const LabeledOperator &op, const FockSpec &spec,
                                const std::vector<std::string> &in_labels, const std::vector<std::string> &out_labels,
                                std::size_t per_mode_cutoff);

}  // namespace pmfock
