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
 * Labeled dense tensors: named finite-dimensional spaces, vectors whose axes
 * are those spaces, and operators between lists of spaces.
 *
 * Amplitudes are stored row-major over the ordered space list (the last space
 * varies fastest). Every binary operation matches axes by label, so callers
 * never depend on the order in which spaces happen to be stored.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pmfock/errors.hpp"

namespace pmfock {

using Complex = std::complex<double>;
using Amplitudes = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kDefaultTolerance = 1e-10;

struct LabeledSpace {
    std::string label;
    std::size_t dim = 1;

    LabeledSpace(std::string label, std::size_t dim);

    bool operator==(const LabeledSpace &) const = default;
};

using SpaceList = std::vector<LabeledSpace>;

std::size_t total_dim(const SpaceList &spaces);

/// Owns the set of labels declared in one modelling context.
class SpaceRegistry {
  public:
    LabeledSpace declare(std::string label, std::size_t dim);
    const LabeledSpace *find(std::string_view label) const;
    bool contains(std::string_view label) const { return find(label) != nullptr; }
    std::size_t size() const { return spaces_.size(); }

  private:
    std::map<std::string, LabeledSpace, std::less<>> spaces_;
};

LabeledSpace declare_space(SpaceRegistry &registry, std::string label, std::size_t dim);

class LabeledVector {
  public:
    /// The scalar zero.
    LabeledVector();
    LabeledVector(SpaceList spaces, Amplitudes amps);

    static LabeledVector scalar(Complex value);
    static LabeledVector zero(SpaceList spaces);

    const SpaceList &spaces() const { return spaces_; }
    const Amplitudes &amps() const { return amps_; }
    std::size_t size() const { return static_cast<std::size_t>(amps_.size()); }
    std::size_t rank() const { return spaces_.size(); }
    bool is_scalar() const { return spaces_.empty(); }
    Complex scalar_value() const;

    std::optional<std::size_t> position(std::string_view label) const;
    bool has_label(std::string_view label) const { return position(label).has_value(); }
    std::vector<std::string> labels() const;

    /// Amplitude at a multi-index given in stored space order.
    Complex at(std::span<const std::size_t> index) const;
    /// Amplitude at the basis state named by label -> index pairs covering every space.
    Complex at(const std::map<std::string, std::size_t, std::less<>> &index) const;

    /// Same vector with its axes reordered to `order` (a permutation of labels()).
    LabeledVector permuted(std::span<const std::string> order) const;

    LabeledVector operator*(Complex factor) const;
    /// Sum of two vectors over the same label set (order-insensitive).
    LabeledVector operator+(const LabeledVector &other) const;
    LabeledVector operator-(const LabeledVector &other) const;

  private:
    SpaceList spaces_;
    Amplitudes amps_;
};

/// Linear map from the product of `in_spaces` to the product of `out_spaces`;
/// entries have shape (prod out dims) x (prod in dims). An operator acting
/// "on" a space uses the same label on both sides.
class LabeledOperator {
  public:
    LabeledOperator(SpaceList in_spaces, SpaceList out_spaces, Matrix entries);

    static LabeledOperator identity(const SpaceList &spaces);

    const SpaceList &in_spaces() const { return in_; }
    const SpaceList &out_spaces() const { return out_; }
    const Matrix &entries() const { return entries_; }

    LabeledOperator adjoint() const;
    LabeledOperator conjugated() const;
    LabeledOperator relabeled(const std::map<std::string, std::string> &mapping) const;
    LabeledOperator permuted(std::span<const std::string> in_order, std::span<const std::string> out_order) const;

  private:
    SpaceList in_;
    SpaceList out_;
    Matrix entries_;
};

LabeledVector basis_state(const LabeledSpace &space, std::size_t index);
/// Product basis state |i_1>|i_2>... over several spaces.
LabeledVector basis_state(const SpaceList &spaces, std::span<const std::size_t> indices);

LabeledVector tensor(const LabeledVector &v, const LabeledVector &w);

/// result[rest] = sum_s conj(bra[s]) ket[s, rest], with s running over the
/// bra's labels. A bra covering every ket label yields a scalar.
LabeledVector partial_inner(const LabeledVector &bra, const LabeledVector &ket);
Complex inner(const LabeledVector &bra, const LabeledVector &ket);

LabeledVector apply_op(const LabeledOperator &op, const LabeledVector &v);

double norm_sq(const LabeledVector &v);
LabeledVector conjugate(const LabeledVector &v);
LabeledVector relabel(const LabeledVector &v, const std::map<std::string, std::string> &mapping);
LabeledVector relabel(const LabeledVector &v, const std::string &from, const std::string &to);

/// Drops dimension-1 spaces; amplitudes are unchanged.
LabeledVector squeeze(const LabeledVector &v);

/// op2 after op1. op1's outputs must match op2's inputs as a label set.
LabeledOperator compose(const LabeledOperator &op2, const LabeledOperator &op1);
/// Tensor product of operators on disjoint labels.
LabeledOperator kron(const LabeledOperator &a, const LabeledOperator &b);

/// Largest absolute amplitude difference after aligning label order. Throws
/// LabelMismatch if the label sets differ.
double max_abs_diff(const LabeledVector &v, const LabeledVector &w);
bool approx_equal(const LabeledVector &v, const LabeledVector &w, double tol = kDefaultTolerance);
bool approx_equal(const LabeledOperator &a, const LabeledOperator &b, double tol = kDefaultTolerance);

bool is_unitary(const Matrix &m, double tol = kDefaultTolerance);

namespace detail {

/// Reorders a row-major tensor. perm[new_axis] = old_axis.
Amplitudes permute_axes(const Amplitudes &amps, std::span<const std::size_t> dims, std::span<const std::size_t> perm);

}  // namespace detail

}  // namespace pmfock
