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

#include "pmfock/tensor.hpp"

#include <algorithm>
#include <set>

namespace pmfock {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::LabelCollision: return "LabelCollision";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CoverageError: return "CoverageError";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::NonUnitary: return "NonUnitary";
    case ErrorCode::DuplicateSector: return "DuplicateSector";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UndeclaredSpace: return "UndeclaredSpace";
    case ErrorCode::DuplicateWire: return "DuplicateWire";
    case ErrorCode::DuplicateDeclaration: return "DuplicateDeclaration";
    case ErrorCode::EmptyCircuit: return "EmptyCircuit";
    case ErrorCode::CausalOrder: return "CausalOrder";
    case ErrorCode::UnwiredSpace: return "UnwiredSpace";
    }
    return "Unknown";
}

namespace {

void check_unique_labels(const SpaceList &spaces) {
    std::set<std::string_view> seen;
    for (const auto &s : spaces) {
        if (!seen.insert(s.label).second) {
            throw Error(ErrorCode::LabelCollision, "label '" + s.label + "' appears twice");
        }
    }
}

std::vector<std::size_t> dims_of(const SpaceList &spaces) {
    std::vector<std::size_t> dims;
    dims.reserve(spaces.size());
    for (const auto &s : spaces) dims.push_back(s.dim);
    return dims;
}

std::optional<std::size_t> find_label(const SpaceList &spaces, std::string_view label) {
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        if (spaces[i].label == label) return i;
    }
    return std::nullopt;
}

// Positions in `haystack` of each space in `needles`, checking dimensions.
std::vector<std::size_t> locate(const SpaceList &needles, const SpaceList &haystack) {
    std::vector<std::size_t> pos;
    pos.reserve(needles.size());
    for (const auto &n : needles) {
        auto p = find_label(haystack, n.label);
        if (!p) throw Error(ErrorCode::LabelMismatch, "label '" + n.label + "' not present");
        if (haystack[*p].dim != n.dim) {
            throw Error(ErrorCode::DimensionMismatch, "label '" + n.label + "' has dim " + std::to_string(n.dim) +
                                                          " vs " + std::to_string(haystack[*p].dim));
        }
        pos.push_back(*p);
    }
    return pos;
}

// Axis order that brings `front` to the front, keeping the rest in place order.
std::vector<std::size_t> front_permutation(const std::vector<std::size_t> &front, std::size_t rank) {
    std::vector<std::size_t> perm = front;
    std::vector<bool> used(rank, false);
    for (auto p : front) used[p] = true;
    for (std::size_t i = 0; i < rank; ++i) {
        if (!used[i]) perm.push_back(i);
    }
    return perm;
}

SpaceList select(const SpaceList &spaces, std::span<const std::size_t> idx) {
    SpaceList out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(spaces[i]);
    return out;
}

std::vector<std::string> labels_of(const SpaceList &spaces) {
    std::vector<std::string> out;
    out.reserve(spaces.size());
    for (const auto &s : spaces) out.push_back(s.label);
    return out;
}

}  // namespace

namespace detail {

Amplitudes permute_axes(const Amplitudes &amps, std::span<const std::size_t> dims, std::span<const std::size_t> perm) {
    const std::size_t rank = dims.size();
    bool identity = true;
    for (std::size_t i = 0; i < rank; ++i) identity = identity && perm[i] == i;
    if (identity) return amps;

    std::vector<std::size_t> old_strides(rank, 1);
    for (std::size_t i = rank; i-- > 1;) old_strides[i - 1] = old_strides[i] * dims[i];

    std::vector<std::size_t> new_dims(rank), stride_of_new(rank);
    for (std::size_t a = 0; a < rank; ++a) {
        new_dims[a] = dims[perm[a]];
        stride_of_new[a] = old_strides[perm[a]];
    }

    Amplitudes out(amps.size());
    std::vector<std::size_t> counter(rank, 0);
    std::size_t offset = 0;
    for (Eigen::Index n = 0; n < out.size(); ++n) {
        out[n] = amps[static_cast<Eigen::Index>(offset)];
        // odometer increment, last axis fastest
        for (std::size_t a = rank; a-- > 0;) {
            if (++counter[a] < new_dims[a]) {
                offset += stride_of_new[a];
                break;
            }
            offset -= stride_of_new[a] * (new_dims[a] - 1);
            counter[a] = 0;
        }
    }
    return out;
}

}  // namespace detail

LabeledSpace::LabeledSpace(std::string label_, std::size_t dim_) : label(std::move(label_)), dim(dim_) {
    if (dim == 0) throw Error(ErrorCode::InvalidDimension, "space '" + label + "' has dimension 0");
    if (label.empty()) throw Error(ErrorCode::InvalidArgument, "space label must not be empty");
}

std::size_t total_dim(const SpaceList &spaces) {
    std::size_t n = 1;
    for (const auto &s : spaces) n *= s.dim;
    return n;
}

LabeledSpace SpaceRegistry::declare(std::string label, std::size_t dim) {
    if (spaces_.contains(label)) throw Error(ErrorCode::DuplicateLabel, "space '" + label + "' already declared");
    LabeledSpace space(label, dim);
    spaces_.emplace(std::move(label), space);
    return space;
}

const LabeledSpace *SpaceRegistry::find(std::string_view label) const {
    auto it = spaces_.find(label);
    return it == spaces_.end() ? nullptr : &it->second;
}

LabeledSpace declare_space(SpaceRegistry &registry, std::string label, std::size_t dim) {
    return registry.declare(std::move(label), dim);
}

// ---------------------------------------------------------------------------
// LabeledVector

LabeledVector::LabeledVector() : amps_(Amplitudes::Zero(1)) {}

LabeledVector::LabeledVector(SpaceList spaces, Amplitudes amps) : spaces_(std::move(spaces)), amps_(std::move(amps)) {
    check_unique_labels(spaces_);
    if (static_cast<std::size_t>(amps_.size()) != total_dim(spaces_)) {
        throw Error(ErrorCode::ShapeError, "amplitude count " + std::to_string(amps_.size()) +
                                               " does not match product of dims " +
                                               std::to_string(total_dim(spaces_)));
    }
}

LabeledVector LabeledVector::scalar(Complex value) {
    Amplitudes a(1);
    a[0] = value;
    return LabeledVector({}, a);
}

LabeledVector LabeledVector::zero(SpaceList spaces) {
    auto n = static_cast<Eigen::Index>(total_dim(spaces));
    return LabeledVector(std::move(spaces), Amplitudes::Zero(n));
}

Complex LabeledVector::scalar_value() const {
    if (!is_scalar()) throw Error(ErrorCode::ShapeError, "vector is not a scalar");
    return amps_[0];
}

std::optional<std::size_t> LabeledVector::position(std::string_view label) const {
    return find_label(spaces_, label);
}

std::vector<std::string> LabeledVector::labels() const { return labels_of(spaces_); }

Complex LabeledVector::at(std::span<const std::size_t> index) const {
    if (index.size() != spaces_.size()) throw Error(ErrorCode::ShapeError, "multi-index rank mismatch");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < spaces_.size(); ++i) {
        if (index[i] >= spaces_[i].dim) throw Error(ErrorCode::IndexOutOfRange, "index out of range on " + spaces_[i].label);
        flat = flat * spaces_[i].dim + index[i];
    }
    return amps_[static_cast<Eigen::Index>(flat)];
}

Complex LabeledVector::at(const std::map<std::string, std::size_t, std::less<>> &index) const {
    std::vector<std::size_t> idx;
    idx.reserve(spaces_.size());
    for (const auto &s : spaces_) {
        auto it = index.find(s.label);
        if (it == index.end()) throw Error(ErrorCode::LabelMismatch, "no index given for '" + s.label + "'");
        idx.push_back(it->second);
    }
    if (index.size() != spaces_.size()) throw Error(ErrorCode::LabelMismatch, "index names labels not in vector");
    return at(idx);
}

LabeledVector LabeledVector::permuted(std::span<const std::string> order) const {
    if (order.size() != spaces_.size()) throw Error(ErrorCode::LabelMismatch, "permutation has wrong rank");
    std::vector<std::size_t> perm;
    perm.reserve(order.size());
    for (const auto &label : order) {
        auto p = position(label);
        if (!p) throw Error(ErrorCode::LabelMismatch, "label '" + label + "' not present");
        perm.push_back(*p);
    }
    auto dims = dims_of(spaces_);
    return LabeledVector(select(spaces_, perm), detail::permute_axes(amps_, dims, perm));
}

LabeledVector LabeledVector::operator*(Complex factor) const { return LabeledVector(spaces_, amps_ * factor); }

LabeledVector LabeledVector::operator+(const LabeledVector &other) const {
    auto aligned = other.permuted(labels());
    locate(aligned.spaces(), spaces_);
    return LabeledVector(spaces_, amps_ + aligned.amps());
}

LabeledVector LabeledVector::operator-(const LabeledVector &other) const { return *this + other * Complex(-1.0); }

// ---------------------------------------------------------------------------
// LabeledOperator

LabeledOperator::LabeledOperator(SpaceList in_spaces, SpaceList out_spaces, Matrix entries)
    : in_(std::move(in_spaces)), out_(std::move(out_spaces)), entries_(std::move(entries)) {
    check_unique_labels(in_);
    check_unique_labels(out_);
    if (static_cast<std::size_t>(entries_.rows()) != total_dim(out_) ||
        static_cast<std::size_t>(entries_.cols()) != total_dim(in_)) {
        throw Error(ErrorCode::ShapeError, "operator entries are " + std::to_string(entries_.rows()) + "x" +
                                               std::to_string(entries_.cols()) + ", spaces require " +
                                               std::to_string(total_dim(out_)) + "x" + std::to_string(total_dim(in_)));
    }
}

LabeledOperator LabeledOperator::identity(const SpaceList &spaces) {
    auto n = static_cast<Eigen::Index>(total_dim(spaces));
    return LabeledOperator(spaces, spaces, Matrix::Identity(n, n));
}

LabeledOperator LabeledOperator::adjoint() const { return LabeledOperator(out_, in_, entries_.adjoint()); }

LabeledOperator LabeledOperator::conjugated() const { return LabeledOperator(in_, out_, entries_.conjugate()); }

LabeledOperator LabeledOperator::relabeled(const std::map<std::string, std::string> &mapping) const {
    auto rename = [&](SpaceList spaces) {
        for (auto &s : spaces) {
            if (auto it = mapping.find(s.label); it != mapping.end()) s.label = it->second;
        }
        return spaces;
    };
    return LabeledOperator(rename(in_), rename(out_), entries_);
}

LabeledOperator LabeledOperator::permuted(std::span<const std::string> in_order,
                                          std::span<const std::string> out_order) const {
    auto index_of = [](const SpaceList &spaces, std::span<const std::string> order) {
        if (order.size() != spaces.size()) throw Error(ErrorCode::LabelMismatch, "permutation has wrong rank");
        std::vector<std::size_t> perm;
        for (const auto &label : order) {
            auto p = find_label(spaces, label);
            if (!p) throw Error(ErrorCode::LabelMismatch, "label '" + label + "' not present");
            perm.push_back(*p);
        }
        return perm;
    };
    auto pin = index_of(in_, in_order);
    auto pout = index_of(out_, out_order);

    // Treat entries as a row-major tensor over (out..., in...).
    const std::size_t nout = total_dim(out_), nin = total_dim(in_);
    Amplitudes flat(static_cast<Eigen::Index>(nout * nin));
    for (std::size_t o = 0; o < nout; ++o)
        for (std::size_t i = 0; i < nin; ++i)
            flat[static_cast<Eigen::Index>(o * nin + i)] = entries_(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i));

    std::vector<std::size_t> dims = dims_of(out_);
    for (auto d : dims_of(in_)) dims.push_back(d);
    std::vector<std::size_t> perm = pout;
    for (auto p : pin) perm.push_back(p + out_.size());
    Amplitudes moved = detail::permute_axes(flat, dims, perm);

    Matrix m(static_cast<Eigen::Index>(nout), static_cast<Eigen::Index>(nin));
    for (std::size_t o = 0; o < nout; ++o)
        for (std::size_t i = 0; i < nin; ++i)
            m(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) = moved[static_cast<Eigen::Index>(o * nin + i)];
    return LabeledOperator(select(in_, pin), select(out_, pout), std::move(m));
}

// ---------------------------------------------------------------------------
// free functions

LabeledVector basis_state(const LabeledSpace &space, std::size_t index) {
    if (index >= space.dim) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "index " + std::to_string(index) + " on '" + space.label + "' of dim " + std::to_string(space.dim));
    }
    Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(space.dim));
    a[static_cast<Eigen::Index>(index)] = 1.0;
    return LabeledVector({space}, std::move(a));
}

LabeledVector basis_state(const SpaceList &spaces, std::span<const std::size_t> indices) {
    if (indices.size() != spaces.size()) throw Error(ErrorCode::ShapeError, "one index per space required");
    auto v = LabeledVector::zero(spaces);
    std::size_t flat = 0;
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        if (indices[i] >= spaces[i].dim) throw Error(ErrorCode::IndexOutOfRange, "index out of range on " + spaces[i].label);
        flat = flat * spaces[i].dim + indices[i];
    }
    Amplitudes a = v.amps();
    a[static_cast<Eigen::Index>(flat)] = 1.0;
    return LabeledVector(spaces, std::move(a));
}

LabeledVector tensor(const LabeledVector &v, const LabeledVector &w) {
    SpaceList spaces = v.spaces();
    for (const auto &s : w.spaces()) {
        if (v.has_label(s.label)) throw Error(ErrorCode::LabelCollision, "label '" + s.label + "' on both factors");
        spaces.push_back(s);
    }
    const auto nv = v.amps().size(), nw = w.amps().size();
    Amplitudes a(nv * nw);
    for (Eigen::Index i = 0; i < nv; ++i) a.segment(i * nw, nw) = v.amps()[i] * w.amps();
    return LabeledVector(std::move(spaces), std::move(a));
}

LabeledVector partial_inner(const LabeledVector &bra, const LabeledVector &ket) {
    auto pos = locate(bra.spaces(), ket.spaces());
    auto perm = front_permutation(pos, ket.rank());
    auto dims = dims_of(ket.spaces());
    Amplitudes moved = detail::permute_axes(ket.amps(), dims, perm);

    const auto nbra = static_cast<Eigen::Index>(bra.size());
    const auto nrest = moved.size() / nbra;
    // row-major (bra, rest) is column-major (rest x bra)
    Eigen::Map<const Matrix> m(moved.data(), nrest, nbra);
    Amplitudes out = m * bra.amps().conjugate();

    SpaceList rest;
    for (std::size_t i = pos.size(); i < perm.size(); ++i) rest.push_back(ket.spaces()[perm[i]]);
    if (rest.empty()) return LabeledVector::scalar(out[0]);
    return LabeledVector(std::move(rest), std::move(out));
}

Complex inner(const LabeledVector &bra, const LabeledVector &ket) {
    if (bra.rank() != ket.rank()) throw Error(ErrorCode::LabelMismatch, "inner product needs equal label sets");
    return partial_inner(bra, ket).scalar_value();
}

LabeledVector apply_op(const LabeledOperator &op, const LabeledVector &v) {
    auto pos = locate(op.in_spaces(), v.spaces());
    auto perm = front_permutation(pos, v.rank());
    auto dims = dims_of(v.spaces());
    Amplitudes moved = detail::permute_axes(v.amps(), dims, perm);

    const auto nin = op.entries().cols();
    const auto nrest = moved.size() / nin;
    Eigen::Map<const Matrix> x(moved.data(), nrest, nin);
    Matrix y = x * op.entries().transpose();  // rest x out

    SpaceList spaces = op.out_spaces();
    for (std::size_t i = pos.size(); i < perm.size(); ++i) {
        const auto &s = v.spaces()[perm[i]];
        if (find_label(op.out_spaces(), s.label)) {
            throw Error(ErrorCode::LabelCollision, "output label '" + s.label + "' already used by an untouched space");
        }
        spaces.push_back(s);
    }
    return LabeledVector(std::move(spaces), Eigen::Map<const Amplitudes>(y.data(), y.size()));
}

double norm_sq(const LabeledVector &v) { return v.amps().squaredNorm(); }

LabeledVector conjugate(const LabeledVector &v) { return LabeledVector(v.spaces(), v.amps().conjugate()); }

LabeledVector relabel(const LabeledVector &v, const std::map<std::string, std::string> &mapping) {
    SpaceList spaces = v.spaces();
    for (auto &s : spaces) {
        if (auto it = mapping.find(s.label); it != mapping.end()) s.label = it->second;
    }
    // constructor rejects a relabel that collides with an existing label
    return LabeledVector(std::move(spaces), v.amps());
}

LabeledVector relabel(const LabeledVector &v, const std::string &from, const std::string &to) {
    if (!v.has_label(from)) throw Error(ErrorCode::LabelMismatch, "label '" + from + "' not present");
    return relabel(v, std::map<std::string, std::string>{{from, to}});
}

LabeledVector squeeze(const LabeledVector &v) {
    SpaceList kept;
    for (const auto &s : v.spaces()) {
        if (s.dim > 1) kept.push_back(s);
    }
    if (kept.empty()) return LabeledVector::scalar(v.amps()[0]);
    return LabeledVector(std::move(kept), v.amps());
}

LabeledOperator compose(const LabeledOperator &op2, const LabeledOperator &op1) {
    if (op1.out_spaces().size() != op2.in_spaces().size()) {
        throw Error(ErrorCode::LabelMismatch, "composed operators do not chain");
    }
    locate(op2.in_spaces(), op1.out_spaces());
    auto aligned = op2.permuted(labels_of(op1.out_spaces()), labels_of(op2.out_spaces()));
    return LabeledOperator(op1.in_spaces(), op2.out_spaces(), aligned.entries() * op1.entries());
}

LabeledOperator kron(const LabeledOperator &a, const LabeledOperator &b) {
    SpaceList in = a.in_spaces(), out = a.out_spaces();
    in.insert(in.end(), b.in_spaces().begin(), b.in_spaces().end());
    out.insert(out.end(), b.out_spaces().begin(), b.out_spaces().end());
    const Matrix &x = a.entries();
    const Matrix &y = b.entries();
    Matrix m(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) m.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return LabeledOperator(std::move(in), std::move(out), std::move(m));
}

double max_abs_diff(const LabeledVector &v, const LabeledVector &w) {
    if (v.rank() != w.rank()) throw Error(ErrorCode::LabelMismatch, "label sets differ");
    auto aligned = w.permuted(v.labels());
    locate(aligned.spaces(), v.spaces());
    if (v.amps().size() == 0) return 0.0;
    return (v.amps() - aligned.amps()).cwiseAbs().maxCoeff();
}

bool approx_equal(const LabeledVector &v, const LabeledVector &w, double tol) {
    try {
        return max_abs_diff(v, w) <= tol;
    } catch (const Error &) {
        return false;
    }
}

bool approx_equal(const LabeledOperator &a, const LabeledOperator &b, double tol) {
    try {
        auto aligned = b.permuted(labels_of(a.in_spaces()), labels_of(a.out_spaces()));
        if (aligned.in_spaces() != a.in_spaces() || aligned.out_spaces() != a.out_spaces()) return false;
        return (a.entries() - aligned.entries()).cwiseAbs().maxCoeff() <= tol;
    } catch (const Error &) {
        return false;
    }
}

bool is_unitary(const Matrix &m, double tol) {
    if (m.rows() != m.cols()) return false;
    Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace pmfock
