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

#include "pmfock/choi.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pmfock {

namespace {

const std::string kCopyPrefix = "\x1f" "copy:";
const std::string kColumnPrefix = "\x1f" "col:";

// Beyond this many basis states a dense process matrix is refused.
constexpr std::size_t kMaxDenseDim = 1u << 13;
constexpr double kMaxDenseVector = static_cast<double>(1u << 22);

std::vector<std::string> labels_of(const SpaceList &spaces) {
    std::vector<std::string> out;
    for (const auto &s : spaces) out.push_back(s.label);
    return out;
}

SpaceList nontrivial(const SpaceList &spaces) {
    SpaceList out;
    for (const auto &s : spaces) {
        if (s.dim > 1) out.push_back(s);
    }
    return out;
}

LabeledOperator squeeze_op(const LabeledOperator &op) {
    return LabeledOperator(nontrivial(op.in_spaces()), nontrivial(op.out_spaces()), op.entries());
}

std::set<std::string> label_set(const SpaceList &spaces) {
    std::set<std::string> out;
    for (const auto &s : spaces) out.insert(s.label);
    return out;
}

// Throws CoverageError unless the gates' nontrivial spaces partition `target`.
void check_coverage(const std::vector<SpaceList> &gate_spaces, const SpaceList &target) {
    std::set<std::string> seen;
    for (const auto &spaces : gate_spaces) {
        for (const auto &s : nontrivial(spaces)) {
            if (!seen.insert(s.label).second) {
                throw Error(ErrorCode::CoverageError, "space '" + s.label + "' is claimed by two gates");
            }
        }
    }
    auto wanted = label_set(nontrivial(target));
    for (const auto &label : seen) {
        if (!wanted.contains(label)) throw Error(ErrorCode::CoverageError, "gate space '" + label + "' is not in W");
    }
    for (const auto &label : wanted) {
        if (!seen.contains(label)) throw Error(ErrorCode::CoverageError, "W space '" + label + "' is not covered");
    }
}

std::vector<SpaceList> matrix_gate_spaces(std::span<const InstrumentCJ> gates, std::vector<LabeledOperator> &ops) {
    std::vector<SpaceList> spaces;
    for (const auto &g : gates) {
        auto m = squeeze_op(g.matrix());
        if (label_set(m.in_spaces()) != label_set(m.out_spaces())) {
            throw Error(ErrorCode::ShapeError, "CJ matrix of gate '" + g.gate + "' is not an operator on one space set");
        }
        spaces.push_back(m.in_spaces());
        ops.push_back(std::move(m));
    }
    return spaces;
}

double expected_trace(std::span<const std::size_t> dims) {
    double t = 1.0;
    for (auto d : dims) t *= static_cast<double>(d);
    return t;
}

bool trace_matches(double trace, double expected, double tol) {
    return std::abs(trace - expected) <= tol * std::max(1.0, expected);
}

}  // namespace

const LabeledVector &InstrumentCJ::vector() const {
    if (!is_vector()) throw Error(ErrorCode::InvalidArgument, "gate '" + gate + "' has no vector form");
    return std::get<LabeledVector>(cj);
}

LabeledOperator InstrumentCJ::matrix() const {
    if (is_vector()) return cj_matrix(std::get<LabeledVector>(cj));
    return std::get<LabeledOperator>(cj);
}

LabeledVector transport_vector(const LabeledSpace &in_space, const LabeledSpace &out_space) {
    if (in_space.dim != out_space.dim) {
        throw Error(ErrorCode::DimensionMismatch, "transport vector between '" + in_space.label + "' and '" +
                                                      out_space.label + "' of unequal dims");
    }
    if (in_space.label == out_space.label) {
        throw Error(ErrorCode::LabelCollision, "transport vector endpoints share label '" + in_space.label + "'");
    }
    const auto d = static_cast<Eigen::Index>(in_space.dim);
    Amplitudes a = Amplitudes::Zero(d * d);
    for (Eigen::Index i = 0; i < d; ++i) a[i * d + i] = 1.0;
    return LabeledVector({in_space, out_space}, std::move(a));
}

LabeledVector cj_vector(const LabeledOperator &op) {
    // |1>> over G_I and a private copy of G_I; op^* then carries the copy to G_O.
    LabeledVector identity = LabeledVector::scalar(1.0);
    SpaceList copies;
    for (const auto &s : op.in_spaces()) {
        LabeledSpace copy(kCopyPrefix + s.label, s.dim);
        identity = tensor(identity, transport_vector(s, copy));
        copies.push_back(copy);
    }
    for (const auto &s : op.out_spaces()) {
        if (std::any_of(op.in_spaces().begin(), op.in_spaces().end(),
                        [&](const LabeledSpace &in) { return in.label == s.label; })) {
            throw Error(ErrorCode::LabelCollision, "CJ vector needs distinct input and output labels ('" + s.label + "')");
        }
    }
    LabeledOperator conj_on_copy(copies, op.out_spaces(), op.entries().conjugate());
    auto moved = apply_op(conj_on_copy, identity);
    auto order = labels_of(op.in_spaces());
    for (const auto &s : op.out_spaces()) order.push_back(s.label);
    return moved.permuted(order);
}

LabeledOperator cj_matrix(const LabeledVector &cj) {
    Matrix m = cj.amps() * cj.amps().adjoint();
    return LabeledOperator(cj.spaces(), cj.spaces(), std::move(m));
}

LabeledOperator cj_matrix(const KrausChannel &channel) {
    if (channel.empty()) throw Error(ErrorCode::InvalidArgument, "channel has no Kraus terms");
    const auto first = cj_vector(channel.front());
    const auto order = first.labels();
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(first.size()), static_cast<Eigen::Index>(first.size()));
    for (const auto &term : channel) {
        auto c = cj_vector(term);
        if (c.rank() != first.rank()) throw Error(ErrorCode::LabelMismatch, "Kraus terms act on different spaces");
        c = c.permuted(order);
        if (c.spaces() != first.spaces()) throw Error(ErrorCode::DimensionMismatch, "Kraus terms disagree on dims");
        m += c.amps() * c.amps().adjoint();
    }
    return LabeledOperator(first.spaces(), first.spaces(), std::move(m));
}

ProcessVector::ProcessVector(std::vector<Wire> wires) : wires_(std::move(wires)) {
    std::set<std::string> seen;
    for (const auto &wire : wires_) {
        if (wire.from_space.dim != wire.to_space.dim) {
            throw Error(ErrorCode::DimensionMismatch, "wire " + wire.from_space.label + " -> " + wire.to_space.label +
                                                          " joins dims " + std::to_string(wire.from_space.dim) +
                                                          " and " + std::to_string(wire.to_space.dim));
        }
        for (const auto *s : {&wire.from_space, &wire.to_space}) {
            if (!seen.insert(s->label).second) {
                throw Error(ErrorCode::LabelCollision, "space '" + s->label + "' appears on two wire ends");
            }
        }
    }
}

SpaceList ProcessVector::spaces() const {
    SpaceList out;
    for (const auto &wire : wires_) {
        out.push_back(wire.from_space);
        out.push_back(wire.to_space);
    }
    return out;
}

double ProcessVector::amplitude_count() const {
    double n = 1.0;
    for (const auto &wire : wires_) n *= static_cast<double>(wire.from_space.dim) * static_cast<double>(wire.to_space.dim);
    return n;
}

double ProcessVector::norm_sq() const {
    double n = 1.0;
    for (const auto &wire : wires_) n *= static_cast<double>(wire.from_space.dim);
    return n;
}

LabeledVector ProcessVector::vector() const {
    if (amplitude_count() > kMaxDenseVector) {
        throw Error(ErrorCode::ShapeError, "process vector with " + std::to_string(amplitude_count()) +
                                               " amplitudes is too large to materialise");
    }
    LabeledVector w = LabeledVector::scalar(1.0);
    for (const auto &wire : wires_) w = tensor(w, transport_vector(wire.from_space, wire.to_space));
    return w;
}

ProcessVector process_vector_from_wiring(const std::vector<Wire> &wires) { return ProcessVector(wires); }

LabeledVector contract(std::span<const InstrumentCJ> gates, const LabeledVector &w) {
    LabeledVector state = squeeze(w);
    for (const auto &g : gates) {
        auto c = squeeze(g.vector());
        if (c.is_scalar()) {
            state = state * std::conj(c.scalar_value());
        } else {
            state = partial_inner(c, state);
        }
    }
    return state;
}

LabeledVector contract(std::span<const InstrumentCJ> gates, const ProcessVector &w) {
    std::map<std::string, std::size_t> wire_of;
    for (std::size_t i = 0; i < w.wires().size(); ++i) {
        const auto &wire = w.wires()[i];
        if (wire.from_space.dim > 1) wire_of.emplace(wire.from_space.label, i);
        if (wire.to_space.dim > 1) wire_of.emplace(wire.to_space.label, i);
    }
    std::vector<bool> joined(w.wires().size(), false);
    auto join = [&](std::size_t i, LabeledVector &state) {
        joined[i] = true;
        const auto &wire = w.wires()[i];
        state = tensor(state, squeeze(transport_vector(wire.from_space, wire.to_space)));
    };

    LabeledVector state = LabeledVector::scalar(1.0);
    for (const auto &g : gates) {
        auto c = squeeze(g.vector());
        if (c.is_scalar()) {
            state = state * std::conj(c.scalar_value());
            continue;
        }
        for (const auto &s : c.spaces()) {
            if (state.has_label(s.label)) continue;
            auto it = wire_of.find(s.label);
            if (it == wire_of.end() || joined[it->second]) {
                throw Error(ErrorCode::LabelMismatch, "gate '" + g.gate + "' space '" + s.label + "' is not on any open wire");
            }
            join(it->second, state);
        }
        state = partial_inner(c, state);
    }
    for (std::size_t i = 0; i < joined.size(); ++i) {
        if (!joined[i]) join(i, state);
    }
    return state;
}

Complex amplitude_from_vectors(std::span<const InstrumentCJ> gates, const LabeledVector &w) {
    std::vector<SpaceList> spaces;
    for (const auto &g : gates) spaces.push_back(g.vector().spaces());
    check_coverage(spaces, w.spaces());
    return contract(gates, w).scalar_value();
}

double probability_from_vectors(std::span<const InstrumentCJ> gates, const LabeledVector &w) {
    return std::norm(amplitude_from_vectors(gates, w));
}

Complex amplitude_from_vectors(std::span<const InstrumentCJ> gates, const ProcessVector &w) {
    std::vector<SpaceList> spaces;
    for (const auto &g : gates) spaces.push_back(g.vector().spaces());
    check_coverage(spaces, w.spaces());
    return contract(gates, w).scalar_value();
}

double probability_from_vectors(std::span<const InstrumentCJ> gates, const ProcessVector &w) {
    return std::norm(amplitude_from_vectors(gates, w));
}

RankOneSum RankOneSum::from_process_vector(const ProcessVector &w) {
    RankOneSum sum;
    sum.terms.emplace_back(1.0, w.vector());
    return sum;
}

SpaceList RankOneSum::spaces() const {
    if (terms.empty()) return {};
    return terms.front().second.spaces();
}

LabeledOperator process_matrix(const ProcessVector &w) {
    if (w.amplitude_count() > static_cast<double>(kMaxDenseDim)) {
        throw Error(ErrorCode::ShapeError, "process matrix of dimension " + std::to_string(w.amplitude_count()) +
                                               " is too large for dense storage; use RankOneSum");
    }
    return cj_matrix(w.vector());
}

double probability_from_matrices(std::span<const InstrumentCJ> gates, const LabeledOperator &w) {
    if (label_set(w.in_spaces()) != label_set(w.out_spaces())) {
        throw Error(ErrorCode::ShapeError, "process matrix must act on a single space set");
    }
    std::vector<LabeledOperator> ops;
    check_coverage(matrix_gate_spaces(gates, ops), w.out_spaces());

    // vec(W) over (rows..., columns...) with column labels renamed apart.
    auto rows = w.out_spaces();
    auto aligned = w.permuted(labels_of(rows), labels_of(rows));
    SpaceList spaces = rows;
    for (const auto &s : rows) spaces.emplace_back(kColumnPrefix + s.label, s.dim);
    const auto n = aligned.entries().rows();
    Amplitudes flat(n * n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) flat[r * n + c] = aligned.entries()(r, c);
    LabeledVector vec(spaces, std::move(flat));

    for (const auto &m : ops) {
        if (!m.in_spaces().empty()) vec = apply_op(m, vec);
        else vec = vec * m.entries()(0, 0);
    }
    auto order = labels_of(rows);
    for (const auto &s : rows) order.push_back(kColumnPrefix + s.label);
    vec = vec.permuted(order);
    Complex trace = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) trace += vec.amps()[r * n + r];
    return trace.real();
}

double probability_from_matrices(std::span<const InstrumentCJ> gates, const RankOneSum &w) {
    std::vector<LabeledOperator> ops;
    check_coverage(matrix_gate_spaces(gates, ops), w.spaces());
    double p = 0.0;
    for (const auto &[weight, v0] : w.terms) {
        auto v = squeeze(v0);
        auto mv = v;
        for (const auto &m : ops) {
            if (!m.in_spaces().empty()) mv = apply_op(m, mv);
            else mv = mv * m.entries()(0, 0);
        }
        p += weight * inner(v, mv).real();
    }
    return p;
}

AxiomReport check_process_axioms(const LabeledOperator &w, std::span<const std::size_t> out_space_dims, double tol) {
    if (w.entries().rows() != w.entries().cols() || label_set(w.in_spaces()) != label_set(w.out_spaces())) {
        throw Error(ErrorCode::ShapeError, "process matrix must be square on one space set");
    }
    auto aligned = w.permuted(labels_of(w.out_spaces()), labels_of(w.out_spaces()));
    const Matrix &m = aligned.entries();

    AxiomReport report;
    report.expected_trace = expected_trace(out_space_dims);
    report.trace_value = m.trace().real();
    report.trace_ok = trace_matches(report.trace_value, report.expected_trace, tol) &&
                      std::abs(m.trace().imag()) <= tol * std::max(1.0, report.expected_trace);

    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const bool hermitian = (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
    const auto &values = eig.eigenvalues();
    report.min_eigenvalue = values.minCoeff();
    const double norm = values.cwiseAbs().maxCoeff();
    report.positive = hermitian && report.min_eigenvalue >= -kPositivityTolerance * norm;
    return report;
}

AxiomReport check_process_axioms(const RankOneSum &w, std::span<const std::size_t> out_space_dims, double tol) {
    AxiomReport report;
    report.expected_trace = expected_trace(out_space_dims);
    if (w.terms.empty()) {
        report.positive = true;
        report.trace_ok = trace_matches(0.0, report.expected_trace, tol);
        return report;
    }
    // Nonzero spectrum of V D V^dagger equals that of G^1/2 D G^1/2 with G = V^dagger V.
    const auto order = w.terms.front().second.labels();
    const auto rank = static_cast<Eigen::Index>(w.terms.size());
    const auto n = static_cast<Eigen::Index>(w.terms.front().second.size());
    Matrix v(n, rank);
    Eigen::VectorXd weights(rank);
    for (Eigen::Index r = 0; r < rank; ++r) {
        const auto &[weight, vec] = w.terms[static_cast<std::size_t>(r)];
        v.col(r) = vec.permuted(order).amps();
        weights[r] = weight;
    }
    Matrix gram = v.adjoint() * v;
    Eigen::SelfAdjointEigenSolver<Matrix> gram_eig(gram);
    Eigen::VectorXd root = gram_eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Matrix gram_root = gram_eig.eigenvectors() * root.asDiagonal() * gram_eig.eigenvectors().adjoint();
    Matrix core = gram_root * weights.cast<Complex>().asDiagonal() * gram_root;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(core, Eigen::EigenvaluesOnly);

    double min_value = eig.eigenvalues().minCoeff();
    if (rank < n) min_value = std::min(min_value, 0.0);
    report.min_eigenvalue = min_value;
    const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
    report.positive = min_value >= -kPositivityTolerance * norm;

    double trace = 0.0;
    for (Eigen::Index r = 0; r < rank; ++r) trace += weights[r] * gram(r, r).real();
    report.trace_value = trace;
    report.trace_ok = trace_matches(trace, report.expected_trace, tol);
    return report;
}

AxiomReport check_process_axioms(const ProcessVector &w, std::span<const std::size_t> out_space_dims, double tol) {
    // Rank one: spectrum {<W|W>, 0, ...}, and <W|W> factorises over wires.
    AxiomReport report;
    report.expected_trace = expected_trace(out_space_dims);
    report.trace_value = w.norm_sq();
    report.trace_ok = trace_matches(report.trace_value, report.expected_trace, tol);
    report.min_eigenvalue = w.amplitude_count() > 1.0 ? 0.0 : report.trace_value;
    report.positive = true;
    return report;
}

}  // namespace pmfock
