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

#include "pmfock/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <tuple>

namespace pmfock {

namespace {

struct BasisTable {
    std::vector<FockBasisState> states;
    std::map<std::vector<std::size_t>, std::size_t> index;
};

void enumerate_sector(std::size_t mode, std::size_t remaining, std::size_t max_per_mode, std::vector<std::size_t> &occ,
                      std::vector<FockBasisState> &out) {
    if (mode + 1 == occ.size()) {
        if (remaining <= max_per_mode) {
            occ[mode] = remaining;
            out.push_back(FockBasisState{occ});
        }
        return;
    }
    for (std::size_t n = std::min(remaining, max_per_mode) + 1; n-- > 0;) {
        occ[mode] = n;
        enumerate_sector(mode + 1, remaining - n, max_per_mode, occ, out);
    }
}

std::shared_ptr<const BasisTable> build_table(const FockSpec &spec) {
    auto table = std::make_shared<BasisTable>();
    const std::size_t max_per_mode = spec.statistics == Statistics::Fermion ? 1 : spec.cutoff;
    std::vector<std::size_t> occ(spec.modes, 0);
    for (std::size_t k = 0; k <= spec.cutoff; ++k) enumerate_sector(0, k, max_per_mode, occ, table->states);
    for (std::size_t i = 0; i < table->states.size(); ++i) table->index.emplace(table->states[i].occupations, i);
    return table;
}

// Enumeration is pure; the cache only avoids recomputation.
std::shared_ptr<const BasisTable> basis_table(const FockSpec &spec) {
    using Key = std::tuple<std::size_t, int, std::size_t>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const BasisTable>> cache;
    Key key{spec.modes, static_cast<int>(spec.statistics), spec.cutoff};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto table = build_table(spec);
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(table)).first->second;
}

double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return f;
}

// Mode list with multiplicity, ascending: (2,0,1) -> {0,0,2}.
std::vector<std::size_t> expand_modes(const FockBasisState &s) {
    std::vector<std::size_t> modes;
    for (std::size_t i = 0; i < s.occupations.size(); ++i) modes.insert(modes.end(), s.occupations[i], i);
    return modes;
}

// Ryser's formula.
Complex permanent(const Matrix &m) {
    const auto n = m.rows();
    if (n == 0) return 1.0;
    Complex total = 0.0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t mask = 1; mask < subsets; ++mask) {
        Complex prod = 1.0;
        for (Eigen::Index r = 0; r < n; ++r) {
            Complex row_sum = 0.0;
            for (Eigen::Index c = 0; c < n; ++c) {
                if (mask & (std::uint64_t{1} << c)) row_sum += m(r, c);
            }
            prod *= row_sum;
        }
        const int bits = __builtin_popcountll(mask);
        total += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
    }
    return total;
}

Complex determinant(const Matrix &m) {
    if (m.rows() == 0) return 1.0;
    return m.determinant();
}

void check_fock_operator(const LabeledOperator &op, const FockSpec &spec) {
    if (op.in_spaces().size() != 1 || op.out_spaces().size() != 1) {
        throw Error(ErrorCode::ShapeError, "expected an operator between two single Fock spaces");
    }
    if (op.in_spaces()[0].dim != spec.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "operator input dim " + std::to_string(op.in_spaces()[0].dim) +
                                                      " does not match Fock dim " + std::to_string(spec.dim()));
    }
}

}  // namespace

FockSpec::FockSpec(std::size_t modes_, Statistics statistics_, std::size_t cutoff_)
    : modes(modes_), statistics(statistics_), cutoff(cutoff_) {
    if (modes == 0) throw Error(ErrorCode::InvalidDimension, "Fock space needs at least one mode");
    if (statistics == Statistics::Fermion) cutoff = std::min(cutoff, modes);
}

std::size_t FockSpec::dim() const { return basis_table(*this)->states.size(); }

std::size_t FockBasisState::total() const {
    std::size_t t = 0;
    for (auto s : occupations) t += s;
    return t;
}

std::vector<FockBasisState> fock_basis(const FockSpec &spec) { return basis_table(spec)->states; }

std::size_t fock_index(const FockSpec &spec, const FockBasisState &state) {
    auto table = basis_table(spec);
    auto it = table->index.find(state.occupations);
    if (it == table->index.end()) throw Error(ErrorCode::IndexOutOfRange, "occupation tuple outside the truncated basis");
    return it->second;
}

std::vector<std::size_t> sector_indices(const FockSpec &spec, std::size_t k) {
    auto table = basis_table(spec);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < table->states.size(); ++i) {
        if (table->states[i].total() == k) out.push_back(i);
    }
    return out;
}

LabeledSpace fock_space(const FockSpec &spec, std::string label) { return LabeledSpace(std::move(label), spec.dim()); }

LabeledOperator creation_op(const FockSpec &spec, std::size_t mode, const std::string &label) {
    if (mode < 1 || mode > spec.modes) {
        throw Error(ErrorCode::IndexOutOfRange, "mode " + std::to_string(mode) + " outside 1.." + std::to_string(spec.modes));
    }
    const std::size_t i = mode - 1;
    auto table = basis_table(spec);
    const auto n = static_cast<Eigen::Index>(table->states.size());
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t col = 0; col < table->states.size(); ++col) {
        auto occ = table->states[col].occupations;
        double amp = 0.0;
        if (spec.statistics == Statistics::Boson) {
            amp = std::sqrt(static_cast<double>(occ[i] + 1));
        } else {
            if (occ[i] == 1) continue;
            std::size_t before = 0;
            for (std::size_t j = 0; j < i; ++j) before += occ[j];
            amp = before % 2 == 0 ? 1.0 : -1.0;
        }
        occ[i] += 1;
        auto it = table->index.find(occ);
        if (it == table->index.end()) continue;  // beyond the cutoff
        m(static_cast<Eigen::Index>(it->second), static_cast<Eigen::Index>(col)) = amp;
    }
    LabeledSpace space = fock_space(spec, label);
    return LabeledOperator({space}, {space}, std::move(m));
}

LabeledOperator annihilation_op(const FockSpec &spec, std::size_t mode, const std::string &label) {
    return creation_op(spec, mode, label).adjoint();
}

LabeledVector k_transport_vector(const FockSpec &spec, std::size_t k, const std::string &in_label,
                                 const std::string &out_label) {
    if (k > spec.cutoff) {
        throw Error(ErrorCode::InvalidArgument,
                    "k = " + std::to_string(k) + " exceeds the cutoff " + std::to_string(spec.cutoff));
    }
    auto table = basis_table(spec);
    const auto n = static_cast<Eigen::Index>(table->states.size());
    std::vector<Matrix> raise;
    for (std::size_t mode = 1; mode <= spec.modes; ++mode) raise.push_back(creation_op(spec, mode).entries());

    Amplitudes amps = Amplitudes::Zero(n * n);
    for (const auto &s : table->states) {
        if (s.total() != k) continue;
        // prod_i (a_i^dag)^{s_i} / sqrt(s_i!) |0>, rightmost factor first
        Amplitudes state = Amplitudes::Zero(n);
        state[0] = 1.0;
        for (std::size_t i = spec.modes; i-- > 0;) {
            for (std::size_t r = 0; r < s.occupations[i]; ++r) state = raise[i] * state;
            state /= std::sqrt(factorial(s.occupations[i]));
        }
        for (Eigen::Index a = 0; a < n; ++a) {
            if (state[a] == Complex(0.0)) continue;
            amps.segment(a * n, n) += state[a] * state;
        }
    }
    return LabeledVector({fock_space(spec, in_label), fock_space(spec, out_label)}, std::move(amps));
}

LabeledVector fock_transport_vector(const FockSpec &spec, const std::string &in_label, const std::string &out_label) {
    LabeledVector total = k_transport_vector(spec, 0, in_label, out_label);
    for (std::size_t k = 1; k <= spec.cutoff; ++k) total = total + k_transport_vector(spec, k, in_label, out_label);
    return total;
}

LabeledOperator lift_single_particle_unitary(const Matrix &u, const FockSpec &spec, const std::string &in_label,
                                             const std::string &out_label, double tol) {
    if (static_cast<std::size_t>(u.rows()) != spec.modes || static_cast<std::size_t>(u.cols()) != spec.modes) {
        throw Error(ErrorCode::DimensionMismatch, "single-particle matrix must be " + std::to_string(spec.modes) + "x" +
                                                      std::to_string(spec.modes));
    }
    if (!is_unitary(u, tol)) throw Error(ErrorCode::NonUnitary, "single-particle matrix is not unitary");

    auto table = basis_table(spec);
    const auto n = static_cast<Eigen::Index>(table->states.size());
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t col = 0; col < table->states.size(); ++col) {
        const auto &s = table->states[col];
        const auto in_modes = expand_modes(s);
        double in_norm = 1.0;
        for (auto occ : s.occupations) in_norm *= factorial(occ);
        for (std::size_t row = 0; row < table->states.size(); ++row) {
            const auto &t = table->states[row];
            if (t.total() != s.total()) continue;
            const auto out_modes = expand_modes(t);
            const auto k = static_cast<Eigen::Index>(in_modes.size());
            Matrix sub(k, k);
            for (Eigen::Index r = 0; r < k; ++r)
                for (Eigen::Index c = 0; c < k; ++c)
                    sub(r, c) = u(static_cast<Eigen::Index>(out_modes[static_cast<std::size_t>(r)]),
                                  static_cast<Eigen::Index>(in_modes[static_cast<std::size_t>(c)]));
            Complex value;
            if (spec.statistics == Statistics::Boson) {
                double out_norm = 1.0;
                for (auto occ : t.occupations) out_norm *= factorial(occ);
                value = permanent(sub) / std::sqrt(in_norm * out_norm);
            } else {
                value = determinant(sub);
            }
            m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = value;
        }
    }
    return LabeledOperator({fock_space(spec, in_label)}, {fock_space(spec, out_label)}, std::move(m));
}

LabeledOperator restrict_to_sector(const LabeledOperator &op, const FockSpec &spec, std::size_t k) {
    check_fock_operator(op, spec);
    if (op.out_spaces()[0].dim != spec.dim()) throw Error(ErrorCode::DimensionMismatch, "output is not the same Fock space");
    auto idx = sector_indices(spec, k);
    Matrix m = Matrix::Zero(op.entries().rows(), op.entries().cols());
    for (auto r : idx)
        for (auto c : idx) {
            const auto ri = static_cast<Eigen::Index>(r), ci = static_cast<Eigen::Index>(c);
            m(ri, ci) = op.entries()(ri, ci);
        }
    return LabeledOperator(op.in_spaces(), op.out_spaces(), std::move(m));
}

LabeledOperator fock_cj_matrix(const FockSpec &spec, const std::vector<SectorOperator> &sectors) {
    if (sectors.empty()) throw Error(ErrorCode::InvalidArgument, "no sector operators given");
    std::set<std::size_t> seen;
    const LabeledSpace in_space = sectors.front().op.in_spaces().at(0);
    const LabeledSpace out_space = sectors.front().op.out_spaces().at(0);
    const std::string copy_label = "\x1f" "copy:" + in_space.label;
    const auto n = static_cast<Eigen::Index>(in_space.dim * out_space.dim);
    Matrix total = Matrix::Zero(n, n);
    for (const auto &sector : sectors) {
        check_fock_operator(sector.op, spec);
        if (!seen.insert(sector.k).second) {
            throw Error(ErrorCode::DuplicateSector, "sector k = " + std::to_string(sector.k) + " given twice");
        }
        if (sector.op.in_spaces()[0] != in_space || sector.op.out_spaces()[0] != out_space) {
            throw Error(ErrorCode::LabelMismatch, "sector operators act between different spaces");
        }
        auto identity_k = k_transport_vector(spec, sector.k, in_space.label, copy_label);
        auto on_copy = sector.op.relabeled({{in_space.label, copy_label}});
        // relabeled() renames an identically-labelled output too; restore it
        on_copy = LabeledOperator(on_copy.in_spaces(), {out_space}, on_copy.entries());
        auto v = apply_op(on_copy, identity_k).permuted(std::vector<std::string>{in_space.label, out_space.label});
        Matrix rho = v.amps() * v.amps().adjoint();
        total += rho.transpose();
    }
    SpaceList spaces{in_space, out_space};
    return LabeledOperator(spaces, spaces, std::move(total));
}

LabeledVector fock_cj_vector(const FockSpec &spec, const LabeledOperator &op) {
    check_fock_operator(op, spec);
    const LabeledSpace &in_space = op.in_spaces()[0];
    const LabeledSpace &out_space = op.out_spaces()[0];
    if (in_space.label == out_space.label) {
        throw Error(ErrorCode::LabelCollision, "CJ vector needs distinct input and output labels");
    }
    const std::string copy_label = "\x1f" "copy:" + in_space.label;
    auto identity = fock_transport_vector(spec, in_space.label, copy_label);
    LabeledOperator conj_on_copy({LabeledSpace(copy_label, in_space.dim)}, {out_space}, op.entries().conjugate());
    return apply_op(conj_on_copy, identity).permuted(std::vector<std::string>{in_space.label, out_space.label});
}

LabeledOperator factorize_modes(const LabeledOperator &op, const FockSpec &spec,
                                const std::vector<std::string> &in_labels, const std::vector<std::string> &out_labels,
                                std::size_t per_mode_cutoff) {
    check_fock_operator(op, spec);
    if (op.out_spaces()[0].dim != spec.dim()) throw Error(ErrorCode::DimensionMismatch, "output is not the same Fock space");
    if (in_labels.size() != spec.modes || out_labels.size() != spec.modes) {
        throw Error(ErrorCode::LabelMismatch, "one label per mode required");
    }
    if (spec.statistics == Statistics::Fermion && per_mode_cutoff > 1) {
        throw Error(ErrorCode::InvalidArgument, "fermionic modes hold at most one particle");
    }
    const std::size_t local = per_mode_cutoff + 1;
    std::size_t product_dim = 1;
    for (std::size_t i = 0; i < spec.modes; ++i) product_dim *= local;

    auto table = basis_table(spec);
    // product index -> Fock index (or npos)
    std::vector<std::size_t> to_fock(product_dim, static_cast<std::size_t>(-1));
    for (std::size_t p = 0; p < product_dim; ++p) {
        std::vector<std::size_t> occ(spec.modes);
        std::size_t rest = p;
        for (std::size_t i = spec.modes; i-- > 0;) {
            occ[i] = rest % local;
            rest /= local;
        }
        if (auto it = table->index.find(occ); it != table->index.end()) to_fock[p] = it->second;
    }

    const auto n = static_cast<Eigen::Index>(product_dim);
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t c = 0; c < product_dim; ++c) {
        const auto ci = static_cast<Eigen::Index>(c);
        if (to_fock[c] == static_cast<std::size_t>(-1)) {
            m(ci, ci) = 1.0;
            continue;
        }
        for (std::size_t r = 0; r < product_dim; ++r) {
            if (to_fock[r] == static_cast<std::size_t>(-1)) continue;
            m(static_cast<Eigen::Index>(r), ci) =
                op.entries()(static_cast<Eigen::Index>(to_fock[r]), static_cast<Eigen::Index>(to_fock[c]));
        }
    }
    SpaceList in, out;
    for (const auto &l : in_labels) in.emplace_back(l, local);
    for (const auto &l : out_labels) out.emplace_back(l, local);
    return LabeledOperator(std::move(in), std::move(out), std::move(m));
}

}  // namespace pmfock
