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

#include "pmfock/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace pmfock {

namespace {

bool is_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '\'' ||
           c == '^' || c == '-' || static_cast<unsigned char>(c) >= 0x80;
}

// Cursor over one line; columns are 1-based byte offsets.
class LineParser {
  public:
    LineParser(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

    std::size_t column() const { return pos_ + 1; }
    std::size_t line() const { return line_; }
    std::size_t token_column() {
        skip_ws();
        return column();
    }

    [[noreturn]] void fail(ErrorCode code, const std::string &msg, std::size_t col = 0) const {
        throw CircuitError(code, line_, col == 0 ? column() : col, msg);
    }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= s_.size();
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(ErrorCode::SyntaxError, std::string("expected '") + c + "'");
    }
    bool accept_word(std::string_view w) {
        skip_ws();
        if (s_.substr(pos_, w.size()) != w) return false;
        pos_ += w.size();
        return true;
    }
    void expect_word(std::string_view w) {
        if (!accept_word(w)) fail(ErrorCode::SyntaxError, "expected '" + std::string(w) + "'");
    }

    std::string name(const char *what) {
        skip_ws();
        const std::size_t start = pos_;
        // '-' is allowed inside names but not first, so "->" stays a separator.
        while (pos_ < s_.size() && is_name_char(s_[pos_]) && !(s_[pos_] == '-' && (pos_ == start || next_is('>'))))
            ++pos_;
        if (pos_ == start) fail(ErrorCode::SyntaxError, std::string("expected ") + what);
        return std::string(s_.substr(start, pos_ - start));
    }

    std::size_t integer(const char *what) {
        skip_ws();
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), value);
        if (ec != std::errc() || ptr == s_.data() + pos_) fail(ErrorCode::SyntaxError, std::string("expected ") + what);
        pos_ = static_cast<std::size_t>(ptr - s_.data());
        return value;
    }

    double real() {
        skip_ws();
        const std::size_t start = pos_;
        std::size_t end = pos_;
        if (end < s_.size() && (s_[end] == '+' || s_[end] == '-')) ++end;
        while (end < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.')) ++end;
        if (end < s_.size() && (s_[end] == 'e' || s_[end] == 'E')) {
            ++end;
            if (end < s_.size() && (s_[end] == '+' || s_[end] == '-')) ++end;
            while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) ++end;
        }
        const std::string text(s_.substr(start, end - start));
        if (text.empty() || text == "+" || text == "-") fail(ErrorCode::SyntaxError, "expected a number");
        std::istringstream in(text);
        in.imbue(std::locale::classic());
        double value = 0.0;
        in >> value;
        if (in.fail() || !in.eof()) fail(ErrorCode::SyntaxError, "malformed number '" + text + "'", start + 1);
        pos_ = end;
        return value;
    }

    // [+-]i with no coefficient
    bool unit_imaginary_ahead() const {
        std::size_t at = pos_;
        if (at < s_.size() && (s_[at] == '+' || s_[at] == '-')) ++at;
        return at < s_.size() && s_[at] == 'i';
    }
    double unit_sign() {
        if (s_[pos_] == 'i') return 1.0;
        return s_[pos_++] == '-' ? -1.0 : 1.0;
    }

    // re | imi | re+imi | re-imi, with a coefficient of 1 optional before i
    Complex complex() {
        skip_ws();
        const std::size_t start = pos_;
        if (unit_imaginary_ahead()) {
            const double im = unit_sign();
            ++pos_;
            return {0.0, im};
        }
        double first = real();
        if (pos_ < s_.size() && s_[pos_] == 'i') {
            ++pos_;
            return {0.0, first};
        }
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
            double second = unit_imaginary_ahead() ? unit_sign() : real();
            if (pos_ >= s_.size() || s_[pos_] != 'i') {
                fail(ErrorCode::SyntaxError, "complex literal needs a trailing 'i'", start + 1);
            }
            ++pos_;
            return {first, second};
        }
        return {first, 0.0};
    }

    std::vector<Complex> complex_row() {
        std::vector<Complex> row;
        expect('[');
        if (accept(']')) return row;
        do {
            row.push_back(complex());
        } while (accept(','));
        expect(']');
        return row;
    }

  private:
    bool next_is(char c) const { return pos_ + 1 < s_.size() && s_[pos_ + 1] == c; }

    std::string_view s_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

struct SpaceSite {
    std::size_t gate;
    bool is_output;
    std::size_t dim;
};

// Fills `cols` with the column of each space name.
SpaceList parse_space_list(LineParser &p, std::vector<std::size_t> &cols) {
    SpaceList list;
    p.expect('(');
    if (p.accept(')')) return list;
    do {
        const std::size_t col = p.token_column();
        cols.push_back(col);
        std::string label = p.name("space name");
        p.expect(':');
        const std::size_t dim_col = p.token_column();
        const std::size_t dim = p.integer("dimension");
        if (dim == 0) p.fail(ErrorCode::InvalidDimension, "space '" + label + "' has dimension 0", dim_col);
        if (label.find('.') != std::string::npos) p.fail(ErrorCode::SyntaxError, "space names cannot contain '.'", col);
        list.emplace_back(label, dim);
    } while (p.accept(','));
    p.expect(')');
    return list;
}

void parse_op(LineParser &p, GateDecl &gate, double tol) {
    p.expect_word("op");
    p.expect('=');
    const std::size_t kind_col = p.token_column();
    const std::string kind = p.name("operation kind");
    const std::size_t in_dim = total_dim(gate.inputs);
    const std::size_t out_dim = total_dim(gate.outputs);

    if (kind == "prepare") {
        gate.kind = OpKind::Prepare;
        if (!gate.inputs.empty()) p.fail(ErrorCode::ShapeError, "a preparation takes no input spaces", kind_col);
        p.expect('[');
        const std::size_t arg_col = p.token_column();
        if (p.peek('[')) {
            auto row = p.complex_row();
            if (row.size() != out_dim) {
                p.fail(ErrorCode::ShapeError,
                       "state has " + std::to_string(row.size()) + " amplitudes, outputs need " + std::to_string(out_dim),
                       arg_col);
            }
            gate.state = Eigen::Map<Amplitudes>(row.data(), static_cast<Eigen::Index>(row.size()));
            if (std::abs(gate.state.squaredNorm() - 1.0) > tol) {
                p.fail(ErrorCode::InvalidArgument, "prepared state is not normalised", arg_col);
            }
        } else {
            gate.index = p.integer("basis index");
            if (*gate.index >= out_dim) p.fail(ErrorCode::IndexOutOfRange, "basis index out of range", arg_col);
        }
        p.expect(']');
    } else if (kind == "unitary") {
        gate.kind = OpKind::Unitary;
        p.expect('[');
        const std::size_t arg_col = p.token_column();
        std::vector<std::vector<Complex>> rows;
        do {
            rows.push_back(p.complex_row());
        } while (p.accept(','));
        p.expect(']');
        if (rows.size() != out_dim || std::any_of(rows.begin(), rows.end(), [&](auto &r) { return r.size() != in_dim; })) {
            p.fail(ErrorCode::ShapeError, "matrix must be " + std::to_string(out_dim) + "x" + std::to_string(in_dim),
                   arg_col);
        }
        gate.matrix.resize(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(in_dim));
        for (std::size_t r = 0; r < out_dim; ++r) {
            for (std::size_t c = 0; c < in_dim; ++c) {
                gate.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
            }
        }
        if (!is_unitary(gate.matrix, tol)) p.fail(ErrorCode::NonUnitary, "matrix is not unitary", arg_col);
    } else if (kind == "measure") {
        gate.kind = OpKind::Measure;
        if (!gate.outputs.empty()) p.fail(ErrorCode::ShapeError, "a measurement has no output spaces", kind_col);
        if (gate.inputs.empty()) p.fail(ErrorCode::ShapeError, "a measurement needs input spaces", kind_col);
        if (p.accept('[')) {
            const std::size_t arg_col = p.token_column();
            gate.index = p.integer("outcome");
            if (*gate.index >= in_dim) p.fail(ErrorCode::IndexOutOfRange, "outcome out of range", arg_col);
            p.expect(']');
        }
    } else {
        p.fail(ErrorCode::SyntaxError, "unknown operation kind '" + kind + "'", kind_col);
    }
}

std::string trivial_label(const std::string &gate, const char *side) { return "\x1f" + gate + "." + side; }

LabeledOperator gate_operator(const GateDecl &g, std::optional<std::size_t> outcome) {
    SpaceList in = g.inputs.empty() ? SpaceList{LabeledSpace(trivial_label(g.name, "in"), 1)} : g.inputs;
    SpaceList out = g.outputs.empty() ? SpaceList{LabeledSpace(trivial_label(g.name, "out"), 1)} : g.outputs;
    switch (g.kind) {
    case OpKind::Prepare: {
        Amplitudes state = g.index ? Amplitudes::Unit(static_cast<Eigen::Index>(total_dim(out)),
                                                      static_cast<Eigen::Index>(*g.index))
                                   : g.state;
        return LabeledOperator(in, out, state);
    }
    case OpKind::Unitary: return LabeledOperator(in, out, g.matrix);
    case OpKind::Measure: {
        Matrix effect = Matrix::Zero(1, static_cast<Eigen::Index>(total_dim(in)));
        effect(0, static_cast<Eigen::Index>(*outcome)) = 1.0;
        return LabeledOperator(in, out, effect);
    }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown gate kind");
}

std::string format_real(double x) {
    char buf[40];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

}  // namespace

const GateDecl *CircuitSpec::find_gate(std::string_view name) const {
    for (const auto &g : gates) {
        if (g.name == name) return &g;
    }
    return nullptr;
}

std::string format_complex(Complex c) {
    if (c.imag() == 0.0) return format_real(c.real());
    std::string im = format_real(c.imag());
    if (c.real() == 0.0) return im + "i";
    if (im.front() != '-') im = "+" + im;
    return format_real(c.real()) + im + "i";
}

ComplexLiteral parse_complex_literal(std::string_view text) {
    LineParser p(text, 1);
    ComplexLiteral lit;
    std::vector<std::vector<Complex>> rows;
    p.skip_ws();
    const bool nested = text.find('[') != text.rfind('[');
    if (nested) {
        p.expect('[');
        do {
            rows.push_back(p.complex_row());
        } while (p.accept(','));
        p.expect(']');
    } else {
        rows.push_back(p.complex_row());
    }
    if (!p.at_end()) p.fail(ErrorCode::SyntaxError, "unexpected trailing text");
    lit.rows = rows.size();
    lit.cols = rows.front().size();
    for (const auto &r : rows) {
        if (r.size() != lit.cols) p.fail(ErrorCode::ShapeError, "rows differ in length", 1);
        lit.values.insert(lit.values.end(), r.begin(), r.end());
    }
    return lit;
}

CircuitSpec parse_circuit(std::string_view text, double tol) {
    CircuitSpec spec;
    std::map<std::string, SpaceSite> sites;
    std::map<std::string, std::size_t> gate_index;
    std::set<std::string> wired;

    std::size_t line_no = 0;
    while (!text.empty() || line_no == 0) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        LineParser p(line, line_no);
        if (p.at_end()) {
            if (text.empty()) break;
            continue;
        }
        const std::size_t keyword_col = p.token_column();
        if (p.accept_word("gate")) {
            GateDecl gate;
            gate.line = static_cast<int>(line_no);
            const std::size_t name_col = p.token_column();
            gate.name = p.name("gate name");
            if (gate_index.count(gate.name)) {
                p.fail(ErrorCode::DuplicateDeclaration, "gate '" + gate.name + "' declared twice", name_col);
            }
            p.expect_word("in");
            std::vector<std::size_t> in_cols, out_cols;
            gate.inputs = parse_space_list(p, in_cols);
            p.expect_word("out");
            gate.outputs = parse_space_list(p, out_cols);
            auto register_spaces = [&](const SpaceList &list, bool is_output, const std::vector<std::size_t> &cols) {
                for (std::size_t i = 0; i < list.size(); ++i) {
                    const auto &s = list[i];
                    if (sites.count(s.label)) {
                        p.fail(ErrorCode::DuplicateDeclaration, "space '" + s.label + "' declared twice", cols[i]);
                    }
                    sites[s.label] = SpaceSite{spec.gates.size(), is_output, s.dim};
                }
            };
            register_spaces(gate.inputs, false, in_cols);
            register_spaces(gate.outputs, true, out_cols);
            parse_op(p, gate, tol);
            if (!p.at_end()) p.fail(ErrorCode::SyntaxError, "unexpected trailing text");
            gate_index[gate.name] = spec.gates.size();
            spec.gates.push_back(std::move(gate));
        } else if (p.accept_word("wire")) {
            WireDecl wire;
            wire.line = static_cast<int>(line_no);
            auto endpoint = [&](std::string &gate, std::string &space, bool want_output) {
                const std::size_t col = p.token_column();
                gate = p.name("gate name");
                p.expect('.');
                space = p.name("space name");
                auto g = gate_index.find(gate);
                if (g == gate_index.end()) p.fail(ErrorCode::UndeclaredSpace, "no gate named '" + gate + "'", col);
                auto s = sites.find(space);
                if (s == sites.end() || s->second.gate != g->second) {
                    p.fail(ErrorCode::UndeclaredSpace, "gate '" + gate + "' has no space '" + space + "'", col);
                }
                if (s->second.is_output != want_output) {
                    p.fail(ErrorCode::UndeclaredSpace,
                           "'" + gate + "." + space + "' is not an " + (want_output ? "output" : "input"), col);
                }
                if (wired.count(space)) p.fail(ErrorCode::DuplicateWire, "'" + space + "' is already wired", col);
                return s->second;
            };
            const SpaceSite from = endpoint(wire.from_gate, wire.from_space, true);
            p.expect_word("->");
            const std::size_t to_col = p.token_column();
            const SpaceSite to = endpoint(wire.to_gate, wire.to_space, false);
            if (!p.at_end()) p.fail(ErrorCode::SyntaxError, "unexpected trailing text");
            if (from.dim != to.dim) {
                p.fail(ErrorCode::DimensionMismatch,
                       "wire joins dimension " + std::to_string(from.dim) + " to dimension " + std::to_string(to.dim),
                       keyword_col);
            }
            if (from.gate >= to.gate) {
                p.fail(ErrorCode::CausalOrder, "wire must lead to a later gate", to_col);
            }
            wired.insert(wire.from_space);
            wired.insert(wire.to_space);
            spec.wires.push_back(std::move(wire));
        } else {
            p.fail(ErrorCode::SyntaxError, "expected 'gate' or 'wire'");
        }
    }

    if (spec.gates.empty()) throw CircuitError(ErrorCode::EmptyCircuit, 1, 1, "circuit declares no gates");
    for (const auto &g : spec.gates) {
        for (const auto *list : {&g.inputs, &g.outputs}) {
            for (const auto &s : *list) {
                if (!wired.count(s.label)) {
                    throw CircuitError(ErrorCode::UnwiredSpace, static_cast<std::size_t>(g.line), 1,
                                       "space '" + s.label + "' of gate '" + g.name + "' is not wired");
                }
            }
        }
    }
    return spec;
}

CircuitSpec load_circuit(const std::string &path, double tol) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_circuit(buf.str(), tol);
}

std::string serialize_circuit(const CircuitSpec &spec) {
    std::ostringstream out;
    auto spaces = [&](const SpaceList &list) {
        out << '(';
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (i) out << ',';
            out << list[i].label << ':' << list[i].dim;
        }
        out << ')';
    };
    auto row = [&](auto &&entry, Eigen::Index n) {
        out << '[';
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i) out << ',';
            out << format_complex(entry(i));
        }
        out << ']';
    };
    for (const auto &g : spec.gates) {
        out << "gate " << g.name << " in";
        spaces(g.inputs);
        out << " out";
        spaces(g.outputs);
        out << " op=";
        switch (g.kind) {
        case OpKind::Prepare:
            out << "prepare[";
            if (g.index) {
                out << *g.index;
            } else {
                row([&](Eigen::Index i) { return g.state[i]; }, g.state.size());
            }
            out << ']';
            break;
        case OpKind::Unitary:
            out << "unitary[";
            for (Eigen::Index r = 0; r < g.matrix.rows(); ++r) {
                if (r) out << ',';
                row([&](Eigen::Index c) { return g.matrix(r, c); }, g.matrix.cols());
            }
            out << ']';
            break;
        case OpKind::Measure:
            out << "measure";
            if (g.index) out << '[' << *g.index << ']';
            break;
        }
        out << '\n';
    }
    for (const auto &w : spec.wires) {
        out << "wire " << w.from_gate << '.' << w.from_space << " -> " << w.to_gate << '.' << w.to_space << '\n';
    }
    return out.str();
}

std::vector<InstrumentCJ> circuit_instruments(const CircuitSpec &spec,
                                              const std::map<std::string, std::size_t> &free_outcomes) {
    std::vector<InstrumentCJ> gates;
    for (const auto &g : spec.gates) {
        std::optional<std::size_t> outcome = g.index;
        if (g.kind == OpKind::Measure && !outcome) {
            auto it = free_outcomes.find(g.name);
            if (it == free_outcomes.end()) {
                throw Error(ErrorCode::InvalidArgument, "no outcome chosen for measurement '" + g.name + "'");
            }
            if (it->second >= total_dim(g.inputs)) {
                throw Error(ErrorCode::IndexOutOfRange, "outcome out of range for '" + g.name + "'");
            }
            outcome = it->second;
        }
        InstrumentCJ inst{g.name, cj_vector(gate_operator(g, outcome)), {}, {}};
        if (g.kind == OpKind::Measure) inst.outcomes[g.name] = static_cast<int>(*outcome);
        gates.push_back(std::move(inst));
    }
    return gates;
}

ProcessVector circuit_process(const CircuitSpec &spec) {
    std::map<std::string, LabeledSpace> spaces;
    for (const auto &g : spec.gates) {
        for (const auto &s : g.inputs) spaces.emplace(s.label, s);
        for (const auto &s : g.outputs) spaces.emplace(s.label, s);
    }
    std::vector<Wire> wires;
    for (const auto &w : spec.wires) wires.push_back(Wire{spaces.at(w.from_space), spaces.at(w.to_space)});
    return ProcessVector(std::move(wires));
}

std::vector<CircuitOutcome> run_circuit(const CircuitSpec &spec) {
    std::vector<const GateDecl *> free;
    for (const auto &g : spec.gates) {
        if (g.kind == OpKind::Measure && !g.index) free.push_back(&g);
    }
    const ProcessVector process = circuit_process(spec);
    std::vector<CircuitOutcome> results;
    std::map<std::string, std::size_t> choice;
    for (const auto *g : free) choice[g->name] = 0;
    while (true) {
        auto gates = circuit_instruments(spec, choice);
        CircuitOutcome outcome;
        for (const auto &inst : gates) {
            for (const auto &[name, value] : inst.outcomes) outcome.outcomes[name] = static_cast<std::size_t>(value);
        }
        outcome.probability = probability_from_vectors(gates, process);
        results.push_back(std::move(outcome));

        // odometer over the free measurements, last gate fastest
        std::size_t k = free.size();
        while (k > 0) {
            --k;
            auto &digit = choice[free[k]->name];
            if (++digit < total_dim(free[k]->inputs)) break;
            digit = 0;
            if (k == 0) return results;
        }
        if (free.empty()) return results;
    }
}

std::vector<std::size_t> circuit_output_dims(const CircuitSpec &spec) {
    std::vector<std::size_t> dims;
    for (const auto &g : spec.gates) {
        if (!g.outputs.empty()) dims.push_back(total_dim(g.outputs));
    }
    return dims;
}

AxiomReport circuit_axioms(const CircuitSpec &spec, double tol) {
    const ProcessVector process = circuit_process(spec);
    const auto dims = circuit_output_dims(spec);
    // Small enough to diagonalise through its Gram form; otherwise use the
    // rank-one closed form.
    if (process.amplitude_count() <= static_cast<double>(1u << 20)) {
        return check_process_axioms(RankOneSum::from_process_vector(process), dims, tol);
    }
    return check_process_axioms(process, dims, tol);
}

}  // namespace pmfock
