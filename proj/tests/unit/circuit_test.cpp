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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pmfock/circuit.hpp"

namespace pmfock {
namespace {

const std::string kCircuits = PMFOCK_CIRCUITS_DIR;

struct Located {
    ErrorCode code;
    std::size_t line;
    std::size_t column;
};

Located parse_error(const std::string &text) {
    try {
        parse_circuit(text);
    } catch (const CircuitError &e) {
        return {e.code(), e.line(), e.column()};
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return {ErrorCode::SyntaxError, 0, 0};
}

// 1-based column of the first occurrence of `token` on line `line`.
std::size_t column_of(const std::string &text, std::size_t line, const std::string &token) {
    std::size_t start = 0;
    for (std::size_t l = 1; l < line; ++l) start = text.find('\n', start) + 1;
    return text.find(token, start) - start + 1;
}

const std::string kPassThrough =
    "gate P in() out(P_O:2) op=prepare[0]\n"
    "gate U in(U_I:2) out(U_O:2) op=unitary[[0,1],[1,0]]\n"
    "gate M in(M_I:2) out() op=measure\n"
    "wire P.P_O -> U.U_I\n"
    "wire U.U_O -> M.M_I\n";

TEST(CircuitParse, ShippedDsdFile) {
    const auto spec = load_circuit(kCircuits + "/dsd.circuit");
    EXPECT_EQ(spec.gates.size(), 8u);
    EXPECT_EQ(spec.wires.size(), 8u);
    ASSERT_NE(spec.find_gate("S'"), nullptr);
    EXPECT_EQ(spec.find_gate("S'")->inputs.size(), 2u);
    EXPECT_EQ(spec.find_gate("A'")->kind, OpKind::Measure);
    EXPECT_EQ(spec.find_gate("nope"), nullptr);
}

TEST(CircuitParse, ShippedSwitchFile) {
    const auto spec = load_circuit(kCircuits + "/switch.circuit");
    EXPECT_EQ(spec.gates.size(), 10u);
    EXPECT_EQ(spec.wires.size(), 10u);
}

TEST(CircuitParse, CommentsBlankLinesAndComplexEntries) {
    const auto spec = parse_circuit(
        "# header\n\n"
        "gate P in() out(P_O:2) op=prepare[[0.6,0.8i]]\n"
        "gate U in(U_I:2) out(U_O:2) op=unitary[[1,0],[0,-1i]]   # phase\n"
        "gate M in(M_I:2) out() op=measure[1]\n"
        "wire P.P_O -> U.U_I\n"
        "wire U.U_O -> M.M_I\n");
    EXPECT_EQ(spec.gates[0].state[1], Complex(0, 0.8));
    EXPECT_EQ(spec.gates[1].matrix(1, 1), Complex(0, -1));
    EXPECT_EQ(spec.gates[2].index, std::optional<std::size_t>(1));
    EXPECT_EQ(spec.wires[1].line, 7);
}

TEST(CircuitParse, ComplexLiterals) {
    const auto lit = parse_complex_literal("[[1,2-3i],[0.5i,-1e-3+2i]]");
    EXPECT_EQ(lit.rows, 2u);
    EXPECT_EQ(lit.cols, 2u);
    EXPECT_EQ(lit.values[1], Complex(2, -3));
    EXPECT_EQ(lit.values[2], Complex(0, 0.5));
    EXPECT_EQ(lit.values[3], Complex(-1e-3, 2));
    const auto row = parse_complex_literal("[1,i,-i,2+i,2-i]");
    EXPECT_EQ(row.rows, 1u);
    EXPECT_EQ(row.values[1], Complex(0, 1));
    EXPECT_EQ(row.values[2], Complex(0, -1));
    EXPECT_EQ(row.values[3], Complex(2, 1));
    EXPECT_EQ(row.values[4], Complex(2, -1));
    EXPECT_THROW(parse_complex_literal("[[1,2],[3]]"), CircuitError);
    EXPECT_THROW(parse_complex_literal("[1,2"), CircuitError);
    EXPECT_THROW(parse_complex_literal("[1,2q]"), CircuitError);
}

TEST(CircuitParse, FormatComplexRoundTrips) {
    for (Complex c : {Complex(0.1, 0), Complex(0, -1), Complex(1.0 / 3, 2.0 / 7), Complex(-1e-300, 5e300)}) {
        const auto lit = parse_complex_literal("[" + format_complex(c) + "]");
        EXPECT_EQ(lit.values[0], c) << format_complex(c);
    }
    EXPECT_EQ(format_complex(Complex(1, 0)), "1");
}

TEST(CircuitErrors, EmptyFile) {
    const auto e = parse_error("# only a comment\n\n");
    EXPECT_EQ(e.code, ErrorCode::EmptyCircuit);
    EXPECT_EQ(e.line, 1u);
    EXPECT_EQ(e.column, 1u);
}

TEST(CircuitErrors, SyntaxErrorsPointAtToken) {
    const std::string bad_keyword = "gate P in() out(P_O:2) op=prepare[0]\nwrie P.P_O -> Q.Q_I\n";
    auto e = parse_error(bad_keyword);
    EXPECT_EQ(e.code, ErrorCode::SyntaxError);
    EXPECT_EQ(e.line, 2u);
    EXPECT_EQ(e.column, 1u);

    const std::string bad_kind = "gate P in() out(P_O:2) op=teleport\n";
    e = parse_error(bad_kind);
    EXPECT_EQ(e.code, ErrorCode::SyntaxError);
    EXPECT_EQ(e.column, column_of(bad_kind, 1, "teleport"));

    e = parse_error("gate P in() out(P_O:2) op=prepare[0] extra\n");
    EXPECT_EQ(e.code, ErrorCode::SyntaxError);
}

TEST(CircuitErrors, Declarations) {
    const std::string dup_gate = "gate P in() out(P_O:2) op=prepare[0]\ngate P in() out(Q_O:2) op=prepare[0]\n";
    auto e = parse_error(dup_gate);
    EXPECT_EQ(e.code, ErrorCode::DuplicateDeclaration);
    EXPECT_EQ(e.line, 2u);
    EXPECT_EQ(e.column, column_of(dup_gate, 2, "P"));

    const std::string dup_space = "gate P in() out(X:2) op=prepare[0]\ngate M in(X:2) out() op=measure\n";
    e = parse_error(dup_space);
    EXPECT_EQ(e.code, ErrorCode::DuplicateDeclaration);
    EXPECT_EQ(e.line, 2u);
    EXPECT_EQ(e.column, column_of(dup_space, 2, "X"));
}

TEST(CircuitErrors, Wires) {
    auto with_wire = [](const std::string &wire) {
        return "gate P in() out(P_O:2) op=prepare[0]\n"
               "gate M in(M_I:2) out() op=measure\n"
               "gate N in(N_I:3) out() op=measure\n" +
               wire + "\n";
    };
    std::string text = with_wire("wire P.P_O -> Q.Q_I");
    auto e = parse_error(text);
    EXPECT_EQ(e.code, ErrorCode::UndeclaredSpace);
    EXPECT_EQ(e.line, 4u);
    EXPECT_EQ(e.column, column_of(text, 4, "Q.Q_I"));

    text = with_wire("wire M.M_I -> P.P_O");  // input used as a source
    e = parse_error(text);
    EXPECT_EQ(e.code, ErrorCode::UndeclaredSpace);

    text = with_wire("wire P.P_O -> N.N_I");
    e = parse_error(text);
    EXPECT_EQ(e.code, ErrorCode::DimensionMismatch);
    EXPECT_EQ(e.line, 4u);
    EXPECT_EQ(e.column, 1u);

    text = with_wire("wire P.P_O -> M.M_I\nwire P.P_O -> M.M_I");
    e = parse_error(text);
    EXPECT_EQ(e.code, ErrorCode::DuplicateWire);
    EXPECT_EQ(e.line, 5u);
}

TEST(CircuitErrors, CausalOrder) {
    const std::string text =
        "gate M in(M_I:2) out() op=measure\n"
        "gate P in() out(P_O:2) op=prepare[0]\n"
        "wire P.P_O -> M.M_I\n";
    const auto e = parse_error(text);
    EXPECT_EQ(e.code, ErrorCode::CausalOrder);
    EXPECT_EQ(e.line, 3u);
    EXPECT_EQ(e.column, column_of(text, 3, "M.M_I"));
}

TEST(CircuitErrors, UnwiredSpaceReportsGateLine) {
    const std::string text =
        "gate P in() out(P_O:2) op=prepare[0]\n"
        "gate M in(M_I:2) out() op=measure\n";
    const auto e = parse_error(text);
    EXPECT_EQ(e.code, ErrorCode::UnwiredSpace);
    EXPECT_EQ(e.line, 1u);
}

TEST(CircuitErrors, OperationChecks) {
    EXPECT_EQ(parse_error("gate U in(U_I:2) out(U_O:2) op=unitary[[1,1],[0,1]]\n").code, ErrorCode::NonUnitary);
    EXPECT_EQ(parse_error("gate U in(U_I:2) out(U_O:2) op=unitary[[1,0,0],[0,1,0]]\n").code, ErrorCode::ShapeError);
    EXPECT_EQ(parse_error("gate P in() out(P_O:2) op=prepare[2]\n").code, ErrorCode::IndexOutOfRange);
    EXPECT_EQ(parse_error("gate P in() out(P_O:2) op=prepare[[1,1]]\n").code, ErrorCode::InvalidArgument);
    EXPECT_EQ(parse_error("gate P in(X:2) out(P_O:2) op=prepare[0]\n").code, ErrorCode::ShapeError);
    EXPECT_EQ(parse_error("gate M in(M_I:2) out(Y:2) op=measure\n").code, ErrorCode::ShapeError);
    EXPECT_EQ(parse_error("gate M in(M_I:2) out() op=measure[5]\n").code, ErrorCode::IndexOutOfRange);
    EXPECT_EQ(parse_error("gate P in() out(P_O:0) op=prepare[0]\n").code, ErrorCode::InvalidDimension);
}

TEST(CircuitSerialize, RoundTripIsFixedPoint) {
    for (const char *file : {"/dsd.circuit", "/switch.circuit"}) {
        const auto spec = load_circuit(kCircuits + file);
        const std::string once = serialize_circuit(spec);
        const auto again = parse_circuit(once);
        EXPECT_EQ(serialize_circuit(again), once);
        ASSERT_EQ(again.gates.size(), spec.gates.size());
        for (std::size_t i = 0; i < spec.gates.size(); ++i) {
            EXPECT_EQ(again.gates[i].name, spec.gates[i].name);
            EXPECT_EQ(again.gates[i].matrix, spec.gates[i].matrix);
        }
    }
}

TEST(CircuitRun, PassThroughFlipsTheBit) {
    const auto outcomes = run_circuit(parse_circuit(kPassThrough));
    ASSERT_EQ(outcomes.size(), 2u);
    EXPECT_EQ(outcomes[0].outcomes.at("M"), 0u);
    EXPECT_NEAR(outcomes[0].probability, 0.0, 1e-15);
    EXPECT_NEAR(outcomes[1].probability, 1.0, 1e-15);
}

TEST(CircuitRun, RandomQutritMatchesBornRule) {
    std::mt19937_64 rng(17);
    const oracle::Vec psi = oracle::random_state(3, rng);
    const oracle::Mat u = oracle::random_unitary(3, rng);
    std::string prep = "[";
    for (Eigen::Index i = 0; i < 3; ++i) prep += (i ? "," : "") + format_complex(psi[i]);
    prep += "]";
    std::string mat;
    for (Eigen::Index r = 0; r < 3; ++r) {
        mat += r ? ",[" : "[";
        for (Eigen::Index c = 0; c < 3; ++c) mat += (c ? "," : "") + format_complex(u(r, c));
        mat += "]";
    }
    const auto spec = parse_circuit("gate P in() out(P_O:3) op=prepare[" + prep +
                                    "]\n"
                                    "gate U in(U_I:3) out(U_O:3) op=unitary[" +
                                    mat +
                                    "]\n"
                                    "gate M in(M_I:3) out() op=measure\n"
                                    "wire P.P_O -> U.U_I\nwire U.U_O -> M.M_I\n");
    const oracle::Vec out = u * psi;
    for (const auto &o : run_circuit(spec)) {
        EXPECT_NEAR(o.probability, std::norm(out[static_cast<Eigen::Index>(o.outcomes.at("M"))]), 1e-12);
    }
}

TEST(CircuitRun, ShippedDsdGivesCertainOutcome) {
    const auto outcomes = run_circuit(load_circuit(kCircuits + "/dsd.circuit"));
    ASSERT_EQ(outcomes.size(), 4u);
    for (const auto &o : outcomes) {
        const double want = oracle::dsd_probability(0, 1, static_cast<int>(o.outcomes.at("A'")),
                                                    static_cast<int>(o.outcomes.at("B'")));
        EXPECT_NEAR(o.probability, want, 1e-12);
    }
}

TEST(CircuitRun, ShippedSwitchReachesD2) {
    const auto outcomes = run_circuit(load_circuit(kCircuits + "/switch.circuit"));
    double d2 = 0.0, total = 0.0;
    for (const auto &o : outcomes) {
        total += o.probability;
        if (o.outcomes.at("D1") == 0 && o.outcomes.at("D2") != 0) d2 += o.probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(d2, 1.0, 1e-12);
}

TEST(CircuitAxioms, ShippedCircuits) {
    const auto dsd = circuit_axioms(load_circuit(kCircuits + "/dsd.circuit"));
    EXPECT_TRUE(dsd.positive);
    EXPECT_TRUE(dsd.trace_ok);
    EXPECT_NEAR(dsd.trace_value, 256.0, 1e-9);
    const auto sw = circuit_axioms(load_circuit(kCircuits + "/switch.circuit"));
    EXPECT_TRUE(sw.positive);
    EXPECT_TRUE(sw.trace_ok);
    EXPECT_NEAR(sw.trace_value, sw.expected_trace, 1e-9 * sw.expected_trace);
}

TEST(CircuitAxioms, PassThrough) {
    const auto spec = parse_circuit(kPassThrough);
    EXPECT_EQ(circuit_output_dims(spec), (std::vector<std::size_t>{2, 2}));
    const auto r = circuit_axioms(spec);
    EXPECT_TRUE(r.positive);
    EXPECT_NEAR(r.trace_value, 4.0, 1e-12);
}

TEST(CircuitLoad, MissingFile) {
    EXPECT_THROW(load_circuit(kCircuits + "/does-not-exist.circuit"), Error);
}

}  // namespace
}  // namespace pmfock
