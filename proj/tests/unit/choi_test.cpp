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

#include <algorithm>

#include "oracles.hpp"
#include "pmfock/choi.hpp"
#include "pmfock/protocols.hpp"

namespace pmfock {
namespace {

template <typename Fn>
void expect_code(ErrorCode code, Fn &&fn) {
    try {
        fn();
        ADD_FAILURE() << "expected " << error_code_name(code);
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

const double kR = 1.0 / std::sqrt(2.0);

Matrix hadamard4() {
    Matrix h = Matrix::Identity(4, 4);
    h(2, 2) = kR;
    h(1, 2) = kR;
    h(2, 1) = kR;
    h(1, 1) = -kR;
    return h;
}

TEST(TransportVector, Examples) {
    EXPECT_EQ(transport_vector({"X", 2}, {"Y", 2}).amps(), (Amplitudes(4) << 1, 0, 0, 1).finished());
    const auto one = transport_vector({"X", 1}, {"Y", 1});
    EXPECT_EQ(one.size(), 1u);
    EXPECT_EQ(one.amps()[0], Complex(1.0));
    EXPECT_EQ(norm_sq(transport_vector({"X", 3}, {"Y", 3})), 3.0);
    expect_code(ErrorCode::DimensionMismatch, [] { transport_vector({"X", 2}, {"Y", 3}); });
}

TEST(CjVector, IdentityIsTransportVector) {
    for (std::size_t d = 1; d <= 4; ++d) {
        const LabeledSpace in("G_I", d), out("G_O", d);
        expect_code(ErrorCode::LabelCollision, [&] { cj_vector(LabeledOperator::identity({in})); });
        EXPECT_LE(max_abs_diff(cj_vector(LabeledOperator({in}, {out}, Matrix::Identity(d, d))), transport_vector(in, out)),
                  0.0);
    }
}

TEST(CjVector, PhaseGateWithSetBit) {
    const LabeledSpace ai("A_I", 2), ao("A_O", 2);
    const auto c = cj_vector(LabeledOperator({ai}, {ao}, (Matrix(2, 2) << 1, 0, 0, -1).finished()));
    EXPECT_EQ(c.labels(), (std::vector<std::string>{"A_I", "A_O"}));
    EXPECT_EQ(c.amps(), (Amplitudes(4) << 1, 0, 0, -1).finished());
}

TEST(CjVector, ConjugatesComplexEntries) {
    const LabeledSpace i("I", 2), o("O", 2);
    Matrix m(2, 2);
    m << Complex(0, 1), 0, 0, 1;
    const auto c = cj_vector(LabeledOperator({i}, {o}, m));
    EXPECT_EQ(c.amps()[0], Complex(0, -1));
}

// The beam-splitter CJ vector has 8 nonzero terms: |00>|00>, |11>|11> and the
// six single-excitation couplings written out from the Hadamard matrix.
TEST(CjVector, BeamSplitterExpansion) {
    const LabeledSpace sil("S_I^L", 2), siv("S_I^V", 2), soa("S_O^A", 2), sob("S_O^B", 2);
    const auto c = cj_vector(LabeledOperator({sil, siv}, {soa, sob}, hadamard4()));
    std::map<std::vector<std::size_t>, double> want = {
        {{0, 0, 0, 0}, 1.0}, {{1, 1, 1, 1}, 1.0}, {{1, 0, 1, 0}, kR}, {{1, 0, 0, 1}, kR},
        {{0, 1, 1, 0}, kR},  {{0, 1, 0, 1}, -kR},
    };
    int nonzero = 0;
    for (std::size_t k = 0; k < 16; ++k) {
        const std::vector<std::size_t> idx{k >> 3 & 1, k >> 2 & 1, k >> 1 & 1, k & 1};
        const Complex got = c.at(idx);
        const double expected = want.count(idx) ? want[idx] : 0.0;
        EXPECT_NEAR(std::abs(got - expected), 0.0, 1e-15) << k;
        if (std::abs(got) > 0) ++nonzero;
    }
    EXPECT_EQ(nonzero, 6);
}

TEST(CjMatrix, MatchesBruteForceDefinition) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index din = 1 + trial % 3, dout = 1 + (trial / 3) % 3;
        const LabeledSpace gi("G_I", static_cast<std::size_t>(din)), go("G_O", static_cast<std::size_t>(dout));
        std::vector<oracle::Mat> kraus;
        KrausChannel channel;
        for (int t = 0; t < 2; ++t) {
            oracle::Mat k(dout, din);
            for (auto &x : k.reshaped()) x = oracle::Cx(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng));
            kraus.push_back(k);
            channel.emplace_back(SpaceList{gi}, SpaceList{go}, k);
        }
        const std::vector<std::string> order{"G_I", "G_O"};
        const auto m = cj_matrix(channel).permuted(order, order);
        EXPECT_LE((m.entries() - oracle::brute_cj_matrix(kraus, din, dout)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(CjMatrix, UnitaryTermIsOuterProductOfVector) {
    const LabeledSpace i("I", 2), o("O", 2);
    const LabeledOperator h({i}, {o}, (Matrix(2, 2) << kR, kR, kR, -kR).finished());
    const auto c = cj_vector(h);
    EXPECT_TRUE(approx_equal(cj_matrix(KrausChannel{h}), cj_matrix(c)));
}

TEST(CjMatrix, IdentityChannelHasTraceTwoRankOne) {
    const LabeledSpace i("I", 2), o("O", 2);
    const auto m = cj_matrix(KrausChannel{LabeledOperator({i}, {o}, Matrix::Identity(2, 2))});
    EXPECT_NEAR(m.entries().trace().real(), 2.0, 1e-15);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m.entries());
    EXPECT_EQ((eig.eigenvalues().array().abs() > 1e-12).count(), 1);
}

TEST(CjMatrix, ResetToVacuumChannel) {
    const LabeledSpace i("I", 2), o("O", 2);
    KrausChannel reset = {LabeledOperator({i}, {o}, (Matrix(2, 2) << 1, 0, 0, 0).finished()),
                          LabeledOperator({i}, {o}, (Matrix(2, 2) << 0, 1, 0, 0).finished())};
    const auto m = cj_matrix(reset);
    EXPECT_NEAR(m.entries().trace().real(), 2.0, 1e-15);
    std::vector<oracle::Mat> kraus = {reset[0].entries(), reset[1].entries()};
    const std::vector<std::string> order{"I", "O"};
    EXPECT_LE((m.permuted(order, order).entries() - oracle::brute_cj_matrix(kraus, 2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

std::vector<Wire> dsd_wires() {
    auto s = [](const char *label) { return LabeledSpace(label, 2); };
    return {{s("L_O"), s("S_I^L")},   {s("V_O"), s("S_I^V")},   {s("S_O^A"), s("A_I")},  {s("S_O^B"), s("B_I")},
            {s("A_O"), s("S'_I^A")}, {s("B_O"), s("S'_I^B")}, {s("S'_O^A"), s("A'_I")}, {s("S'_O^B"), s("B'_I")}};
}

TEST(ProcessVector, DsdWiringSizeAndNorm) {
    const auto w = process_vector_from_wiring(dsd_wires());
    EXPECT_EQ(w.amplitude_count(), 65536.0);
    EXPECT_EQ(w.norm_sq(), 256.0);
    const auto dense = w.vector();
    EXPECT_EQ(dense.size(), 65536u);
    EXPECT_NEAR(norm_sq(dense), 256.0, 1e-9);
}

TEST(ProcessVector, SingleWireAndErrors) {
    const LabeledSpace a("A", 2), b("B", 2), c("C", 2), d3("D", 3);
    EXPECT_LE(max_abs_diff(ProcessVector({{a, b}}).vector(), transport_vector(a, b)), 0.0);
    expect_code(ErrorCode::LabelCollision, [&] { ProcessVector({{a, b}, {a, c}}); });
    expect_code(ErrorCode::DimensionMismatch, [&] { ProcessVector({{a, d3}}); });
}

TEST(ProcessVector, WireOrderDoesNotMatter) {
    auto wires = dsd_wires();
    const auto w1 = ProcessVector(wires).vector();
    std::reverse(wires.begin(), wires.end());
    std::swap(wires[1], wires[4]);
    EXPECT_LE(max_abs_diff(w1, ProcessVector(wires).vector()), 0.0);
}

TEST(ProcessVector, StreamingContractionMatchesDense) {
    for (int a = 0; a <= 1; ++a) {
        for (int b = 0; b <= 1; ++b) {
            const auto set = build_dsd({a, b}, 1, 0);
            const auto dense = set.process.vector();
            for (std::size_t n = 0; n <= set.gates.size(); ++n) {
                const auto span = std::span(set.gates).first(n);
                EXPECT_LE(max_abs_diff(contract(span, set.process), contract(span, dense)), 1e-14) << n;
            }
        }
    }
}

TEST(ProbabilityFromVectors, DsdExamples) {
    auto p = [](int a, int b, int ap, int bp) {
        const auto set = build_dsd({a, b}, ap, bp);
        return probability_from_vectors(set.gates, set.process);
    };
    EXPECT_NEAR(p(0, 0, 1, 0), 1.0, 1e-12);
    EXPECT_NEAR(p(0, 0, 0, 1), 0.0, 1e-12);
    const auto set = build_dsd({0, 0}, 1, 0);
    EXPECT_EQ(probability_from_vectors(set.gates, LabeledVector::zero(set.process.spaces())), 0.0);
}

TEST(ProbabilityFromVectors, CoverageErrors) {
    auto set = build_dsd({0, 0}, 1, 0);
    auto missing = set.gates;
    missing.pop_back();
    expect_code(ErrorCode::CoverageError, [&] { probability_from_vectors(missing, set.process); });
    auto doubled = set.gates;
    doubled.push_back(set.gates.back());
    expect_code(ErrorCode::CoverageError, [&] { probability_from_vectors(doubled, set.process); });
}

TEST(ProbabilityFromMatrices, AgreesWithVectorsOnRankOneW) {
    const auto set = build_dsd({1, 0}, 0, 1);
    const auto w = RankOneSum::from_process_vector(set.process);
    EXPECT_NEAR(probability_from_matrices(set.gates, w), 1.0, 1e-12);
    expect_code(ErrorCode::CoverageError, [&] { probability_from_matrices(set.gates, RankOneSum{}); });
}

// Randomised phases on A and B, evaluated through both probability rules.
TEST(ProbabilityFromMatrices, VectorMatrixConsistencyProperty) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
    for (int trial = 0; trial < 50; ++trial) {
        auto set = build_dsd({0, 0}, trial % 2, (trial / 2) % 2);
        for (std::size_t g : {3u, 4u}) {
            const auto &old = set.gates[g];
            const auto &spaces = old.vector().spaces();
            Matrix phase = Matrix::Identity(2, 2);
            phase(0, 0) = std::polar(1.0, angle(rng));
            phase(1, 1) = std::polar(1.0, angle(rng));
            set.gates[g] = unitary_gate(old.gate, LabeledOperator({spaces[0]}, {spaces[1]}, phase));
        }
        const double pv = probability_from_vectors(set.gates, set.process);
        const double pm = probability_from_matrices(set.gates, RankOneSum::from_process_vector(set.process));
        EXPECT_NEAR(pv, pm, 1e-10);
    }
}

TEST(ProbabilityFromMatrices, DenseSmallProcess) {
    // preparation -> unitary -> measurement on a qutrit
    std::mt19937_64 rng(4);
    const LabeledSpace pi("P_I", 1), po("P_O", 3), ui("U_I", 3), uo("U_O", 3), mi("M_I", 3), mo("M_O", 1);
    const oracle::Vec psi = oracle::random_state(3, rng);
    const oracle::Mat u = oracle::random_unitary(3, rng);
    const ProcessVector w({{po, ui}, {uo, mi}});
    const auto dense = process_matrix(w);
    double total = 0.0;
    for (std::size_t n = 0; n < 3; ++n) {
        const std::vector<InstrumentCJ> gates = {preparation_gate("P", pi, po, psi),
                                                 unitary_gate("U", LabeledOperator({ui}, {uo}, u)),
                                                 measurement_gate("M", mi, mo, n)};
        const double pv = probability_from_vectors(gates, w);
        EXPECT_NEAR(probability_from_matrices(gates, dense), pv, 1e-12);
        EXPECT_NEAR(pv, std::norm((u * psi)[static_cast<Eigen::Index>(n)]), 1e-12);
        total += pv;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    const LabeledOperator zero(dense.in_spaces(), dense.out_spaces(), Matrix::Zero(9 * 9, 9 * 9));
    const std::vector<InstrumentCJ> gates = {preparation_gate("P", pi, po, psi),
                                             unitary_gate("U", LabeledOperator({ui}, {uo}, u)),
                                             measurement_gate("M", mi, mo, 0)};
    EXPECT_EQ(probability_from_matrices(gates, zero), 0.0);
}

TEST(Normalisation, DsdOutcomesSumToOne) {
    for (int a = 0; a <= 1; ++a) {
        for (int b = 0; b <= 1; ++b) {
            double total = 0.0;
            for (const auto &o : dsd_distribution({a, b})) total += o.probability;
            EXPECT_NEAR(total, 1.0, 1e-10);
        }
    }
}

TEST(Axioms, DsdProcessMatrix) {
    const auto set = build_dsd({0, 0}, 0, 0);
    // independent count of output dims: L_O, V_O, S_O^A (x) S_O^B, A_O, B_O, S'_O^A (x) S'_O^B
    const std::vector<std::size_t> outs{2, 2, 2 * 2, 2, 2, 2 * 2};
    const auto gram = check_process_axioms(RankOneSum::from_process_vector(set.process), outs);
    EXPECT_TRUE(gram.positive);
    EXPECT_TRUE(gram.trace_ok);
    EXPECT_NEAR(gram.trace_value, 256.0, 1e-9);
    const auto closed = check_process_axioms(set.process, outs);
    EXPECT_TRUE(closed.positive);
    EXPECT_EQ(closed.trace_value, 256.0);
}

TEST(Axioms, DenseExamples) {
    const LabeledSpace x("X", 2), y("Y", 2);
    const std::vector<std::size_t> outs{2};
    const auto neg = check_process_axioms(LabeledOperator({x, y}, {x, y}, -Matrix::Identity(4, 4)), outs);
    EXPECT_FALSE(neg.positive);
    const auto wrong_trace = check_process_axioms(LabeledOperator({x, y}, {x, y}, Matrix::Identity(4, 4) / 4.0), outs);
    EXPECT_TRUE(wrong_trace.positive);
    EXPECT_FALSE(wrong_trace.trace_ok);
    const auto good = check_process_axioms(process_matrix(ProcessVector({{x, y}})), outs);
    EXPECT_TRUE(good.positive);
    EXPECT_TRUE(good.trace_ok);
    expect_code(ErrorCode::ShapeError,
                [&] { check_process_axioms(LabeledOperator({x}, {x, y}, Matrix::Zero(4, 2)), outs); });
}

}  // namespace
}  // namespace pmfock
