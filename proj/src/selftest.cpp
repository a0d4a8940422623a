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

#include "pmfock/selftest.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "pmfock/fock.hpp"
#include "pmfock/protocols.hpp"
#include "pmfock/random.hpp"

namespace pmfock {

namespace {

constexpr std::size_t kMaxFailures = 5;

class Suite {
  public:
    explicit Suite(std::string name) { result_.name = std::move(name); }

    void check(bool ok, const std::string &what) {
        ++result_.checks;
        if (ok) return;
        result_.passed = false;
        if (result_.failures.size() < kMaxFailures) result_.failures.push_back(what);
    }
    void close(double actual, double expected, double tol, const std::string &what) {
        std::ostringstream msg;
        msg.precision(12);
        msg << what << ": got " << actual << ", expected " << expected;
        check(std::abs(actual - expected) <= tol, msg.str());
    }

    SuiteResult take() { return std::move(result_); }

  private:
    SuiteResult result_;
};

std::string tag(int a, int b) { return "a=" + std::to_string(a) + " b=" + std::to_string(b); }

double sign_of(int bit) { return bit == 0 ? 1.0 : -1.0; }

SuiteResult lemma1(Rng &rng) {
    Suite s("lemma1");
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(trial) % 3;
        const LabeledSpace x_out("X_O", d), y_in("Y_I", d);
        const Amplitudes psi = random_state(d, rng);
        const auto got = partial_inner(conjugate(LabeledVector({x_out}, psi)), transport_vector(x_out, y_in));
        s.check(max_abs_diff(got, LabeledVector({y_in}, psi)) <= 1e-10, "trial " + std::to_string(trial));
    }
    return s.take();
}

SuiteResult lemma2(Rng &rng) {
    Suite s("lemma2");
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(trial) % 3;
        const LabeledSpace x_in("X_I", d), x_out("X_O", d), y_in("Y_I", d);
        const Matrix u = random_unitary(d, rng);
        const Amplitudes psi = random_state(d, rng);
        const auto gate = cj_vector(LabeledOperator({x_in}, {x_out}, u));
        const auto w = tensor(LabeledVector({x_in}, psi), transport_vector(x_out, y_in));
        const auto got = partial_inner(gate, w);
        s.check(max_abs_diff(got, LabeledVector({y_in}, u * psi)) <= 1e-10, "trial " + std::to_string(trial));
    }
    return s.take();
}

SuiteResult fock_relations() {
    Suite s("fock-relations");
    for (auto stats : {Statistics::Boson, Statistics::Fermion}) {
        for (std::size_t d = 1; d <= 3; ++d) {
            for (std::size_t n = 1; n <= 4; ++n) {
                const FockSpec spec(d, stats, n);
                const bool fermion = stats == Statistics::Fermion;
                // Truncation breaks the relations on the top sector only; an
                // untruncated fermionic space is checked on its full basis.
                const bool full = fermion && spec.cutoff == d;
                std::vector<Eigen::Index> rows;
                const auto basis = fock_basis(spec);
                for (std::size_t i = 0; i < basis.size(); ++i) {
                    if (full || basis[i].total() < spec.cutoff) rows.push_back(static_cast<Eigen::Index>(i));
                }
                const double sign = fermion ? 1.0 : -1.0;
                for (std::size_t i = 1; i <= d; ++i) {
                    for (std::size_t j = 1; j <= d; ++j) {
                        const Matrix ai = annihilation_op(spec, i).entries();
                        const Matrix aj = annihilation_op(spec, j).entries();
                        const Matrix ci = creation_op(spec, i).entries();
                        const Matrix cj = creation_op(spec, j).entries();
                        const Matrix mixed = ai * cj + sign * cj * ai;
                        const Matrix cc = ci * cj + sign * cj * ci;
                        const Matrix aa = ai * aj + sign * aj * ai;
                        double worst = 0.0;
                        for (auto col : rows) {
                            for (Eigen::Index row = 0; row < mixed.rows(); ++row) {
                                const Complex want = (row == col && i == j) ? 1.0 : 0.0;
                                worst = std::max({worst, std::abs(mixed(row, col) - want), std::abs(cc(row, col)),
                                                  std::abs(aa(row, col))});
                            }
                        }
                        s.check(worst <= 1e-14, std::string(fermion ? "fermion" : "boson") + " d=" + std::to_string(d) +
                                                    " N=" + std::to_string(n) + " i=" + std::to_string(i) +
                                                    " j=" + std::to_string(j));
                    }
                }
            }
        }
    }
    return s.take();
}

SuiteResult fock_lift(Rng &rng) {
    Suite s("fock-lift");
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 1 + static_cast<std::size_t>(trial) % 3;
        for (auto stats : {Statistics::Boson, Statistics::Fermion}) {
            const FockSpec spec(d, stats, 2);
            const Matrix u = random_unitary(d, rng);
            const auto lifted = lift_single_particle_unitary(u, spec, "F_I", "F_O");
            const auto one = sector_indices(spec, 1);
            double worst = 0.0;
            for (std::size_t r = 0; r < one.size(); ++r) {
                for (std::size_t c = 0; c < one.size(); ++c) {
                    const auto rr = static_cast<Eigen::Index>(one[r]), cc = static_cast<Eigen::Index>(one[c]);
                    worst = std::max(worst, std::abs(lifted.entries()(rr, cc) -
                                                     u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
                }
            }
            s.check(worst == 0.0, "k=1 sector differs from u, trial " + std::to_string(trial));
            s.check(is_unitary(lifted.entries(), 1e-10), "lift is not unitary, trial " + std::to_string(trial));
        }
    }
    return s.take();
}

SuiteResult dsd_distribution_suite(HadamardSign sign) {
    Suite s("dsd-distribution");
    for (int a = 0; a <= 1; ++a) {
        for (int b = 0; b <= 1; ++b) {
            const double parity = sign_of(a) * sign_of(b);
            for (const auto &o : dsd_distribution({a, b}, sign)) {
                const double want = (o.a_prime == 1 && o.b_prime == 0)   ? (1 + parity) / 2
                                    : (o.a_prime == 0 && o.b_prime == 1) ? (1 - parity) / 2
                                                                         : 0.0;
                s.close(o.probability, want, 1e-12,
                        tag(a, b) + " a'=" + std::to_string(o.a_prime) + " b'=" + std::to_string(o.b_prime));
            }
            const auto g = dsd_guesses({a, b}, sign);
            s.check(g.success, tag(a, b) + ": guesses x=b, y=a fail");
        }
    }
    return s.take();
}

SuiteResult dsd_intermediate(HadamardSign sign) {
    Suite s("dsd-intermediate");
    const LabeledSpace ap("A'_I", 2), bp("B'_I", 2);
    for (int a = 0; a <= 1; ++a) {
        for (int b = 0; b <= 1; ++b) {
            const auto got = dsd_intermediate_state({a, b}, DsdStage::AfterSPrime, sign);
            const double plus = (sign_of(a) + sign_of(b)) / 2, minus = (sign_of(a) - sign_of(b)) / 2;
            std::vector<std::size_t> one_zero{1, 0}, zero_one{0, 1};
            const auto want = basis_state({ap, bp}, one_zero) * plus + basis_state({ap, bp}, zero_one) * minus;
            s.check(max_abs_diff(got, want) <= 1e-12, tag(a, b) + ": state after S'");
        }
    }
    return s.take();
}

SuiteResult process_axioms() {
    Suite s("process-axioms");
    const auto set = build_dsd({0, 0}, 0, 0);
    // output dims L, V, S, A, B, S'
    const std::vector<std::size_t> outs{2, 2, 4, 2, 2, 4};
    const auto report = check_process_axioms(RankOneSum::from_process_vector(set.process), outs);
    s.check(report.positive, "dSD process matrix is not positive");
    s.close(report.trace_value, 256.0, 1e-9, "dSD trace");
    s.check(report.trace_ok, "trace axiom");
    return s.take();
}

SuiteResult switch_branches(Rng &rng) {
    Suite s("switch-branches");
    for (int trial = 0; trial < 5; ++trial) {
        SwitchSpec spec;
        spec.u = random_unitary(2, rng);
        spec.v = random_unitary(2, rng);
        spec.polarization = random_state(2, rng);
        const auto r = switch_distribution(spec);
        const Amplitudes vu = spec.v * spec.u * spec.polarization;
        const Amplitudes uv = spec.u * spec.v * spec.polarization;
        s.close(r.d1.probability, ((uv + vu) / 2).squaredNorm(), 1e-12, "D1 probability");
        s.close(r.d2.probability, ((uv - vu) / 2).squaredNorm(), 1e-12, "D2 probability");
        s.close(r.d1.probability + r.d2.probability + r.other, 1.0, 1e-12, "normalisation");
    }
    SwitchSpec zx;
    zx.u << 1, 0, 0, -1;
    zx.v << 0, 1, 1, 0;
    const auto r = switch_distribution(zx);
    s.close(r.d2.probability, 1.0, 1e-12, "Z,X on h: D2");
    return s.take();
}

SuiteResult operation_counting() {
    Suite s("operation-counting");
    for (int a = 0; a <= 1; ++a) {
        for (int b = 0; b <= 1; ++b) {
            const auto t = dsd_trace({a, b});
            s.check(count_operations(t, CountingMode::VacuumInclusive) == 4, tag(a, b) + ": vacuum-inclusive != 4");
            s.check(count_operations(t, CountingMode::Flag) == 3, tag(a, b) + ": flag != 3");
        }
    }
    SwitchSpec spec;
    spec.u << 1, 0, 0, -1;
    spec.v << 0, 1, 1, 0;
    s.check(count_operations(switch_trace(spec), CountingMode::Flag) == 2, "switch flag != 2");
    return s.take();
}

SuiteResult fock_reduction() {
    Suite s("fock-reduction");
    for (int a = 0; a <= 1; ++a) {
        for (int b = 0; b <= 1; ++b) {
            const auto plain = dsd_distribution({a, b});
            const auto fock = dsd_distribution_fock({a, b});
            for (std::size_t i = 0; i < plain.size(); ++i) {
                s.close(fock[i].probability, plain[i].probability, 1e-12, tag(a, b));
            }
        }
    }
    return s.take();
}

}  // namespace

bool SelftestResult::passed() const {
    for (const auto &s : suites) {
        if (!s.passed) return false;
    }
    return !suites.empty();
}

SelftestResult run_selftest(const SelftestOptions &options) {
    Rng rng(options.seed);
    const HadamardSign sign = options.inject_fault ? HadamardSign::Flipped : HadamardSign::Standard;
    const std::vector<std::pair<std::string, std::function<SuiteResult()>>> suites = {
        {"lemma1", [&] { return lemma1(rng); }},
        {"lemma2", [&] { return lemma2(rng); }},
        {"fock-relations", [] { return fock_relations(); }},
        {"fock-lift", [&] { return fock_lift(rng); }},
        {"dsd-distribution", [&] { return dsd_distribution_suite(sign); }},
        {"dsd-intermediate", [&] { return dsd_intermediate(sign); }},
        {"process-axioms", [] { return process_axioms(); }},
        {"switch-branches", [&] { return switch_branches(rng); }},
        {"operation-counting", [] { return operation_counting(); }},
        {"fock-reduction", [] { return fock_reduction(); }},
    };
    SelftestResult result;
    for (const auto &[name, suite] : suites) {
        try {
            result.suites.push_back(suite());
        } catch (const std::exception &e) {
            result.suites.push_back(SuiteResult{name, false, 1, {e.what()}});
        }
    }
    return result;
}

}  // namespace pmfock
