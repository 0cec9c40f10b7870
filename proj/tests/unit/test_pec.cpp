// Copyright 2026 The QEM Toolkit Authors
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


#include <cmath>
#include <map>
#include <string>

#include <doctest.h>

#include "qem/core/circuit.hpp"
#include "qem/core/density_matrix.hpp"
#include "qem/core/gates.hpp"
#include "qem/core/random.hpp"
#include "qem/pec/pec.hpp"

using namespace qem;
using namespace qem::pec;

namespace {

Channel z_error(int q) {
    return Channel::pauli_error(PauliString::from_label("Z"), {q});
}

// Five dephasing locations on two qubits.
NoisyCircuit dephasing_circuit(double p) {
    NoisyCircuit c(2);
    c.add(Gate::named("RY", {0}, {0.7}), z_error(0), p);
    c.add(Gate::named("H", {1}), z_error(1), p);
    c.add(Gate::named("CNOT", {0, 1}), z_error(0), p);
    c.add(Gate::named("RX", {1}, {0.3}), z_error(1), p);
    c.add(Gate::named("H", {0}), z_error(0), p);
    return c;
}

NoisyCircuit chain(int count, double p) {
    NoisyCircuit c(1);
    for (int i = 0; i < count; ++i) {
        c.add(Gate::named("H", {0}), z_error(0), p);
    }
    return c;
}

// Closed-form output of the 1-qubit chain: each location scales <X>, <Y>
// by 1 - 2p through the H gates; we read the result with a 2x2 oracle.
Matrix chain_oracle(int count, double p, double scale) {
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1;
    Matrix h = gates::h();
    Matrix z = gates::z();
    for (int i = 0; i < count; ++i) {
        rho = h * rho * h.adjoint();
        rho = (1 - scale * p) * rho + scale * p * z * rho * z;
    }
    return rho;
}

}  // namespace

TEST_CASE("pauli channel inversion") {
    SUBCASE("identity channel") {
        auto d = invert_pauli_channel(Channel::identity({0}));
        REQUIRE(d.basis.size() == 1);
        CHECK(d.basis[0].alpha == doctest::Approx(1.0));
        CHECK(d.gamma == doctest::Approx(1.0));
    }
    SUBCASE("dephasing") {
        for (double p : {0.01, 0.1, 0.3}) {
            auto d = invert_pauli_channel(Channel::dephasing(p, 0));
            std::map<std::string, double> alpha;
            for (const auto &op : d.basis) {
                alpha[op.label] = op.alpha;
            }
            CHECK(alpha["I"] == doctest::Approx((1 - p) / (1 - 2 * p)).epsilon(1e-12));
            CHECK(alpha["Z"] == doctest::Approx(-p / (1 - 2 * p)).epsilon(1e-12));
            CHECK(d.gamma == doctest::Approx(1 / (1 - 2 * p)).epsilon(1e-12));
            CHECK(decomposition_residual(d) < 1e-12);
        }
    }
    SUBCASE("two-qubit depolarizing") {
        auto d = invert_pauli_channel(Channel::depolarizing(0.2, {0, 1}));
        CHECK(decomposition_residual(d) < 1e-12);
    }
    SUBCASE("fully dephasing channel has no inverse") {
        CHECK_THROWS(invert_pauli_channel(Channel::dephasing(0.5, 0)));
    }
}

TEST_CASE("noisy gate rewrite") {
    Gate h = Gate::named("H", {0});
    CHECK(decompose_noisy_gate(h, z_error(0), 0.0).gamma == 1.0);
    double g = decompose_noisy_gate(h, z_error(0), 0.01).gamma;
    CHECK(g * g == doctest::Approx(1.0406).epsilon(5e-4));
    CHECK(g == doctest::Approx(1.01 / 0.99));
    g = decompose_noisy_gate(h, z_error(0), 0.5).gamma;
    CHECK(g * g == doctest::Approx(9.0));

    for (Basis b : {Basis::rewrite, Basis::inversion}) {
        CHECK(decomposition_residual(decompose_noisy_gate(h, z_error(0), 0.2, b)) < 1e-12);
        Gate cx = Gate::named("CNOT", {0, 1});
        auto d = decompose_noisy_gate(cx, Channel::depolarizing(1.0, {0, 1}), 0.1, b);
        CHECK(decomposition_residual(d) < 1e-12);
    }
    CHECK_THROWS(decompose_noisy_gate(h, Channel::amplitude_damping(0.1, 0), 0.1));
}

TEST_CASE("identity weight in the error is folded into the fault-free part") {
    Gate h = Gate::named("H", {0});
    // Depolarizing(1) on one qubit puts 1/4 of its weight on I.
    auto d = decompose_noisy_gate(h, Channel::depolarizing(1.0, {0}), 0.1);
    double pe = 0.1 * 0.75;
    CHECK(d.gamma == doctest::Approx((1 + pe) / (1 - pe)));
    CHECK(decomposition_residual(d) < 1e-12);
}

TEST_CASE("circuit overhead") {
    NoisyCircuit clean(1);
    clean.add(Gate::named("H", {0}));
    CHECK(circuit_overhead(clean) == 1.0);
    double c100 = circuit_overhead(chain(100, 0.01));
    CHECK(c100 == doctest::Approx(std::pow(1.01 / 0.99, 200)).epsilon(1e-12));
    CHECK(c100 == doctest::Approx(54.63).epsilon(1e-3));
    CHECK(std::abs(c100 - std::exp(4.0)) / std::exp(4.0) < 1e-3);
}

TEST_CASE("exact PEC removes the bias") {
    Observable o = Observable::from_labels({{1.0, "XX"}, {0.5, "ZX"}, {0.3, "IX"}});
    auto c = dephasing_circuit(0.05);
    double ideal = expectation(ideal_state(c), o);
    double noisy = expectation(run_circuit(c), o);
    CHECK(std::abs(noisy - ideal) > 0.01);
    PecConfig cfg;
    cfg.exact = true;
    for (Basis b : {Basis::rewrite, Basis::inversion}) {
        cfg.basis = b;
        auto r = pec_mitigate(c, o, cfg, RngStream(1));
        CHECK(std::abs(r.mean - ideal) < 1e-9);
        CHECK(*r.overhead == doctest::Approx(circuit_overhead(c, b)));
    }
    Matrix state = mitigated_state(c, cfg);
    CHECK((state - ideal_state(c).matrix()).norm() < 1e-10);

    NoisyCircuit clean(1);
    clean.add(Gate::named("H", {0}));
    auto r = pec_mitigate(clean, Observable(PauliString::from_label("X")), cfg, RngStream(1));
    CHECK(r.mean == doctest::Approx(1.0));
    CHECK(*r.overhead == 1.0);
}

TEST_CASE("enumeration cap") {
    PecConfig cfg;
    cfg.exact = true;
    cfg.max_patterns = 8;
    CHECK_THROWS_AS(pec_mitigate(chain(4, 0.1), Observable(PauliString::from_label("X")), cfg, RngStream(1)),
                    std::length_error);
}

TEST_CASE("sampled PEC is unbiased within shot noise") {
    Observable o(PauliString::from_label("XX"));
    auto c = dephasing_circuit(0.05);
    double ideal = expectation(ideal_state(c), o);
    PecConfig cfg;
    cfg.shots = 200000;
    auto r = pec_mitigate(c, o, cfg, RngStream(2024));
    double sigma = std::sqrt(r.variance / cfg.shots);
    CHECK(std::abs(r.mean - ideal) < 4 * sigma);
    auto again = pec_mitigate(c, o, cfg, RngStream(2024));
    CHECK(again.mean == r.mean);
}

TEST_CASE("partial PEC") {
    Observable x(PauliString::from_label("X"));
    auto c = chain(11, 0.02);
    double lambda = circuit_fault_rate(c);
    PecConfig cfg;
    cfg.exact = true;

    auto none = partial_pec(c, x, lambda, cfg, RngStream(1));
    CHECK(none.mean == doctest::Approx(expectation(run_circuit(c), x)).epsilon(1e-12));
    CHECK(*none.overhead == doctest::Approx(1.0));

    auto full = partial_pec(c, x, 0.0, cfg, RngStream(1));
    CHECK(full.mean == doctest::Approx(expectation(ideal_state(c), x)).epsilon(1e-10));

    // Half the fault rate left: the result is the circuit at half noise.
    auto half = partial_pec(c, x, lambda / 2, cfg, RngStream(1));
    Matrix oracle = chain_oracle(11, 0.02, 0.5);
    double expect_half = (oracle * gates::x()).trace().real();
    CHECK(half.mean == doctest::Approx(expect_half).epsilon(1e-10));

    CHECK_THROWS(partial_pec(c, x, 2 * lambda, cfg, RngStream(1)));
}

TEST_CASE("partial PEC overhead at unit fault rate") {
    auto c = chain(100, 0.01);
    double g = 1;
    for (const auto &loc : c.locations()) {
        g *= partial_decomposition(loc, 0.5).gamma;
    }
    CHECK(g * g == doctest::Approx(std::exp(2.0)).epsilon(0.02));
}
