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

#include <doctest.h>

#include "qem/core/circuit.hpp"
#include "qem/core/density_matrix.hpp"
#include "qem/core/random.hpp"
#include "qem/stats/estimator.hpp"
#include "qem/symx/subspace.hpp"
#include "qem/symx/symmetry.hpp"

using namespace qem;
using namespace qem::symx;

namespace {

PauliString ps(const char *label) {
    return PauliString::from_label(label);
}

Observable obs(const char *label) {
    return Observable(ps(label));
}

// Bell pair whose CNOT is followed by `error` on qubit 0 with probability q.
NoisyCircuit bell_circuit(const char *error, double q) {
    NoisyCircuit c(2);
    c.add(Gate::named("H", {0}));
    c.add(Gate::named("CNOT", {0, 1}), Channel::pauli_error(ps(error), {0}), q);
    return c;
}

// 0.8 |Phi+><Phi+| + 0.2 |Psi+><Psi+| written out by hand.
Matrix bell_x_oracle() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(3, 3) = m(0, 3) = m(3, 0) = 0.4;
    m(1, 1) = m(2, 2) = m(1, 2) = m(2, 1) = 0.1;
    return m;
}

Matrix bell_ideal() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(3, 3) = m(0, 3) = m(3, 0) = 0.5;
    return m;
}

}  // namespace

TEST_CASE("projectors") {
    Matrix pz = projector(SymmetrySpec::single(ps("Z")));
    Matrix zero = Matrix::Zero(2, 2);
    zero(0, 0) = 1;
    CHECK((pz - zero).norm() < 1e-15);

    Matrix pzz = projector(SymmetrySpec::single(ps("ZZ")));
    Matrix oracle = Matrix::Zero(4, 4);
    oracle(0, 0) = oracle(3, 3) = 1;
    CHECK((pzz - oracle).norm() < 1e-15);
    CHECK((pzz * pzz - pzz).norm() < 1e-15);

    SymmetrySpec both{{ps("ZI"), ps("IZ")}, {1, 1}};
    Matrix p00 = Matrix::Zero(4, 4);
    p00(0, 0) = 1;
    CHECK((projector(both) - p00).norm() < 1e-15);
    CHECK((projector_terms(both).to_matrix() - p00).norm() < 1e-15);

    SymmetrySpec clash{{ps("XI"), ps("ZI")}, {1, 1}};
    CHECK_THROWS(clash.validate());
    SymmetrySpec bad_eig{{ps("ZZ")}, {2}};
    CHECK_THROWS(bad_eig.validate());

    auto proj = projected_observable(SymmetrySpec::single(ps("ZZ")), obs("XI"));
    CHECK((proj.to_matrix() - pzz * ps("XI").to_matrix() * pzz).norm() < 1e-14);
}

TEST_CASE("post-selection on the bell pair") {
    auto rho = run_circuit(bell_circuit("X", 0.2));
    REQUIRE((rho.matrix() - bell_x_oracle()).norm() < 1e-14);
    Matrix pi = projector(SymmetrySpec::single(ps("ZZ")));

    auto sel = postselect_state(rho, pi);
    CHECK(sel.pass_rate == doctest::Approx(0.8));
    CHECK((sel.state.matrix() - bell_ideal()).norm() < 1e-14);
    CHECK(sel.overhead == doctest::Approx(1.25));
    // Fidelity boost 1 / (1 - q).
    CHECK(fidelity_boost(sel.state.matrix(), rho.matrix(), bell_ideal()) == doctest::Approx(1.25));

    auto ideal = postselect_state(DensityMatrix::from_matrix(bell_ideal()), pi);
    CHECK(ideal.pass_rate == doctest::Approx(1.0));
    CHECK((ideal.state.matrix() - bell_ideal()).norm() < 1e-14);

    auto outside = DensityMatrix::basis_state(2, 1);
    CHECK_THROWS(postselect_state(outside, pi));
    CHECK_THROWS(sv_postprocess(outside, pi, obs("XX")));

    CHECK(expectation(rho, obs("XX")) == doctest::Approx(1.0));
    CHECK(expectation(rho, obs("YY")) == doctest::Approx(-0.6));
    auto vx = sv_postprocess(rho, pi, obs("XX"));
    auto vy = sv_postprocess(rho, pi, obs("YY"));
    CHECK(vx.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(vy.value == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(vy.pass_rate == doctest::Approx(0.8));
    CHECK(vy.overhead == doctest::Approx(1 / 0.64));
}

TEST_CASE("errors that commute with the symmetry are not caught") {
    auto rho = run_circuit(bell_circuit("Z", 0.2));
    Matrix pi = projector(SymmetrySpec::single(ps("ZZ")));
    double raw = expectation(rho, obs("XX"));
    CHECK(raw == doctest::Approx(0.6));
    auto v = sv_postprocess(rho, pi, obs("XX"));
    CHECK(v.pass_rate == doctest::Approx(1.0));
    CHECK(v.value == doctest::Approx(raw).epsilon(1e-14));
}

TEST_CASE("shot-level symmetry verification") {
    auto sym = SymmetrySpec::single(ps("ZZ"));
    RngStream stream(77);
    SUBCASE("noiseless circuit keeps every shot") {
        auto r = sv_shot_mitigate(bell_circuit("X", 0.0), sym, obs("ZZ"), 2000, SvMode::direct, stream);
        CHECK(r.retained_fraction == 1.0);
        CHECK(r.report.mean == 1.0);
    }
    SUBCASE("bell pair with X errors") {
        const std::size_t n = 100000;
        auto r = sv_shot_mitigate(bell_circuit("X", 0.2), sym, obs("ZZ"), n, SvMode::direct, stream);
        CHECK(std::abs(r.retained_fraction - 0.8) < 0.005);
        CHECK(r.report.mean == doctest::Approx(1.0));
        auto pp = sv_shot_mitigate(bell_circuit("X", 0.2), sym, obs("XX"), n, SvMode::postprocess, stream);
        double sigma = std::sqrt(pp.report.variance / n);
        CHECK(std::abs(pp.report.mean - 1.0) < 4 * sigma + 1e-12);
        auto yy = sv_shot_mitigate(bell_circuit("X", 0.2), sym, obs("YY"), n, SvMode::postprocess, stream);
        sigma = std::sqrt(yy.report.variance / n);
        CHECK(std::abs(yy.report.mean + 1.0) < 4 * sigma + 1e-12);
    }
    SUBCASE("direct mode refuses observables it cannot read with the symmetry") {
        CHECK_THROWS(sv_shot_mitigate(bell_circuit("X", 0.2), sym, obs("XX"), 1000, SvMode::direct, stream));
    }
}

TEST_CASE("subspace matrices") {
    auto zero = DensityMatrix::basis_state(1, 0);
    auto h = Observable::from_labels({{0.3, "Z"}, {0.5, "X"}});
    auto m = build_subspace_matrices(zero, h, ExpansionBasis::from_paulis({PauliString(1)}, false));
    CHECK(m.hbar(0, 0).real() == doctest::Approx(0.3));
    CHECK(m.sbar(0, 0).real() == doctest::Approx(1.0));

    auto rho = DensityMatrix::from_matrix(bell_x_oracle());
    auto basis = ExpansionBasis::from_paulis({ps("ZZ")});
    auto bm = build_subspace_matrices(rho, Observable(ps("XX"), -1.0), basis);
    // Hand values: S = [[1, <ZZ>], [<ZZ>, 1]], H = -S since XX ZZ = -YY.
    Matrix s(2, 2);
    s << 1.0, 0.6, 0.6, 1.0;
    CHECK((bm.sbar - s).norm() < 1e-14);
    CHECK((bm.hbar + s).norm() < 1e-14);

    auto mixed = DensityMatrix::maximally_mixed(2);
    auto full = ExpansionBasis::from_paulis({ps("XI"), ps("IZ"), ps("YY")});
    auto mm = build_subspace_matrices(mixed, Observable(ps("ZZ")), full);
    CHECK((mm.sbar - Matrix::Identity(4, 4)).norm() < 1e-14);

    CHECK_THROWS(ExpansionBasis::from_paulis({ps("ZZ"), ps("ZZ")}));
}

TEST_CASE("generalized eigenproblem") {
    Matrix s = Matrix::Identity(2, 2);
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = 2;
    h(1, 1) = 1;
    auto sol = solve_gevp(h, s);
    CHECK(sol.energies(0) == doctest::Approx(1.0));
    CHECK(std::abs(sol.weights(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(sol.weights(0, 0)) < 1e-14);

    // Second direction has zero overlap and is projected out.
    Matrix sd = Matrix::Zero(2, 2);
    sd(0, 0) = 1;
    Matrix hd = Matrix::Zero(2, 2);
    hd(0, 0) = 0.7;
    auto red = solve_gevp(hd, sd);
    CHECK(red.retained == 1);
    CHECK(red.energies.size() == 1);
    CHECK(red.energies(0) == doctest::Approx(0.7));

    auto rho = DensityMatrix::from_matrix(bell_x_oracle());
    auto r = subspace_expand(rho, Observable(ps("XX"), -1.0), ExpansionBasis::from_paulis({ps("ZZ")}));
    CHECK(r.energy == doctest::Approx(-1.0));
}

TEST_CASE("expanded states") {
    auto rho = DensityMatrix::from_matrix(bell_x_oracle());
    auto id_only = ExpansionBasis::from_paulis({PauliString(2)}, false);
    Vector w = Vector::Ones(1);
    CHECK(expanded_expectation(rho, obs("YY"), id_only, w) == doctest::Approx(-0.6));

    // Weights (1, 1)/2 make Gamma the ZZ projector.
    auto basis = ExpansionBasis::from_paulis({ps("ZZ")});
    Vector half = Vector::Constant(2, 0.5);
    Matrix pi = projector(SymmetrySpec::single(ps("ZZ")));
    for (const char *label : {"XX", "YY", "XY", "ZI"}) {
        double sv = sv_postprocess(rho, pi, obs(label)).value;
        CHECK(std::abs(expanded_expectation(rho, obs(label), basis, half) - sv) < 1e-12);
    }
    auto st = expanded_state(rho, basis, half);
    CHECK((st.matrix() - bell_ideal()).norm() < 1e-14);

    // Weight almost entirely on I stays close to the raw value.
    Vector near(2);
    near << 1.0, 1e-6;
    CHECK(expanded_expectation(rho, obs("YY"), basis, near) == doctest::Approx(-0.6).epsilon(1e-5));
}
