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
#include <numbers>
#include <set>
#include <string>

#include <doctest.h>

#include "qem/core/circuit.hpp"
#include "qem/core/gates.hpp"
#include "qem/core/random.hpp"
#include "qem/learn/learn.hpp"

using namespace qem;
using namespace qem::learn;

namespace {

Observable obs(const char *label) {
    return Observable(PauliString::from_label(label));
}

// Every location ends in a fully depolarizing error on both qubits, so the
// output is P0 rho0 + (1 - P0) I / 4.
NoisyCircuit global_depolarizing_circuit() {
    NoisyCircuit c(2);
    auto dep = Channel::depolarizing(1.0, {0, 1});
    c.add(Gate::named("RY", {0}, {0.7}), dep, 0.05);
    c.add(Gate::named("T", {1}), dep, 0.03);
    c.add(Gate::named("CNOT", {0, 1}), dep, 0.08);
    c.add(Gate::named("RX", {1}, {1.2}), dep, 0.04);
    return c;
}

}  // namespace

TEST_CASE("clifford variants") {
    Rng rng(1);
    SUBCASE("circuits without single-qubit gates are unchanged") {
        NoisyCircuit c(2);
        c.add(Gate::named("CNOT", {0, 1}), Channel::depolarizing(1.0, {0, 1}), 0.1);
        for (const auto &v : make_clifford_variants(c, 5, rng)) {
            REQUIRE(v.size() == 1);
            CHECK((v.locations()[0].gate.unitary - c.locations()[0].gate.unitary).norm() == 0);
        }
    }
    SUBCASE("exhaustive enumeration of one gate gives the whole group") {
        NoisyCircuit c(1);
        c.add(Gate::named("T", {0}), Channel::depolarizing(1.0, {0}), 0.1);
        auto vs = exhaustive_clifford_variants(c);
        CHECK(vs.size() == 24);
        std::set<std::string> names;
        for (const auto &v : vs) {
            CHECK(gates::is_clifford(v.locations()[0].gate.unitary));
            names.insert(v.locations()[0].gate.name);
        }
        CHECK(names.size() == 24);
    }
    SUBCASE("noise is untouched") {
        auto c = global_depolarizing_circuit();
        for (const auto &v : make_clifford_variants(c, 4, rng)) {
            CHECK(circuit_fault_rate(v) == circuit_fault_rate(c));
            for (std::size_t i = 0; i < v.size(); ++i) {
                CHECK(v.locations()[i].p_fault == c.locations()[i].p_fault);
            }
        }
    }
    SUBCASE("non-clifford entanglers are rejected") {
        NoisyCircuit c(2);
        Matrix ct = Matrix::Identity(4, 4);
        ct(3, 3) = std::exp(cplx(0, std::numbers::pi / 4));
        c.add(Gate("CT", ct, {0, 1}));
        CHECK_THROWS(make_clifford_variants(c, 2, rng));
    }
}

TEST_CASE("rescale-and-shift fit") {
    TrainingSet line;
    for (double e : {-0.7, -0.2, 0.1, 0.4}) {
        line.pairs.push_back({2 * e + 0.1, e, ""});
    }
    auto fit = fit_rescale_shift(line);
    CHECK(std::abs(fit.theta0 - 0.1) < 1e-12);
    CHECK(std::abs(fit.theta1 - 2.0) < 1e-12);

    TrainingSet flat;
    flat.pairs = {{0.5, 0.3, ""}, {-0.5, 0.3, ""}};
    CHECK_THROWS(fit_rescale_shift(flat));
    TrainingSet single;
    single.pairs = {{0.5, 0.3, ""}};
    CHECK_THROWS(fit_rescale_shift(single));
}

TEST_CASE("training on a globally depolarized circuit") {
    auto c = global_depolarizing_circuit();
    double p0 = fault_free_probability(c);
    Rng rng(4);
    auto ts = build_training_set(make_clifford_variants(c, 12, rng), obs("ZZ"));
    auto fit = fit_rescale_shift(ts);
    CHECK(std::abs(fit.theta0) < 1e-12);
    CHECK(fit.theta1 == doctest::Approx(1 / p0).epsilon(1e-12));

    auto trimmed = build_training_set(make_clifford_variants(c, 12, rng), obs("ZZ"), 3);
    CHECK(trimmed.pairs.size() == 3);
}

TEST_CASE("depolarizing rescale") {
    CHECK(depolarizing_rescale(1.0, obs("Z"), 0.37) == doctest::Approx(0.37));
    CHECK(depolarizing_rescale(0.9, obs("Z"), 0.45) == doctest::Approx(0.5));
    Observable id(PauliString(2));
    for (double p0 : {0.2, 0.6, 1.0}) {
        CHECK(depolarizing_rescale(p0, id, 1.0) == doctest::Approx(1.0));
    }
    CHECK_THROWS(depolarizing_rescale(0.0, obs("Z"), 0.1));
}

TEST_CASE("purity and the fault-free probability") {
    using PC = PurityConvention;
    CHECK(purity_estimate_P0(1.0, 2) == doctest::Approx(1.0));
    CHECK(purity_from_P0(0.9, 2, PC::as_published) == doctest::Approx(0.855625).epsilon(1e-14));
    CHECK(purity_estimate_P0(0.855625, 2, PC::as_published) == doctest::Approx(0.9).epsilon(1e-12));

    // Exact mixture purity against a density-matrix oracle.
    for (int n : {1, 2, 3}) {
        double d = std::pow(2.0, n);
        for (double p0 : {0.0, 0.35, 0.9}) {
            double oracle = p0 * p0 + 2 * p0 * (1 - p0) / d + (1 - p0) * (1 - p0) / d;
            double purity = purity_from_P0(p0, n);
            CHECK(purity == doctest::Approx(oracle).epsilon(1e-14));
            CHECK(std::abs(purity_estimate_P0(purity, n) - p0) < 1e-10);
        }
        CHECK(std::abs(purity_estimate_P0(1 / d, n)) < 1e-12);
        CHECK_THROWS(purity_estimate_P0(0.5 / d, n));
    }
}

TEST_CASE("learned mitigation end to end") {
    auto c = global_depolarizing_circuit();
    for (const char *label : {"ZZ", "XI", "YZ"}) {
        auto r = learn_mitigate(c, obs(label), LearnConfig{}, RngStream(3));
        CHECK(std::abs(*r.report.bias) < 1e-9);
        CHECK(*r.report.overhead == doctest::Approx(r.fit.theta1 * r.fit.theta1));
    }
    LearnConfig sampled;
    sampled.exact = false;
    sampled.shots = 20000;
    sampled.train_count = 8;
    auto r = learn_mitigate(c, obs("ZZ"), sampled, RngStream(3));
    CHECK(r.report.n_shots == 20000);
    CHECK(std::abs(*r.report.bias) < 0.1);
}
