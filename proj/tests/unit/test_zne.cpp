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
#include <stdexcept>
#include <utility>
#include <vector>

#include <doctest.h>

#include "qem/core/circuit.hpp"
#include "qem/core/random.hpp"
#include "qem/zne/zne.hpp"

using namespace qem;
using namespace qem::zne;

namespace {

// Lagrange weights at zero computed by solving the Vandermonde system
// sum_m c_m lambda_m^k = delta_k0 directly.
std::vector<double> vandermonde_weights(const std::vector<double> &nodes) {
    auto m = static_cast<Eigen::Index>(nodes.size());
    RealMatrix v(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index j = 0; j < m; ++j) {
            v(k, j) = std::pow(nodes[j], static_cast<double>(k));
        }
    }
    RealVector rhs = RealVector::Zero(m);
    rhs(0) = 1;
    RealVector c = v.fullPivLu().solve(rhs);
    return {c.data(), c.data() + m};
}

// One Z error location with Pauli fidelity 1 - 2p = e^{-0.2}, measured in X.
NoisyCircuit decaying_x() {
    NoisyCircuit c(1);
    double p = (1 - std::exp(-0.2)) / 2;
    c.add(Gate::named("H", {0}), Channel::pauli_error(PauliString::from_label("Z"), {0}), p);
    return c;
}

}  // namespace

TEST_CASE("richardson coefficients") {
    std::vector<double> n2{1, 2};
    auto c2 = richardson_coefficients(n2);
    CHECK(c2[0] == doctest::Approx(2.0));
    CHECK(c2[1] == doctest::Approx(-1.0));

    std::vector<double> n3{1, 2, 3};
    auto c3 = richardson_coefficients(n3);
    CHECK(c3[0] == doctest::Approx(3.0));
    CHECK(c3[1] == doctest::Approx(-3.0));
    CHECK(c3[2] == doctest::Approx(1.0));

    for (std::vector<double> nodes : {std::vector<double>{1, 1.5, 2.5, 4}, std::vector<double>{1, 3}}) {
        auto c = richardson_coefficients(nodes);
        auto oracle = vandermonde_weights(nodes);
        for (std::size_t m = 0; m < nodes.size(); ++m) {
            CHECK(c[m] == doctest::Approx(oracle[m]).epsilon(1e-12));
        }
        // Moments 1..M-1 vanish.
        for (std::size_t k = 1; k < nodes.size(); ++k) {
            double s = 0;
            for (std::size_t m = 0; m < nodes.size(); ++m) {
                s += c[m] * std::pow(nodes[m], double(k));
            }
            CHECK(std::abs(s) < 1e-10);
        }
    }

    std::vector<double> one{1};
    CHECK_THROWS(richardson_coefficients(one));
    CHECK(richardson_coefficients(one, true) == std::vector<double>{1.0});
    std::vector<double> dup{1, 1};
    CHECK_THROWS(richardson_coefficients(dup));
}

TEST_CASE("richardson overhead") {
    std::vector<double> n2{1, 2};
    std::vector<double> n3{1, 2, 3};
    std::vector<double> n13{1, 3};
    CHECK(richardson_overhead(n2) == doctest::Approx(9.0));
    CHECK(richardson_overhead(n3) == doctest::Approx(49.0));
    CHECK(richardson_overhead(n13) == doctest::Approx(4.0));
    for (int m = 2; m <= 6; ++m) {
        std::vector<double> nodes;
        for (int k = 1; k <= m; ++k) {
            nodes.push_back(k);
        }
        CHECK(richardson_overhead(nodes) == doctest::Approx(std::pow(std::pow(2.0, m) - 1, 2)).epsilon(1e-10));
    }
}

TEST_CASE("polynomial fit with full degree matches richardson") {
    std::vector<double> nodes{1, 2, 3, 4};
    auto p = polynomial_coefficients(nodes, 3);
    auto r = richardson_coefficients(nodes);
    for (std::size_t m = 0; m < nodes.size(); ++m) {
        CHECK(p[m] == doctest::Approx(r[m]).epsilon(1e-10));
    }
    // A linear least-squares fit reproduces linear data exactly.
    auto lin = polynomial_coefficients(nodes, 1);
    double est = 0;
    for (std::size_t m = 0; m < nodes.size(); ++m) {
        est += lin[m] * (0.4 - 0.1 * nodes[m]);
    }
    CHECK(est == doctest::Approx(0.4).epsilon(1e-12));
    CHECK_THROWS(polynomial_coefficients(nodes, 4));
}

TEST_CASE("exponential fit") {
    std::vector<std::pair<double, double>> pts;
    for (double l : {1.0, 2.0, 3.0}) {
        pts.emplace_back(l, 0.7 * std::exp(-l));
    }
    auto f = fit_exponential(pts);
    CHECK(std::abs(f.amplitude - 0.7) < 1e-10);
    CHECK(std::abs(f.rate - 1.0) < 1e-10);

    std::vector<std::pair<double, double>> flat{{1, 0.3}, {2, 0.3}, {3, 0.3}};
    f = fit_exponential(flat);
    CHECK(std::abs(f.rate) < 1e-12);
    CHECK(f.amplitude == doctest::Approx(0.3));

    std::vector<std::pair<double, double>> neg{{1, -0.5 * std::exp(-0.3)}, {2, -0.5 * std::exp(-0.6)}};
    CHECK(fit_exponential(neg).amplitude == doctest::Approx(-0.5).epsilon(1e-12));

    std::vector<std::pair<double, double>> mixed{{1, 0.3}, {2, -0.1}};
    CHECK_THROWS_AS(fit_exponential(mixed), std::domain_error);
}

TEST_CASE("zne on a circuit") {
    Observable x(PauliString::from_label("X"));
    RngStream stream(1);

    SUBCASE("noiseless circuit returns the ideal value for every model") {
        NoisyCircuit c(1);
        c.add(Gate::named("H", {0}));
        for (Model m : {Model::richardson, Model::polynomial, Model::exponential}) {
            ZneConfig cfg{{1, 2, 3}, m, 1};
            auto r = zne_mitigate(c, x, cfg, stream);
            CHECK(r.report.mean == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("richardson bias shrinks with order") {
        auto c = decaying_x();
        ZneConfig cfg{{1, 2}, Model::richardson};
        cfg.boost = BoostMode::exponential;
        auto r2 = zne_mitigate(c, x, cfg, stream);
        double oracle2 = 2 * std::exp(-0.2) - std::exp(-0.4);
        CHECK(r2.report.mean == doctest::Approx(oracle2).epsilon(1e-12));
        CHECK(r2.report.mean == doctest::Approx(0.96714).epsilon(1e-5));
        CHECK(*r2.report.bias == doctest::Approx(-0.0329).epsilon(0.01));

        cfg.nodes = {1, 2, 3};
        auto r3 = zne_mitigate(c, x, cfg, stream);
        double oracle3 = 3 * std::exp(-0.2) - 3 * std::exp(-0.4) + std::exp(-0.6);
        CHECK(r3.report.mean == doctest::Approx(oracle3).epsilon(1e-12));
        CHECK(std::abs(*r3.report.bias) < std::abs(*r2.report.bias));
        CHECK(*r3.report.overhead == doctest::Approx(49.0));
    }
    SUBCASE("exponential model is exact on exponential decay") {
        auto c = decaying_x();
        ZneConfig cfg{{1, 2, 3}, Model::exponential};
        cfg.boost = BoostMode::exponential;
        auto r = zne_mitigate(c, x, cfg, stream);
        CHECK(std::abs(*r.report.bias) <= 1e-10);
    }
    SUBCASE("sampled nodes") {
        auto c = decaying_x();
        ZneConfig cfg{{1, 2}, Model::richardson};
        cfg.boost = BoostMode::exponential;
        cfg.exact = false;
        cfg.shots_per_node = 50000;
        auto r = zne_mitigate(c, x, cfg, stream);
        REQUIRE(r.nodes.size() == 2);
        CHECK(r.nodes[1].shots == 50000);
        double sigma = std::sqrt(r.report.variance / 50000);
        double oracle = 2 * std::exp(-0.2) - std::exp(-0.4);
        CHECK(std::abs(r.report.mean - oracle) < 4 * sigma);
        auto again = zne_mitigate(c, x, cfg, stream);
        CHECK(again.report.mean == r.report.mean);
    }
    SUBCASE("invalid node sets") {
        NoisyCircuit c(1);
        ZneConfig bad{{2, 1}, Model::richardson};
        CHECK_THROWS(validate(bad));
        bad.nodes = {0.5, 1};
        CHECK_THROWS(validate(bad));
        bad.nodes = {1};
        CHECK_THROWS(validate(bad));
    }
}
