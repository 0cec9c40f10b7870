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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are fixed here and never adjusted to make a run pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "qem/core/circuit.hpp"
#include "qem/core/density_matrix.hpp"
#include "qem/core/gates.hpp"
#include "qem/core/random.hpp"
#include "qem/core/sampling.hpp"
#include "qem/learn/learn.hpp"
#include "qem/pec/pec.hpp"
#include "qem/purify/purify.hpp"
#include "qem/readout/readout.hpp"
#include "qem/stats/estimator.hpp"
#include "qem/symx/subspace.hpp"
#include "qem/symx/symmetry.hpp"
#include "qem/zne/zne.hpp"

using namespace qem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// A mitigated state together with what it was meant to reproduce. Collected
// along the way and checked against the bias-fidelity bound at the end.
struct MitigatedRun {
    std::string name;
    Matrix rho_em;
    Matrix rho0;
    Observable obs;
};

std::vector<MitigatedRun> g_runs;

void record_run(std::string name, const Matrix &rho_em, const Matrix &rho0, const Observable &obs) {
    g_runs.push_back({std::move(name), rho_em, rho0, obs});
}

Observable obs(const char *label) {
    return Observable(PauliString::from_label(label));
}

PauliString ps(const char *label) {
    return PauliString::from_label(label);
}

NoisyCircuit bell_circuit(const char *error, double q) {
    NoisyCircuit c(2);
    c.add(Gate::named("H", {0}));
    c.add(Gate::named("CNOT", {0, 1}), Channel::pauli_error(ps(error), {0}), q);
    return c;
}

// ---------------------------------------------------------------------------

Outcome pec_unbiased() {
    const double p = 0.05;
    auto z = [](int q) { return Channel::pauli_error(ps("Z"), {q}); };
    NoisyCircuit c(2);
    c.add(Gate::named("RY", {0}, {0.7}), z(0), p);
    c.add(Gate::named("H", {1}), z(1), p);
    c.add(Gate::named("CNOT", {0, 1}), z(0), p);
    c.add(Gate::named("RX", {1}, {0.3}), z(1), p);
    c.add(Gate::named("H", {0}), z(0), p);
    auto o = Observable::from_labels({{1.0, "XX"}, {0.5, "ZX"}, {0.3, "IX"}});

    auto ideal_rho = ideal_state(c);
    double ideal = expectation(ideal_rho, o);
    auto noisy_rho = run_circuit(c);
    double raw_bias = expectation(noisy_rho, o) - ideal;
    pec::PecConfig cfg;
    cfg.exact = true;
    auto r = pec::pec_mitigate(c, o, cfg, RngStream(1));
    double err = std::abs(r.mean - ideal);

    record_run("raw (dephasing circuit)", noisy_rho.matrix(), ideal_rho.matrix(), o);
    record_run("pec exact", pec::mitigated_state(c, cfg), ideal_rho.matrix(), o);
    return {err <= 1e-9 && std::abs(raw_bias) >= 0.01,
            fmt::format("|mitigated - ideal| = {:.2e} (<= 1e-9), |raw bias| = {:.4f} (>= 0.01)", err,
                        std::abs(raw_bias))};
}

Outcome pec_overhead_law() {
    const int gates = 100;
    const double p = 0.01;
    NoisyCircuit c(1);
    for (int i = 0; i < gates; ++i) {
        c.add(Gate::named("H", {0}), Channel::pauli_error(ps("Z"), {0}), p);
    }
    auto x = obs("X");
    const std::size_t shots = 1000000;
    RngStream stream(20240601);

    pec::PecConfig cfg;
    cfg.shots = shots;
    auto mitigated = pec::pec_mitigate(c, x, cfg, stream.substream(1));

    auto noisy = run_circuit(c);
    std::vector<double> raw(shots);
    auto raw_stream = stream.substream(0);
    for (std::size_t i = 0; i < shots; ++i) {
        auto rng = raw_stream.shot(i);
        raw[i] = sample_shot(noisy, x, rng);
    }
    double var_raw = summarize(raw).variance;
    double ratio = sampling_overhead(mitigated.variance, var_raw);
    double closed = pec::circuit_overhead(c);
    double e4 = std::exp(4.0);
    double rel_measured = std::abs(ratio - e4) / e4;
    double rel_closed = std::abs(closed - e4) / e4;
    return {rel_measured <= 0.10 && rel_closed <= 1e-3,
            fmt::format("measured ratio {:.3f} ({:.2f}% from e^4 = {:.3f}, <= 10%), closed form {:.4f} ({:.3f}%, "
                        "<= 0.1%)",
                        ratio, 100 * rel_measured, e4, closed, 100 * rel_closed)};
}

Outcome richardson() {
    bool ok = true;
    double worst = 0;
    for (int m = 2; m <= 6; ++m) {
        std::vector<double> nodes;
        for (int k = 1; k <= m; ++k) {
            nodes.push_back(k);
        }
        double expect = std::pow(std::pow(2.0, m) - 1, 2);
        double rel = std::abs(zne::richardson_overhead(nodes) - expect) / expect;
        worst = std::max(worst, rel);
        ok = ok && rel <= 1e-12;
    }
    std::string detail = fmt::format("equal-gap overhead max rel err {:.1e}; bias", worst);
    const double l1 = 0.1;
    double prev = INFINITY;
    for (int m = 2; m <= 4; ++m) {
        zne::ZneConfig cfg;
        std::vector<zne::NodeResult> data;
        for (int k = 1; k <= m; ++k) {
            double l = l1 * k;
            cfg.nodes.push_back(l);
            data.push_back({l, std::exp(-l), 0, 0});
        }
        double bias = std::abs(zne::extrapolate(cfg, data).first - 1.0);
        ok = ok && bias < prev && bias <= 1.5 * std::pow(l1, m);
        detail += fmt::format(" M={}: {:.3e} (<= {:.1e})", m, bias, 1.5 * std::pow(l1, m));
        prev = bias;
    }
    return {ok, detail};
}

NoisyCircuit global_depolarizing_circuit() {
    NoisyCircuit c(3);
    auto dep = Channel::depolarizing(1.0, {0, 1, 2});
    c.add(Gate::named("RY", {0}, {0.9}), dep, 0.04);
    c.add(Gate::named("T", {1}), dep, 0.02);
    c.add(Gate::named("CNOT", {0, 1}), dep, 0.06);
    c.add(Gate::named("H", {2}), dep, 0.03);
    c.add(Gate::named("RX", {1}, {1.1}), dep, 0.05);
    c.add(Gate::named("CZ", {1, 2}), dep, 0.06);
    return c;
}

Outcome exponential_zne() {
    auto c = global_depolarizing_circuit();
    zne::ZneConfig cfg;
    cfg.nodes = {1, 2, 3};
    cfg.model = zne::Model::exponential;
    cfg.boost = BoostMode::exponential;
    double worst = 0;
    // Observables with a nonzero ideal value; a single exponential cannot
    // describe data that is identically zero.
    for (const char *label : {"ZZI", "XYY", "IYZ", "YIX"}) {
        auto r = zne::zne_mitigate(c, obs(label), cfg, RngStream(4));
        worst = std::max(worst, std::abs(*r.report.bias));
    }
    return {worst <= 1e-10, fmt::format("max |bias| over 4 observables {:.2e} (<= 1e-10)", worst)};
}

Outcome readout_round_trip() {
    Rng rng(555);
    std::uniform_real_distribution<> u(0.01, 0.12);
    std::gamma_distribution<> g(2.0);
    double worst_inv = 0;
    double worst_ibu = 0;
    double min_ibu = 1;
    double worst_sum = 0;
    for (int n = 1; n <= 4; ++n) {
        std::vector<Channel> ch;
        for (int q = 0; q < n; ++q) {
            ch.push_back(Channel::bit_flip(u(rng), q));
            ch.push_back(Channel::amplitude_damping(u(rng), q));
        }
        if (n >= 2) {
            ch.push_back(Channel::from_pauli({{PauliString(2), 0.95}, {ps("XX"), 0.05}}, {0, n - 1}));
        }
        auto a = readout::calibrate(ch, n, readout::AssignmentMatrix::Form::full);
        for (int trial = 0; trial < 5; ++trial) {
            RealVector p(Eigen::Index{1} << n);
            for (auto &v : p) {
                v = g(rng);
            }
            p /= p.sum();
            readout::ReadoutDistribution truth{p, false};
            auto noisy = readout::forward(a, truth);
            auto back = readout::invert(a, noisy);
            worst_inv = std::max(worst_inv, (back.probs - p).cwiseAbs().maxCoeff());
            auto unfolded = readout::ibu(a, noisy, 100000, 1e-15);
            worst_ibu = std::max(worst_ibu, (unfolded.dist.probs - p).cwiseAbs().maxCoeff());
            min_ibu = std::min(min_ibu, unfolded.dist.probs.minCoeff());
            worst_sum = std::max(worst_sum, std::abs(unfolded.dist.probs.sum() - 1));
        }
    }
    bool ok = worst_inv <= 1e-10 && worst_ibu <= 1e-6 && min_ibu >= 0 && worst_sum <= 1e-12;
    return {ok, fmt::format("inversion max err {:.1e} (<= 1e-10), IBU max err {:.1e} (<= 1e-6), IBU min entry "
                            "{:.3g}, |sum - 1| {:.1e}",
                            worst_inv, worst_ibu, min_ibu, worst_sum)};
}

Outcome symmetry_verification() {
    auto sym = symx::SymmetrySpec::single(ps("ZZ"));
    Matrix pi = symx::projector(sym);
    auto c = bell_circuit("X", 0.2);
    auto rho = run_circuit(c);
    auto ideal = ideal_state(c);
    double xx = symx::sv_postprocess(rho, pi, obs("XX")).value;
    double yy = symx::sv_postprocess(rho, pi, obs("YY")).value;
    bool exact_ok = std::abs(xx - 1.0) <= 1e-12 && std::abs(yy + 1.0) <= 1e-12;
    auto sel = symx::postselect_state(rho, pi);
    record_run("raw (bell, X error)", rho.matrix(), ideal.matrix(), obs("YY"));
    record_run("symmetry post-selection", sel.state.matrix(), ideal.matrix(), obs("YY"));

    auto shots = symx::sv_shot_mitigate(c, sym, obs("ZZ"), 100000, symx::SvMode::direct, RngStream(99));
    bool rate_ok = std::abs(shots.retained_fraction - 0.8) <= 0.005;

    auto cz = bell_circuit("Z", 0.2);
    auto rz = run_circuit(cz);
    double raw = expectation(rz, obs("XX"));
    auto v = symx::sv_postprocess(rz, pi, obs("XX"));
    bool immune = std::abs(v.value - raw) <= 1e-12 && std::abs(v.pass_rate - 1.0) <= 1e-12;
    return {exact_ok && rate_ok && immune,
            fmt::format("exact <XX> = {:.12f}, <YY> = {:.12f}; shot pass rate {:.4f} (0.8 +- 0.005); commuting "
                        "error: raw {:.4f} -> verified {:.4f}, pass rate {:.4f}",
                        xx, yy, shots.retained_fraction, raw, v.value, v.pass_rate)};
}

DensityMatrix random_state(int n, Rng &rng) {
    std::normal_distribution<> g;
    Eigen::Index d = Eigen::Index{1} << n;
    Matrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            a(i, j) = cplx(g(rng), g(rng));
        }
    }
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix::from_matrix(rho, 1e-9);
}

Observable random_observable(int n, Rng &rng) {
    std::uniform_int_distribution<int> pick(0, 3);
    std::normal_distribution<> g;
    std::vector<PauliTerm> terms;
    for (int t = 0; t < 3; ++t) {
        std::string label;
        for (int q = 0; q < n; ++q) {
            label += "IXYZ"[pick(rng)];
        }
        terms.push_back({g(rng), ps(label.c_str())});
    }
    return Observable(n, terms);
}

Outcome vd_equivalence() {
    Rng rng(8080);
    std::uniform_int_distribution<int> nq(1, 3);
    std::uniform_int_distribution<int> mm(1, 3);
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        int n = nq(rng);
        int m = mm(rng);
        auto rho = random_state(n, rng);
        auto o = random_observable(n, rng);
        auto vd = purify::vd_expectation(rho, o, m);
        double numerator = vd.value * vd.trace_rhoM;
        worst = std::max(worst, std::abs(numerator - purify::vd_swap_check(rho, o, m)));
    }

    // Depolarized states whose dominant eigenvector is coherently misaligned
    // with the ideal one: the error must fall monotonically in M and stay
    // within 2 ||O|| (d - 1) (p2 / p1)^M of the dominant eigenvector's value.
    bool monotone = true;
    bool bounded = true;
    double worst_ratio = 0;
    for (int i = 0; i < 10; ++i) {
        int n = 1 + i % 3;
        NoisyCircuit c(n);
        std::vector<int> all(n);
        for (int q = 0; q < n; ++q) {
            all[q] = q;
        }
        c.add(Gate::named("RY", {0}, {0.4 + 0.1 * i}), Channel::depolarizing(1.0, all), 0.1 + 0.03 * i);
        if (n > 1) {
            c.add(Gate::named("CNOT", {0, n - 1}));
        }
        c.add(Gate::named("RX", {0}, {0.05 * (i + 1)}));  // coherent over-rotation after the noise
        auto rho = run_circuit(c);
        auto o = random_observable(n, rng);
        auto eig = purify::dominant_eigen(rho);
        double target = purify::dominant_value(rho, o);
        double prefactor = 2 * o.spectral_norm() * (std::pow(2.0, n) - 1);
        double prev = INFINITY;
        for (int m = 1; m <= 12; ++m) {
            auto vd = purify::vd_expectation(rho, o, m);
            double gap = std::abs(vd.value - target);
            double bound = prefactor * std::pow(eig.p2 / eig.p1, m);
            monotone = monotone && gap <= prev + 1e-14;
            bounded = bounded && gap <= bound + 1e-14;
            if (bound > 1e-8) {
                worst_ratio = std::max(worst_ratio, gap / bound);
            }
            prev = gap;
            if (m == 2 || m == 6) {
                Matrix rm = rho.matrix();
                Matrix pm = rm;
                for (int k = 1; k < m; ++k) {
                    pm = pm * rm;
                }
                record_run(fmt::format("vd M={} (instance {})", m, i), pm / pm.trace().real(),
                           ideal_state(c).matrix(), o);
            }
        }
    }
    return {worst <= 1e-10 && monotone && bounded,
            fmt::format("50 instances max |diff| {:.1e} (<= 1e-10); convergence monotone: {}, within "
                        "2||O||(d-1)(p2/p1)^M: {} (max gap/bound {:.3f})",
                        worst, monotone ? "yes" : "no", bounded ? "yes" : "no", worst_ratio)};
}

Outcome table_floors() {
    const int n = 6;
    NoisyCircuit ghz(n);
    ghz.add(Gate::named("H", {0}));
    for (int q = 1; q < n; ++q) {
        ghz.add(Gate::named("CNOT", {q - 1, q}));
    }
    auto rho0 = ideal_state(ghz);
    Observable o = obs("ZZIIII");
    bool ok = true;
    std::string detail;
    for (double lambda : {0.5, 1.0}) {
        auto rho = purify::global_depolarized(rho0, lambda);
        for (int m : {2, 3}) {
            double measured = purify::vd_expectation(rho, o, m).overhead;
            double floor = purify::vd_overhead_floor(lambda, m);
            ok = ok && measured >= floor * 0.99;
            detail += fmt::format("VD l={} M={}: {:.3f} >= {:.3f}; ", lambda, m, measured, floor);
        }
        auto ev = purify::echo_verification(rho, o);
        double floor = purify::ev_overhead_floor(lambda);
        ok = ok && ev.overhead >= floor * 0.99;
        detail += fmt::format("EV l={}: {:.3f} >= {:.3f}; ", lambda, ev.overhead, floor);
        Matrix r2 = rho.matrix() * rho.matrix();
        record_run(fmt::format("echo verification (lambda {})", lambda), r2 / r2.trace().real(), rho0.matrix(), o);
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

Outcome postselection_numbers() {
    // 1 / P0 for a long circuit of weak faults, against e^lambda.
    auto overhead_of = [](double lambda) {
        const int locations = 100000;
        NoisyCircuit c(1);
        for (int i = 0; i < locations; ++i) {
            c.add(Gate::named("I", {0}), Channel::depolarizing(1.0, {0}), lambda / locations);
        }
        return 1.0 / fault_free_probability(c);
    };
    double e5 = std::exp(5.0);
    double e9 = std::exp(9.0);
    double c5 = overhead_of(5.0);
    double c9 = overhead_of(9.0);
    bool ok = std::abs(e5 - 148.4) < 0.05 && std::abs(e9 - 8.1e3) / 8.1e3 < 0.005 &&
              std::abs(c5 - e5) / e5 < 0.01 && std::abs(c9 - e9) / e9 < 0.01 &&
              std::round(e5 / 10) * 10 == 150 && std::round(std::log10(e9)) == 4;
    return {ok, fmt::format("e^5 = {:.1f} (~150), e^9 = {:.4g} (~1e4); circuit 1/P0: {:.1f}, {:.4g}", e5, e9, c5,
                            c9)};
}

Outcome subspace_connection() {
    auto c = bell_circuit("X", 0.2);
    auto rho = run_circuit(c);
    auto h = Observable::from_labels({{-1.0, "XX"}, {1.0, "YY"}, {-1.0, "ZZ"}});
    auto basis = symx::ExpansionBasis::from_paulis({ps("ZZ")});
    auto r = symx::subspace_expand(rho, h, basis);
    Matrix pi = symx::projector(symx::SymmetrySpec::single(ps("ZZ")));
    double worst = 0;
    for (const char *label : {"XX", "YY", "ZZ", "XY", "ZI", "IX"}) {
        double a = symx::expanded_expectation(rho, obs(label), basis, r.weights);
        double b = symx::sv_postprocess(rho, pi, obs(label)).value;
        worst = std::max(worst, std::abs(a - b));
    }
    record_run("subspace expansion", symx::expanded_state(rho, basis, r.weights).matrix(), ideal_state(c).matrix(),
               h);
    return {worst <= 1e-10, fmt::format("ground energy {:.12f}; max |expanded - verified| over 6 observables {:.1e} "
                                        "(<= 1e-10)",
                                        r.energy, worst)};
}

Outcome clifford_transfer() {
    auto c = global_depolarizing_circuit();
    double worst = 0;
    for (const char *label : {"ZZI", "XYY", "IYZ"}) {
        auto r = learn::learn_mitigate(c, obs(label), learn::LearnConfig{}, RngStream(12));
        worst = std::max(worst, std::abs(*r.report.bias));
    }
    return {worst <= 1e-9, fmt::format("max |bias| over 3 observables {:.2e} (<= 1e-9)", worst)};
}

Outcome bias_fidelity() {
    bool ok = true;
    double tightest = 0;
    std::string worst_name = "none";
    for (const auto &run : g_runs) {
        double bias = expectation(run.rho_em, run.obs) - expectation(run.rho0, run.obs);
        double f = fidelity_with_pure(run.rho0, run.rho_em);
        double bound = bias_fidelity_bound(run.obs.spectral_norm(), std::min(f, 1.0)) + 1e-9;
        double used = std::abs(bias) / bound;
        if (used > tightest) {
            tightest = used;
            worst_name = run.name;
        }
        ok = ok && std::abs(bias) <= bound;
    }
    return {ok, fmt::format("{} runs, largest |bias| / bound = {:.3f} ({})", g_runs.size(), tightest, worst_name)};
}

Outcome mcweeny() {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 0.9;
    d(1, 1) = 0.1;
    auto r = purify::mcweeny(d);
    Matrix target = Matrix::Zero(2, 2);
    target(0, 0) = 1;
    double err = (r.d - target).cwiseAbs().maxCoeff();
    auto half = purify::mcweeny(Matrix::Identity(2, 2) * 0.5);
    bool ok = r.converged && err <= 1e-10 && r.iterations <= 30 && !half.converged;
    return {ok, fmt::format("diag(0.9, 0.1): max err {:.1e} after {} iterations (<= 30); diag(0.5, 0.5) flagged: {}",
                            err, r.iterations, half.converged ? "no" : "yes")};
}

}  // namespace

int main() {
    struct Criterion {
        const char *name;
        Outcome (*run)();
    };
    // Criterion 12 reads the runs recorded by the others, so it goes last.
    const Criterion criteria[] = {
        {"PEC unbiasedness", pec_unbiased},
        {"PEC overhead law", pec_overhead_law},
        {"Richardson", richardson},
        {"Exponential ZNE exactness", exponential_zne},
        {"Readout round trip", readout_round_trip},
        {"Symmetry verification", symmetry_verification},
        {"VD oracle equivalence", vd_equivalence},
        {"Purification overhead floors", table_floors},
        {"Post-selection intuition numbers", postselection_numbers},
        {"Subspace/symmetry connection", subspace_connection},
        {"Clifford-training transfer", clifford_transfer},
        {"Bias-fidelity bound", bias_fidelity},
        {"McWeeny", mcweeny},
    };
    int failures = 0;
    int index = 0;
    for (const auto &c : criteria) {
        ++index;
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += o.pass ? 0 : 1;
        fmt::print("{} {:2d} {}: {} [{:.1f}s]\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail, secs);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
