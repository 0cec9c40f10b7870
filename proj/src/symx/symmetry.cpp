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

#include "qem/symx/symmetry.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include "qem/core/parallel.hpp"
#include "qem/core/sampling.hpp"
#include "qem/stats/quasi_mix.hpp"

namespace qem::symx {

namespace {

using PauliSum = std::map<std::pair<std::uint64_t, std::uint64_t>, cplx>;

void accumulate(PauliSum &sum, cplx coeff, const PauliString &p) {
    sum[{p.x_mask(), p.z_mask()}] += coeff * p.phase_factor();
}

Observable to_observable(int n, const PauliSum &sum) {
    std::vector<PauliTerm> terms;
    for (const auto &[key, c] : sum) {
        if (std::abs(c) < 1e-14) {
            continue;
        }
        if (std::abs(c.imag()) > 1e-12) {
            throw std::logic_error("Pauli expansion of a Hermitian operator has a complex coefficient");
        }
        terms.push_back({c.real(), PauliString(n, key.first, key.second)});
    }
    if (terms.empty()) {
        terms.push_back({0.0, PauliString(n)});
    }
    return Observable(n, std::move(terms));
}

// (coefficient, Pauli) pairs of the projector, before merging.
std::vector<std::pair<double, PauliString>> projector_expansion(const SymmetrySpec &sym) {
    sym.validate();
    const int n = sym.n_qubits();
    const std::size_t k = sym.ops.size();
    std::vector<std::pair<double, PauliString>> out;
    const double norm = 1.0 / static_cast<double>(std::size_t{1} << k);
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        PauliString p(n);
        double c = norm;
        for (std::size_t i = 0; i < k; ++i) {
            if ((mask >> i) & 1) {
                p = p * sym.ops[i];
                c *= sym.eigenvalues[i];
            }
        }
        out.emplace_back(c, p);
    }
    return out;
}

double pass_rate_of(const Matrix &rho, const Matrix &pi) {
    double pass = trace_of_product(pi, rho).real();
    if (!(pass > 1e-14)) {
        throw std::domain_error("state has no weight in the symmetry subspace");
    }
    return pass;
}

struct TermEstimate {
    double mean = 0;
    double variance = 0;
    std::size_t kept = 0;
};

// Joint readout of a Pauli term with all symmetries; shots with a wrong
// symmetry outcome are dropped.
TermEstimate direct_term(const Matrix &rho, const PauliString &term, const SymmetrySpec &sym, std::size_t shots,
                         const RngStream &stream) {
    std::vector<PauliString> gens{term};
    gens.insert(gens.end(), sym.ops.begin(), sym.ops.end());
    const std::size_t m = gens.size();
    const std::size_t outcomes = std::size_t{1} << m;
    std::vector<double> subset_mean(outcomes);
    for (std::size_t mask = 0; mask < outcomes; ++mask) {
        PauliString p(term.n_qubits());
        for (std::size_t j = 0; j < m; ++j) {
            if ((mask >> j) & 1) {
                p = p * gens[j];
            }
        }
        subset_mean[mask] = pauli_expectation(rho, p).real();
    }
    // Outcome bit j set means eigenvalue -1 for generator j.
    std::vector<double> prob(outcomes);
    for (std::size_t out = 0; out < outcomes; ++out) {
        double s = 0;
        for (std::size_t mask = 0; mask < outcomes; ++mask) {
            s += (std::popcount(out & mask) & 1) ? -subset_mean[mask] : subset_mean[mask];
        }
        prob[out] = std::max(0.0, s / static_cast<double>(outcomes));
    }
    AliasTable table(prob);
    std::size_t wanted = 0;
    for (std::size_t i = 0; i < sym.ops.size(); ++i) {
        if (sym.eigenvalues[i] < 0) {
            wanted |= std::size_t{1} << (i + 1);
        }
    }
    std::vector<double> raw(shots);
    parallel_for(shots, [&](std::size_t i) {
        Rng rng = stream.shot(i);
        std::size_t out = table.sample(rng);
        raw[i] = (out >> 1) == (wanted >> 1) ? ((out & 1) ? -1.0 : 1.0) : std::numeric_limits<double>::quiet_NaN();
    });
    std::vector<double> kept;
    for (double v : raw) {
        if (!std::isnan(v)) {
            kept.push_back(v);
        }
    }
    if (kept.size() < 2) {
        throw std::domain_error("fewer than two shots passed symmetry verification");
    }
    EstimatorReport r = summarize(kept);
    return {r.mean, r.variance, kept.size()};
}

std::vector<double> sample_sum(const Matrix &rho, const Observable &obs, std::size_t shots, const RngStream &stream) {
    std::vector<double> means;
    for (const auto &t : obs.terms()) {
        means.push_back(pauli_expectation(rho, t.pauli).real());
    }
    std::vector<double> out(shots);
    parallel_for(shots, [&](std::size_t i) {
        Rng rng = stream.shot(i);
        double v = 0;
        for (std::size_t t = 0; t < means.size(); ++t) {
            const auto &term = obs.terms()[t];
            v += term.pauli.is_identity() ? term.coeff : term.coeff * sample_pm1(means[t], rng);
        }
        out[i] = v;
    });
    return out;
}

}  // namespace

SymmetrySpec SymmetrySpec::single(const PauliString &op, int eigenvalue) {
    SymmetrySpec s{{op}, {eigenvalue}};
    s.validate();
    return s;
}

int SymmetrySpec::n_qubits() const {
    return ops.empty() ? 0 : ops.front().n_qubits();
}

void SymmetrySpec::validate() const {
    if (ops.empty()) {
        throw std::invalid_argument("a symmetry spec needs at least one operator");
    }
    if (ops.size() != eigenvalues.size()) {
        throw std::invalid_argument("one eigenvalue per symmetry operator is required");
    }
    if (ops.size() > 16) {
        throw std::invalid_argument("at most 16 symmetry operators are supported");
    }
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].n_qubits() != ops.front().n_qubits()) {
            throw std::invalid_argument("symmetry operators act on different qubit counts");
        }
        if (!ops[i].is_hermitian() || ops[i].is_identity()) {
            throw std::invalid_argument("symmetry operators must be Hermitian non-identity Pauli strings");
        }
        if (eigenvalues[i] != 1 && eigenvalues[i] != -1) {
            throw std::invalid_argument("symmetry eigenvalues must be +1 or -1");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (!ops[i].commutes_with(ops[j])) {
                throw std::invalid_argument("symmetry operators must commute");
            }
        }
    }
}

Matrix projector(const SymmetrySpec &sym) {
    return projector_terms(sym).to_matrix();
}

Observable projector_terms(const SymmetrySpec &sym) {
    PauliSum sum;
    for (const auto &[c, p] : projector_expansion(sym)) {
        accumulate(sum, c, p);
    }
    return to_observable(sym.n_qubits(), sum);
}

Observable projected_observable(const SymmetrySpec &sym, const Observable &obs) {
    if (obs.n_qubits() != sym.n_qubits()) {
        throw std::invalid_argument("observable and symmetry qubit counts differ");
    }
    auto pi = projector_expansion(sym);
    PauliSum sum;
    for (const auto &[ca, a] : pi) {
        for (const auto &t : obs.terms()) {
            PauliString left = a * t.pauli;
            for (const auto &[cb, b] : pi) {
                accumulate(sum, ca * cb * t.coeff, left * b);
            }
        }
    }
    return to_observable(sym.n_qubits(), sum);
}

PostSelection postselect_state(const DensityMatrix &rho, const Matrix &pi) {
    if (pi.rows() != rho.dim()) {
        throw std::invalid_argument("projector and state dimensions differ");
    }
    double pass = pass_rate_of(rho.matrix(), pi);
    Matrix out = pi * rho.matrix() * pi / pass;
    return {DensityMatrix::from_matrix_unchecked(rho.n_qubits(), std::move(out)), pass, 1.0 / pass};
}

SvValue sv_postprocess(const DensityMatrix &rho, const Matrix &pi, const Observable &obs) {
    if (pi.rows() != rho.dim()) {
        throw std::invalid_argument("projector and state dimensions differ");
    }
    double pass = pass_rate_of(rho.matrix(), pi);
    Matrix projected = pi * obs.to_matrix() * pi;
    cplx num = trace_of_product(projected, rho.matrix());
    if (std::abs(num.imag()) > 1e-10) {
        throw std::domain_error("projected expectation has a non-negligible imaginary part");
    }
    return {num.real() / pass, pass, 1.0 / (pass * pass)};
}

SvShotResult sv_shot_mitigate(const NoisyCircuit &c, const SymmetrySpec &sym, const Observable &obs,
                              std::size_t shots, SvMode mode, const RngStream &stream) {
    sym.validate();
    if (obs.n_qubits() != c.n_qubits() || sym.n_qubits() != c.n_qubits()) {
        throw std::invalid_argument("circuit, observable and symmetry qubit counts differ");
    }
    if (shots < 2) {
        throw std::invalid_argument("symmetry verification needs at least two shots");
    }
    if (mode == SvMode::direct) {
        for (const auto &t : obs.terms()) {
            for (const auto &s : sym.ops) {
                if (!t.pauli.qubitwise_commutes_with(s)) {
                    throw std::invalid_argument("observable term " + t.pauli.label() +
                                                " cannot be read out together with symmetry " + s.label() +
                                                "; use post-processing mode");
                }
            }
        }
    }
    DensityMatrix state = run_circuit(c);
    Matrix pi = projector(sym);
    const double exact_pass = pass_rate_of(state.matrix(), pi);
    SvShotResult result;
    EstimatorReport &rep = result.report;
    if (mode == SvMode::direct) {
        double mean = 0;
        double var = 0;
        double kept = 0;
        std::size_t measured_terms = 0;
        for (std::size_t t = 0; t < obs.terms().size(); ++t) {
            const auto &term = obs.terms()[t];
            if (term.pauli.is_identity()) {
                mean += term.coeff;
                continue;
            }
            TermEstimate e = direct_term(state.matrix(), term.pauli, sym, shots, stream.substream(t));
            mean += term.coeff * e.mean;
            var += term.coeff * term.coeff * e.variance;
            kept += static_cast<double>(e.kept) / static_cast<double>(shots);
            ++measured_terms;
        }
        rep.mean = mean;
        rep.variance = var;
        result.retained_fraction = measured_terms ? kept / static_cast<double>(measured_terms) : 1.0;
        rep.set_overhead(1.0 / exact_pass, OverheadKind::predicted);
        rep.method = "sv_direct";
    } else {
        auto num = sample_sum(state.matrix(), projected_observable(sym, obs), shots, stream.substream(0));
        auto den = sample_sum(state.matrix(), projector_terms(sym), shots, stream.substream(1));
        EstimatorReport rn = summarize(num);
        EstimatorReport rd = summarize(den);
        if (!(std::abs(rd.mean) > 0)) {
            throw std::domain_error("estimated pass rate is zero");
        }
        double v = rn.mean / rd.mean;
        rep.mean = v;
        rep.variance = (rn.variance + v * v * rd.variance) / (rd.mean * rd.mean);
        result.retained_fraction = rd.mean;
        rep.set_overhead(1.0 / (exact_pass * exact_pass), OverheadKind::predicted);
        rep.method = "sv_postprocess";
    }
    rep.n_shots = shots;
    rep.seed = stream.seed();
    rep.set_reference(expectation(ideal_state(c), obs));
    return result;
}

}  // namespace qem::symx
