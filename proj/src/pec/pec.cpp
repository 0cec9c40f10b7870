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

#include "qem/pec/pec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qem/core/gates.hpp"
#include "qem/core/kernels.hpp"
#include "qem/core/parallel.hpp"
#include "qem/core/sampling.hpp"
#include "qem/stats/quasi_mix.hpp"

namespace qem::pec {

namespace {

struct CanonicalError {
    Channel error;  // no identity component
    double p = 0;
};

// Folds the identity weight of a Pauli error into the fault-free part.
CanonicalError canonical_error(const Channel &error, double p) {
    if (!error.is_pauli()) {
        throw std::invalid_argument("PEC needs Pauli noise; twirl the location first");
    }
    double identity_weight = 0;
    std::vector<PauliProbability> rest;
    for (const auto &pp : error.pauli_probabilities()) {
        if (pp.pauli.is_identity()) {
            identity_weight += pp.probability;
        } else if (pp.probability > 0) {
            rest.push_back(pp);
        }
    }
    double keep = 1.0 - identity_weight;
    if (p == 0 || keep <= 1e-15) {
        return {Channel::identity(error.targets()), 0.0};
    }
    for (auto &pp : rest) {
        pp.probability /= keep;
    }
    return {Channel::from_pauli(std::move(rest), error.targets(), 1e-9), p * keep};
}

GateDecomposition two_term(const Gate &gate, const CanonicalError &ce, double a, double b) {
    GateDecomposition d;
    d.gate = gate;
    if (ce.p == 0) {
        d.basis.push_back({1.0, {}, "noisy"});
        d.gamma = 1.0;
        return d;
    }
    d.basis.push_back({a, {ce.error.mixed_with_identity(ce.p)}, "noisy"});
    if (b != 0) {
        d.basis.push_back({b, {ce.error}, "error"});
    }
    d.gamma = std::abs(a) + std::abs(b);
    return d;
}

// Quasi-probabilities of the inverse of a Pauli channel, indexed densely.
std::vector<double> inverse_quasi_probabilities(const Channel &ch) {
    int k = ch.support_size();
    if (k > 2) {
        throw std::invalid_argument("Pauli channel inversion is limited to 2 qubits");
    }
    auto fid = fidelities_from_probabilities(ch.dense_pauli_probabilities(), k);
    for (double &f : fid) {
        if (std::abs(f) < 1e-12) {
            throw std::domain_error("Pauli channel has a vanishing fidelity and cannot be inverted");
        }
        f = 1.0 / f;
    }
    return probabilities_from_fidelities(fid, k);
}

GateDecomposition inversion_decomposition(const Gate &gate, const Channel &noise) {
    if (!noise.is_pauli()) {
        throw std::invalid_argument("Pauli channel inversion needs a Pauli channel");
    }
    auto q = inverse_quasi_probabilities(noise);
    int k = noise.support_size();
    GateDecomposition d;
    d.gate = gate;
    d.gamma = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (std::abs(q[i]) < 1e-15) {
            continue;
        }
        PauliString p = pauli_from_index(k, i);
        d.basis.push_back({q[i], {noise, Channel::pauli_error(p, noise.targets())}, p.label()});
        d.gamma += std::abs(q[i]);
    }
    return d;
}

std::vector<GateDecomposition> decompose_all(const NoisyCircuit &c, Basis basis) {
    std::vector<GateDecomposition> out;
    out.reserve(c.size());
    for (const auto &loc : c.locations()) {
        out.push_back(decompose_location(loc, basis));
    }
    return out;
}

void apply_operation(Matrix &rho, int n, const Gate &gate, const BasisOperation &op) {
    kernels::apply_unitary(rho, n, gate.unitary, gate.targets);
    for (const auto &ch : op.post) {
        ch.apply_in_place(rho, n);
    }
}

struct Enumeration {
    double mean = 0;
    double second = 0;  // sum_n |w_n| E_n[o^2]
    Matrix state;
    std::size_t patterns = 0;
};

Enumeration enumerate(int n, const std::vector<GateDecomposition> &decomps, const Observable *obs,
                      bool keep_state, std::size_t max_patterns) {
    double count = 1;
    for (const auto &d : decomps) {
        count *= static_cast<double>(d.basis.size());
    }
    if (count > static_cast<double>(max_patterns)) {
        throw std::length_error("exact PEC would enumerate " + std::to_string(count) +
                                " patterns; the limit is " + std::to_string(max_patterns));
    }
    Enumeration e;
    const auto dim = Eigen::Index{1} << n;
    if (keep_state) {
        e.state = Matrix::Zero(dim, dim);
    }
    Matrix start = Matrix::Zero(dim, dim);
    start(0, 0) = 1;
    auto visit = [&](auto &&self, std::size_t m, const Matrix &rho, double w) -> void {
        if (m == decomps.size()) {
            ++e.patterns;
            if (keep_state) {
                e.state += w * rho;
            }
            if (obs != nullptr) {
                double v = expectation(rho, *obs);
                double sv = 0;
                for (const auto &t : obs->terms()) {
                    double mu = pauli_expectation(rho, t.pauli).real();
                    sv += t.coeff * t.coeff * (1.0 - mu * mu);
                }
                e.mean += w * v;
                e.second += std::abs(w) * (v * v + sv);
            }
            return;
        }
        const auto &d = decomps[m];
        for (const auto &op : d.basis) {
            Matrix next = rho;
            apply_operation(next, n, d.gate, op);
            self(self, m + 1, next, w * op.alpha);
        }
    };
    visit(visit, 0, start, 1.0);
    return e;
}

// Per-shot form of one basis operation. Pauli channels are realized by
// drawing a single Pauli, which leaves the outcome distribution unchanged.
struct CompiledChannel {
    bool pauli = false;
    std::vector<kernels::WeightedPauli> paulis;
    AliasTable table;
    Channel channel;
};

struct CompiledTerm {
    double sign = 1;
    std::vector<CompiledChannel> post;
};

struct CompiledLocation {
    Matrix unitary;
    std::vector<int> targets;
    std::vector<CompiledTerm> terms;
    AliasTable table;
};

std::vector<CompiledLocation> compile(int n, const std::vector<GateDecomposition> &decomps) {
    std::vector<CompiledLocation> out;
    for (const auto &d : decomps) {
        CompiledLocation loc;
        loc.unitary = d.gate.unitary;
        loc.targets = d.gate.targets;
        std::vector<double> weights;
        for (const auto &op : d.basis) {
            CompiledTerm term;
            term.sign = op.alpha < 0 ? -1.0 : 1.0;
            for (const auto &ch : op.post) {
                CompiledChannel cc;
                cc.channel = ch;
                if (ch.is_pauli()) {
                    cc.pauli = true;
                    std::vector<double> probs;
                    for (const auto &pp : ch.pauli_probabilities()) {
                        if (pp.probability > 0) {
                            cc.paulis.push_back(kernels::embed(pp.pauli, n, ch.targets()));
                            probs.push_back(pp.probability);
                        }
                    }
                    cc.table = AliasTable(probs);
                }
                term.post.push_back(std::move(cc));
            }
            loc.terms.push_back(std::move(term));
            weights.push_back(std::abs(op.alpha));
        }
        loc.table = AliasTable(weights);
        out.push_back(std::move(loc));
    }
    return out;
}

double measure(const Matrix &rho, const Observable &obs, Rng &rng) {
    double total = 0;
    for (const auto &t : obs.terms()) {
        if (t.pauli.is_identity()) {
            total += t.coeff;
        } else {
            total += t.coeff * sample_pm1(pauli_expectation(rho, t.pauli).real(), rng);
        }
    }
    return total;
}

EstimatorReport run_decomposed(const NoisyCircuit &c, const Observable &obs,
                               const std::vector<GateDecomposition> &decomps, const PecConfig &cfg,
                               const RngStream &stream, const std::string &method) {
    if (obs.n_qubits() != c.n_qubits()) {
        throw std::invalid_argument("observable and circuit qubit counts differ");
    }
    const int n = c.n_qubits();
    double gamma = 1;
    for (const auto &d : decomps) {
        gamma *= d.gamma;
    }
    double reference = expectation(ideal_state(c), obs);
    EstimatorReport rep;
    if (cfg.exact) {
        Enumeration e = enumerate(n, decomps, &obs, false, cfg.max_patterns);
        rep = exact_report(e.mean, std::max(0.0, gamma * e.second - e.mean * e.mean), reference);
    } else {
        if (cfg.shots < 2) {
            throw std::invalid_argument("sampled PEC needs at least two shots");
        }
        auto compiled = compile(n, decomps);
        const auto dim = Eigen::Index{1} << n;
        std::vector<double> samples(cfg.shots);
        parallel_for(cfg.shots, [&](std::size_t i) {
            Rng rng = stream.shot(i);
            Matrix rho = Matrix::Zero(dim, dim);
            rho(0, 0) = 1;
            double sign = 1;
            for (const auto &loc : compiled) {
                kernels::apply_unitary(rho, n, loc.unitary, loc.targets);
                const CompiledTerm &term = loc.terms[loc.table.sample(rng)];
                sign *= term.sign;
                for (const auto &cc : term.post) {
                    if (cc.pauli) {
                        const auto &p = cc.paulis[cc.table.sample(rng)];
                        if (p.basis_x != 0 || p.basis_z != 0) {
                            kernels::conjugate_pauli(rho, p.basis_x, p.basis_z);
                        }
                    } else {
                        cc.channel.apply_in_place(rho, n);
                    }
                }
            }
            samples[i] = gamma * sign * measure(rho, obs, rng);
        });
        rep = summarize(samples, reference);
    }
    rep.method = method;
    rep.seed = stream.seed();
    rep.set_overhead(gamma * gamma, OverheadKind::predicted);
    return rep;
}

NoisyCircuit prepared(const NoisyCircuit &c, const PecConfig &cfg) {
    return cfg.twirl ? twirl_circuit_noise(c) : c;
}

int local_index(const std::vector<int> &support, int q) {
    return static_cast<int>(std::find(support.begin(), support.end(), q) - support.begin());
}

}  // namespace

GateDecomposition invert_pauli_channel(const Channel &ch) {
    std::vector<int> targets = ch.targets();
    Gate id("id", gates::identity(static_cast<int>(targets.size())), targets);
    return inversion_decomposition(id, ch);
}

GateDecomposition decompose_noisy_gate(const Gate &gate, const Channel &error, double p, Basis basis) {
    if (p < 0 || p >= 1) {
        throw std::invalid_argument("fault probability must lie in [0, 1)");
    }
    CanonicalError ce = canonical_error(error, p);
    if (basis == Basis::inversion) {
        if (ce.p == 0) {
            return two_term(gate, ce, 1.0, 0.0);
        }
        return inversion_decomposition(gate, ce.error.mixed_with_identity(ce.p));
    }
    return two_term(gate, ce, 1.0 / (1.0 - ce.p), -ce.p / (1.0 - ce.p));
}

GateDecomposition decompose_location(const Location &loc, Basis basis) {
    if (loc.noiseless()) {
        GateDecomposition d;
        d.gate = loc.gate;
        d.basis.push_back({1.0, {}, "noisy"});
        return d;
    }
    return decompose_noisy_gate(loc.gate, loc.error, loc.p_fault, basis);
}

GateDecomposition partial_decomposition(const Location &loc, double residual) {
    if (residual < 0 || residual > 1) {
        throw std::invalid_argument("residual fraction must lie in [0, 1]");
    }
    if (loc.noiseless()) {
        return decompose_location(loc);
    }
    CanonicalError ce = canonical_error(loc.error, loc.p_fault);
    double pr = ce.p * residual;
    return two_term(loc.gate, ce, (1.0 - pr) / (1.0 - ce.p), (pr - ce.p) / (1.0 - ce.p));
}

double decomposition_residual(const GateDecomposition &d) {
    std::vector<int> support = d.gate.targets;
    for (const auto &op : d.basis) {
        for (const auto &ch : op.post) {
            support.insert(support.end(), ch.targets().begin(), ch.targets().end());
        }
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    const int k = static_cast<int>(support.size());
    if (k > 3) {
        throw std::invalid_argument("decomposition check is limited to 3-qubit supports");
    }
    auto to_local = [&](const std::vector<int> &targets) {
        std::vector<int> out;
        for (int q : targets) {
            out.push_back(local_index(support, q));
        }
        return out;
    };
    Gate local_gate(d.gate.name, d.gate.unitary, to_local(d.gate.targets));
    std::vector<BasisOperation> local_ops;
    for (const auto &op : d.basis) {
        BasisOperation lo{op.alpha, {}, op.label};
        for (const auto &ch : op.post) {
            lo.post.push_back(ch.retargeted(to_local(ch.targets())));
        }
        local_ops.push_back(std::move(lo));
    }
    const std::uint64_t count = std::uint64_t{1} << (2 * k);
    const double norm = 1.0 / static_cast<double>(std::uint64_t{1} << k);
    double worst = 0;
    for (std::uint64_t j = 0; j < count; ++j) {
        Matrix input = pauli_from_index(k, j).to_matrix();
        Matrix ideal = input;
        kernels::apply_unitary(ideal, k, local_gate.unitary, local_gate.targets);
        Matrix combo = Matrix::Zero(input.rows(), input.cols());
        for (const auto &op : local_ops) {
            Matrix image = input;
            apply_operation(image, k, local_gate, op);
            combo += op.alpha * image;
        }
        Matrix diff = combo - ideal;
        for (std::uint64_t i = 0; i < count; ++i) {
            double t = std::abs(pauli_expectation(diff, pauli_from_index(k, i))) * norm;
            worst = std::max(worst, t);
        }
    }
    return worst;
}

double circuit_overhead(const NoisyCircuit &c, Basis basis) {
    double total = 1;
    for (const auto &loc : c.locations()) {
        double g = decompose_location(loc, basis).gamma;
        total *= g * g;
    }
    return total;
}

EstimatorReport pec_mitigate(const NoisyCircuit &c, const Observable &obs, const PecConfig &cfg,
                             const RngStream &stream) {
    NoisyCircuit circuit = prepared(c, cfg);
    return run_decomposed(circuit, obs, decompose_all(circuit, cfg.basis), cfg, stream, "pec");
}

EstimatorReport partial_pec(const NoisyCircuit &c, const Observable &obs, double lambda_target,
                            const PecConfig &cfg, const RngStream &stream) {
    NoisyCircuit circuit = prepared(c, cfg);
    double lambda = circuit_fault_rate(circuit);
    if (lambda_target < 0 || lambda_target > lambda * (1 + 1e-12)) {
        throw std::invalid_argument("target fault rate must lie in [0, circuit fault rate]");
    }
    double residual = lambda > 0 ? std::min(1.0, lambda_target / lambda) : 1.0;
    std::vector<GateDecomposition> decomps;
    for (const auto &loc : circuit.locations()) {
        decomps.push_back(partial_decomposition(loc, residual));
    }
    return run_decomposed(circuit, obs, decomps, cfg, stream, "pec_partial");
}

Matrix mitigated_state(const NoisyCircuit &c, const PecConfig &cfg) {
    NoisyCircuit circuit = prepared(c, cfg);
    return enumerate(circuit.n_qubits(), decompose_all(circuit, cfg.basis), nullptr, true, cfg.max_patterns).state;
}

}  // namespace qem::pec
