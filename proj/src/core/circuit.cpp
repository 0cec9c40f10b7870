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

#include "qem/core/circuit.hpp"

#include <cmath>
#include <stdexcept>

#include "qem/core/gates.hpp"
#include "qem/core/kernels.hpp"
#include "qem/core/twirl.hpp"

namespace qem {

Gate::Gate(std::string name_, Matrix u, std::vector<int> targets_)
    : name(std::move(name_)), unitary(std::move(u)), targets(std::move(targets_)) {
    if (unitary.rows() != (Eigen::Index{1} << targets.size()) || unitary.cols() != unitary.rows()) {
        throw std::invalid_argument("gate " + name + ": matrix size does not match its targets");
    }
    if (!gates::is_unitary(unitary, 1e-10)) {
        throw std::invalid_argument("gate " + name + " is not unitary");
    }
}

Gate Gate::named(const std::string &name, std::vector<int> targets, std::vector<double> params) {
    if (static_cast<int>(targets.size()) != gates::arity(name)) {
        throw std::invalid_argument("gate " + name + " expects " + std::to_string(gates::arity(name)) + " target(s)");
    }
    return Gate(name, gates::by_name(name, params), std::move(targets));
}

DensityMatrix apply_gate(DensityMatrix state, const Gate &gate) {
    int n = state.n_qubits();
    Matrix m = std::move(state).take();
    kernels::apply_unitary(m, n, gate.unitary, gate.targets);
    return DensityMatrix::from_matrix_unchecked(n, std::move(m));
}

Channel Location::noise() const {
    return error.mixed_with_identity(p_fault);
}

NoisyCircuit::NoisyCircuit(int n_qubits) : n_(n_qubits) {
    check_qubit_count(n_qubits);
}

NoisyCircuit &NoisyCircuit::add(Gate gate) {
    std::vector<int> t = gate.targets;
    return add(Location{std::move(gate), Channel::identity(std::move(t)), 0.0});
}

NoisyCircuit &NoisyCircuit::add(Gate gate, Channel error, double p_fault) {
    return add(Location{std::move(gate), std::move(error), p_fault});
}

NoisyCircuit &NoisyCircuit::add(Location loc) {
    kernels::check_targets(n_, loc.gate.targets);
    kernels::check_targets(n_, loc.error.targets());
    if (!(loc.p_fault >= 0.0 && loc.p_fault < 1.0)) {
        throw std::invalid_argument("fault probability must be in [0, 1)");
    }
    locations_.push_back(std::move(loc));
    return *this;
}

double circuit_fault_rate(const NoisyCircuit &c) {
    double s = 0;
    for (const auto &loc : c.locations()) {
        s += loc.p_fault;
    }
    return s;
}

double fault_free_probability(const NoisyCircuit &c) {
    double p = 1;
    for (const auto &loc : c.locations()) {
        p *= 1.0 - loc.p_fault;
    }
    return p;
}

Channel boosted_noise(const Location &loc, double noise_scale, BoostMode mode) {
    if (noise_scale < 0) {
        throw std::invalid_argument("noise scale must be nonnegative");
    }
    if (mode == BoostMode::linear) {
        double p = noise_scale * loc.p_fault;
        if (p >= 1.0) {
            throw std::domain_error("boosted fault probability " + std::to_string(p) + " is not below 1");
        }
        return loc.error.mixed_with_identity(p);
    }
    if (!loc.error.is_pauli()) {
        throw std::invalid_argument("exponential boosting needs Pauli noise; twirl the circuit first");
    }
    if (loc.error.kind() == Channel::Kind::depolarizing) {
        double q = loc.p_fault * loc.error.depolarizing_strength();
        return Channel::depolarizing(1.0 - std::pow(1.0 - q, noise_scale), loc.error.targets());
    }
    int k = loc.error.support_size();
    auto fid = fidelities_from_probabilities(loc.noise().dense_pauli_probabilities(), k);
    for (double &f : fid) {
        if (f < 0 && noise_scale != std::floor(noise_scale)) {
            throw std::domain_error("negative Pauli fidelity cannot be raised to a fractional power");
        }
        f = std::pow(f, noise_scale);
    }
    auto probs = probabilities_from_fidelities(fid, k);
    std::vector<PauliProbability> out;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] < -1e-12) {
            throw std::domain_error("fidelity-power boost left the set of Pauli channels");
        }
        if (probs[i] > 0) {
            out.push_back({pauli_from_index(k, i), probs[i]});
        }
    }
    return Channel::from_pauli(std::move(out), loc.error.targets(), 1e-9);
}

DensityMatrix run_circuit(const NoisyCircuit &c, double noise_scale, BoostMode mode) {
    const int n = c.n_qubits();
    Matrix rho = DensityMatrix::basis_state(n).matrix();
    for (const auto &loc : c.locations()) {
        kernels::apply_unitary(rho, n, loc.gate.unitary, loc.gate.targets);
        if (loc.noiseless() || noise_scale == 0) {
            continue;
        }
        boosted_noise(loc, noise_scale, mode).apply_in_place(rho, n);
    }
    return DensityMatrix::from_matrix_unchecked(n, std::move(rho));
}

DensityMatrix ideal_state(const NoisyCircuit &c) {
    return run_circuit(c, 0.0);
}

NoisyCircuit twirl_circuit_noise(const NoisyCircuit &c) {
    NoisyCircuit out(c.n_qubits());
    for (const auto &loc : c.locations()) {
        Location copy = loc;
        if (!copy.error.is_pauli()) {
            copy.error = pauli_twirl(copy.error);
        }
        out.add(std::move(copy));
    }
    return out;
}

}  // namespace qem
