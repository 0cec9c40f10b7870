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

#include "qem/core/channel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "qem/core/kernels.hpp"

namespace qem {

namespace {

void check_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " probability must be in [0, 1]");
    }
}

std::vector<int> local_targets(int k) {
    std::vector<int> t(k);
    for (int j = 0; j < k; ++j) {
        t[j] = j;
    }
    return t;
}

void walsh_hadamard(std::vector<double> &v) {
    for (std::size_t len = 1; len < v.size(); len <<= 1) {
        for (std::size_t i = 0; i < v.size(); i += 2 * len) {
            for (std::size_t j = i; j < i + len; ++j) {
                double a = v[j];
                double b = v[j + len];
                v[j] = a + b;
                v[j + len] = a - b;
            }
        }
    }
}

// Swaps the x and z halves of a dense Pauli index.
std::uint64_t swap_halves(std::uint64_t index, int k) {
    std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    return ((index & mask) << k) | (index >> k);
}

}  // namespace

PauliString pauli_from_index(int k, std::uint64_t index) {
    std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    return PauliString(k, index & mask, (index >> k) & mask, 0);
}

std::uint64_t pauli_index(const PauliString &p) {
    return p.x_mask() | (p.z_mask() << p.n_qubits());
}

std::vector<double> fidelities_from_probabilities(std::span<const double> probs, int k) {
    std::size_t size = std::size_t{1} << (2 * k);
    if (probs.size() != size) {
        throw std::invalid_argument("dense Pauli vector has the wrong size");
    }
    // <P,Q> = x_P.z_Q + z_P.x_Q is an ordinary dot product against Q with halves swapped.
    std::vector<double> h(probs.begin(), probs.end());
    walsh_hadamard(h);
    std::vector<double> f(size);
    for (std::size_t q = 0; q < size; ++q) {
        f[q] = h[swap_halves(q, k)];
    }
    return f;
}

std::vector<double> probabilities_from_fidelities(std::span<const double> fidelities, int k) {
    std::size_t size = std::size_t{1} << (2 * k);
    if (fidelities.size() != size) {
        throw std::invalid_argument("dense Pauli vector has the wrong size");
    }
    std::vector<double> h(size);
    for (std::size_t q = 0; q < size; ++q) {
        h[swap_halves(q, k)] = fidelities[q];
    }
    walsh_hadamard(h);
    for (double &v : h) {
        v /= static_cast<double>(size);
    }
    return h;
}

Channel Channel::from_kraus(std::vector<Matrix> ops, std::vector<int> targets, double tol) {
    if (ops.empty()) {
        throw std::invalid_argument("Kraus set is empty");
    }
    Eigen::Index dim = Eigen::Index{1} << targets.size();
    Matrix completeness = Matrix::Zero(dim, dim);
    for (const auto &k : ops) {
        if (k.rows() != dim || k.cols() != dim) {
            throw std::invalid_argument("Kraus operator dimension does not match targets");
        }
        completeness += k.adjoint() * k;
    }
    if ((completeness - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol) {
        throw std::invalid_argument("incomplete Kraus set: sum K^dagger K != I");
    }
    Channel ch;
    ch.kind_ = Kind::kraus;
    ch.targets_ = std::move(targets);
    ch.kraus_ = std::move(ops);
    return ch;
}

Channel Channel::from_pauli(std::vector<PauliProbability> probs, std::vector<int> targets, double tol) {
    int k = static_cast<int>(targets.size());
    std::map<std::uint64_t, double> merged;
    double total = 0;
    for (const auto &pp : probs) {
        if (pp.pauli.n_qubits() != k) {
            throw std::invalid_argument("Pauli channel term does not match support size");
        }
        if (pp.probability < -tol) {
            throw std::invalid_argument("negative Pauli channel probability");
        }
        double p = std::max(pp.probability, 0.0);
        merged[pauli_index(pp.pauli.unsigned_part())] += p;
        total += p;
    }
    if (std::abs(total - 1.0) > tol) {
        throw std::invalid_argument("Pauli channel probabilities do not sum to 1");
    }
    Channel ch;
    ch.kind_ = Kind::pauli;
    ch.targets_ = std::move(targets);
    for (const auto &[index, p] : merged) {
        if (p > 0) {
            ch.paulis_.push_back({pauli_from_index(k, index), p});
        }
    }
    return ch;
}

Channel Channel::identity(std::vector<int> targets) {
    int k = static_cast<int>(targets.size());
    return from_pauli({{PauliString(k), 1.0}}, std::move(targets));
}

Channel Channel::depolarizing(double p, std::vector<int> targets) {
    check_probability(p, "depolarizing");
    if (targets.empty()) {
        throw std::invalid_argument("depolarizing channel needs a support");
    }
    Channel ch;
    ch.kind_ = Kind::depolarizing;
    ch.targets_ = std::move(targets);
    ch.depol_p_ = p;
    return ch;
}

Channel Channel::dephasing(double p, int qubit) {
    check_probability(p, "dephasing");
    return from_pauli({{PauliString(1), 1.0 - p}, {PauliString::from_label("Z"), p}}, {qubit});
}

Channel Channel::bit_flip(double p, int qubit) {
    check_probability(p, "bit-flip");
    return from_pauli({{PauliString(1), 1.0 - p}, {PauliString::from_label("X"), p}}, {qubit});
}

Channel Channel::pauli_error(const PauliString &error, std::vector<int> targets) {
    return from_pauli({{error.unsigned_part(), 1.0}}, std::move(targets));
}

Channel Channel::unitary(Matrix u, std::vector<int> targets) {
    return from_kraus({std::move(u)}, std::move(targets));
}

Channel Channel::amplitude_damping(double gamma, int qubit) {
    check_probability(gamma, "damping");
    Matrix k0 = Matrix::Zero(2, 2);
    Matrix k1 = Matrix::Zero(2, 2);
    k0(0, 0) = 1;
    k0(1, 1) = std::sqrt(1 - gamma);
    k1(0, 1) = std::sqrt(gamma);
    return from_kraus({k0, k1}, {qubit});
}

double Channel::depolarizing_strength() const {
    if (kind_ != Kind::depolarizing) {
        throw std::logic_error("not a depolarizing-form channel");
    }
    return depol_p_;
}

std::vector<PauliProbability> Channel::pauli_probabilities() const {
    if (kind_ == Kind::pauli) {
        return paulis_;
    }
    if (kind_ == Kind::kraus) {
        throw std::logic_error("Kraus-form channel has no Pauli probabilities; twirl it first");
    }
    int k = support_size();
    if (k > 6) {
        throw std::invalid_argument("refusing to enumerate 4^k Paulis for k > 6");
    }
    std::size_t count = std::size_t{1} << (2 * k);
    double each = depol_p_ / static_cast<double>(count);
    std::vector<PauliProbability> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back({pauli_from_index(k, i), i == 0 ? 1.0 - depol_p_ + each : each});
    }
    return out;
}

std::vector<double> Channel::dense_pauli_probabilities() const {
    int k = support_size();
    std::vector<double> dense(std::size_t{1} << (2 * k), 0.0);
    for (const auto &pp : pauli_probabilities()) {
        dense[pauli_index(pp.pauli)] += pp.probability;
    }
    return dense;
}

std::vector<Matrix> Channel::kraus_ops() const {
    if (kind_ == Kind::kraus) {
        return kraus_;
    }
    std::vector<Matrix> out;
    for (const auto &pp : pauli_probabilities()) {
        out.push_back(std::sqrt(pp.probability) * pp.pauli.to_matrix());
    }
    return out;
}

Channel Channel::mixed_with_identity(double w) const {
    check_probability(w, "mixing");
    int k = support_size();
    switch (kind_) {
        case Kind::depolarizing:
            return depolarizing(w * depol_p_, targets_);
        case Kind::pauli: {
            std::vector<PauliProbability> probs;
            probs.push_back({PauliString(k), 1.0 - w});
            for (const auto &pp : paulis_) {
                probs.push_back({pp.pauli, w * pp.probability});
            }
            return from_pauli(std::move(probs), targets_);
        }
        case Kind::kraus: {
            std::vector<Matrix> ops;
            Eigen::Index dim = Eigen::Index{1} << k;
            ops.push_back(std::sqrt(1.0 - w) * Matrix::Identity(dim, dim));
            for (const auto &op : kraus_) {
                ops.push_back(std::sqrt(w) * op);
            }
            return from_kraus(std::move(ops), targets_);
        }
    }
    throw std::logic_error("unreachable");
}

Channel Channel::retargeted(std::vector<int> targets) const {
    if (targets.size() != targets_.size()) {
        throw std::invalid_argument("retargeting must keep the support size");
    }
    Channel ch = *this;
    ch.targets_ = std::move(targets);
    return ch;
}

void Channel::apply_in_place(Matrix &op, int n_qubits) const {
    switch (kind_) {
        case Kind::kraus:
            kernels::apply_kraus(op, n_qubits, kraus_, targets_);
            return;
        case Kind::depolarizing:
            kernels::depolarize(op, n_qubits, targets_, depol_p_);
            return;
        case Kind::pauli: {
            kernels::check_targets(n_qubits, targets_);
            if (paulis_.size() == 1) {
                auto w = kernels::embed(paulis_[0].pauli, n_qubits, targets_);
                kernels::conjugate_pauli(op, w.basis_x, w.basis_z);
                return;
            }
            std::vector<kernels::WeightedPauli> terms;
            terms.reserve(paulis_.size());
            for (const auto &pp : paulis_) {
                terms.push_back(kernels::embed(pp.pauli, n_qubits, targets_, pp.probability));
            }
            kernels::apply_pauli_mixture(op, terms);
            return;
        }
    }
}

RealMatrix Channel::transfer_matrix() const {
    int k = support_size();
    if (k > 3) {
        throw std::invalid_argument("transfer matrix is only built for supports of at most 3 qubits");
    }
    std::size_t count = std::size_t{1} << (2 * k);
    Channel local = retargeted(local_targets(k));
    double norm = std::ldexp(1.0, -k);
    RealMatrix t(count, count);
    for (std::size_t j = 0; j < count; ++j) {
        Matrix image = pauli_from_index(k, j).to_matrix();
        local.apply_in_place(image, k);
        for (std::size_t i = 0; i < count; ++i) {
            cplx v = pauli_expectation(image, pauli_from_index(k, i)) * norm;
            t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v.real();
        }
    }
    return t;
}

DensityMatrix apply_channel(DensityMatrix state, const Channel &ch) {
    int n = state.n_qubits();
    Matrix m = std::move(state).take();
    ch.apply_in_place(m, n);
    return DensityMatrix::from_matrix_unchecked(n, std::move(m));
}

}  // namespace qem
