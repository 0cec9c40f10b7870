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

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qem/core/density_matrix.hpp"
#include "qem/core/pauli.hpp"
#include "qem/core/types.hpp"

namespace qem {

struct PauliProbability {
    PauliString pauli;  // defined on the channel's support
    double probability = 0;
};

/// A CPTP map on a subset of qubits.
///
/// Three storage forms share one interface:
///   kraus        explicit Kraus operators;
///   pauli        rho -> sum_P p_P P rho P (a stochastic Pauli channel);
///   depolarizing rho -> (1 - p) rho + p Tr_S[rho] (x) I_S / 2^k.
///
/// Depolarizing convention: a depolarizing channel of strength p replaces the
/// state on its k-qubit support by I/2^k with probability p. On one qubit this
/// gives <Z> = 1 - p for |0>, not 1 - 4p/3.
class Channel {
   public:
    enum class Kind { kraus, pauli, depolarizing };

    Channel() = default;

    static Channel from_kraus(std::vector<Matrix> ops, std::vector<int> targets, double tol = 1e-10);
    static Channel from_pauli(std::vector<PauliProbability> probs, std::vector<int> targets, double tol = 1e-10);
    static Channel identity(std::vector<int> targets);
    static Channel depolarizing(double p, std::vector<int> targets);
    static Channel dephasing(double p, int qubit);
    static Channel bit_flip(double p, int qubit);
    /// rho -> E rho E for a fixed Pauli E on `targets`.
    static Channel pauli_error(const PauliString &error, std::vector<int> targets);
    static Channel unitary(Matrix u, std::vector<int> targets);
    static Channel amplitude_damping(double gamma, int qubit);

    Kind kind() const {
        return kind_;
    }
    const std::vector<int> &targets() const {
        return targets_;
    }
    int support_size() const {
        return static_cast<int>(targets_.size());
    }
    bool is_pauli() const {
        return kind_ != Kind::kraus;
    }
    /// Strength p of a depolarizing-form channel.
    double depolarizing_strength() const;

    /// Pauli probabilities over the support (pauli or depolarizing forms).
    std::vector<PauliProbability> pauli_probabilities() const;
    /// Dense Pauli probabilities indexed by x_mask | (z_mask << k).
    std::vector<double> dense_pauli_probabilities() const;
    std::vector<Matrix> kraus_ops() const;

    /// (1 - w) * identity + w * this.
    Channel mixed_with_identity(double w) const;
    /// Same map on different qubits.
    Channel retargeted(std::vector<int> targets) const;

    /// Applies the map to any operator on n qubits (density matrix or not).
    void apply_in_place(Matrix &op, int n_qubits) const;

    /// Pauli transfer matrix on the support, T_ij = Tr[P_i E(P_j)] / 2^k, Paulis
    /// indexed by x_mask | (z_mask << k). Support is capped at 3 qubits.
    RealMatrix transfer_matrix() const;

   private:
    Kind kind_ = Kind::pauli;
    std::vector<int> targets_;
    std::vector<Matrix> kraus_;
    std::vector<PauliProbability> paulis_;
    double depol_p_ = 0;
};

DensityMatrix apply_channel(DensityMatrix state, const Channel &ch);

/// Pauli string on k qubits from its dense index x_mask | (z_mask << k).
PauliString pauli_from_index(int k, std::uint64_t index);
std::uint64_t pauli_index(const PauliString &p);

/// Pauli fidelities f_Q = sum_P p_P (-1)^{<P,Q>} via a Walsh-Hadamard transform.
std::vector<double> fidelities_from_probabilities(std::span<const double> probs, int k);
/// Inverse of fidelities_from_probabilities.
std::vector<double> probabilities_from_fidelities(std::span<const double> fidelities, int k);

}  // namespace qem
