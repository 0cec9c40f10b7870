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

#include <cstdint>
#include <span>
#include <vector>

#include "qem/core/pauli.hpp"
#include "qem/core/types.hpp"

// In-place density-matrix update kernels. All take the full 2^n x 2^n matrix
// and the qubits an operator acts on; the operator's own index uses the first
// target as its most significant bit.
namespace qem::kernels {

struct WeightedPauli {
    std::uint64_t basis_x = 0;
    std::uint64_t basis_z = 0;
    double weight = 0;
};

/// rho -> U rho U^dagger.
void apply_unitary(Matrix &rho, int n_qubits, const Matrix &u, std::span<const int> targets);

/// rho -> sum_k K_k rho K_k^dagger.
void apply_kraus(Matrix &rho, int n_qubits, std::span<const Matrix> ops, std::span<const int> targets);

/// rho -> P rho P^dagger for basis-aligned masks.
void conjugate_pauli(Matrix &rho, std::uint64_t basis_x, std::uint64_t basis_z);

/// rho -> sum_k w_k P_k rho P_k.
void apply_pauli_mixture(Matrix &rho, std::span<const WeightedPauli> terms);

/// rho -> (1 - p) rho + p Tr_S[rho] (x) I_S / 2^|S|.
void depolarize(Matrix &rho, int n_qubits, std::span<const int> targets, double p);

/// Basis-aligned masks of `local` (defined on targets.size() qubits) embedded into n qubits.
WeightedPauli embed(const PauliString &local, int n_qubits, std::span<const int> targets, double weight = 1.0);

void check_targets(int n_qubits, std::span<const int> targets);

}  // namespace qem::kernels
