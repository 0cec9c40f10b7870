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

#include <cstddef>
#include <string>
#include <vector>

#include "qem/core/density_matrix.hpp"
#include "qem/core/observable.hpp"
#include "qem/core/pauli.hpp"
#include "qem/core/types.hpp"

namespace qem::symx {

/// Expansion operators G_i; the identity comes first by convention.
struct ExpansionBasis {
    std::vector<Matrix> ops;
    std::vector<std::string> labels;

    static ExpansionBasis from_paulis(const std::vector<PauliString> &paulis, bool prepend_identity = true);
    std::size_t size() const {
        return ops.size();
    }
    /// Throws unless the operators are square, equally sized and linearly
    /// independent under the Hilbert-Schmidt inner product.
    void validate() const;
};

struct SubspaceMatrices {
    Matrix hbar;  // Tr[G_i^dag H G_j rho]
    Matrix sbar;  // Tr[G_i^dag G_j rho]
};

SubspaceMatrices build_subspace_matrices(const DensityMatrix &rho, const Observable &h,
                                         const ExpansionBasis &basis);

struct GevpSolution {
    RealVector energies;  // ascending
    Matrix weights;       // column k pairs with energies(k); w^dag Sbar w = 1
    int retained = 0;     // dimension kept after dropping small overlap directions
};

/// Solves Hbar w = E Sbar w by canonical orthogonalization: overlap
/// eigenvalues below threshold * max are projected out. Degenerate lowest
/// solutions are ordered lexicographically after fixing each vector's phase.
GevpSolution solve_gevp(const Matrix &hbar, const Matrix &sbar, double threshold = 1e-10);

/// Gamma rho Gamma^dag / Tr[...] with Gamma = sum_j w_j G_j.
DensityMatrix expanded_state(const DensityMatrix &rho, const ExpansionBasis &basis, const Vector &weights);

/// Tr[Gamma^dag O Gamma rho] / Tr[Gamma^dag Gamma rho].
double expanded_expectation(const DensityMatrix &rho, const Observable &obs, const ExpansionBasis &basis,
                            const Vector &weights);

struct SubspaceResult {
    double energy = 0;
    Vector weights;
    GevpSolution gevp;
    /// Set when the energy falls below the lowest eigenvalue of H, which a
    /// mixed input state can produce.
    bool below_spectrum = false;
};

SubspaceResult subspace_expand(const DensityMatrix &rho, const Observable &h, const ExpansionBasis &basis,
                               double threshold = 1e-10);

}  // namespace qem::symx
