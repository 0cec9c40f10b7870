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

#include "qem/core/observable.hpp"
#include "qem/core/pauli.hpp"
#include "qem/core/types.hpp"

namespace qem {

/// A positive, unit-trace 2^N x 2^N operator.
///
/// Values are immutable once built; simulation steps take a DensityMatrix by
/// value and return the updated one, so callers can move through a pipeline
/// without copies.
class DensityMatrix {
   public:
    static DensityMatrix basis_state(int n_qubits, std::uint64_t index = 0);
    static DensityMatrix from_state_vector(const Vector &psi);
    static DensityMatrix maximally_mixed(int n_qubits);
    /// Validates Hermiticity, unit trace and positivity to `tol`.
    static DensityMatrix from_matrix(Matrix m, double tol = 1e-10);
    /// Skips validation. Only for kernels whose output is physical by construction.
    static DensityMatrix from_matrix_unchecked(int n_qubits, Matrix m);

    int n_qubits() const {
        return n_;
    }
    Eigen::Index dim() const {
        return m_.rows();
    }
    const Matrix &matrix() const {
        return m_;
    }
    /// Releases the storage for in-place kernels.
    Matrix take() && {
        return std::move(m_);
    }

    double trace() const;
    double purity() const;
    /// Max deviation from Hermiticity, unit trace, and the most negative eigenvalue.
    bool is_physical(double tol = 1e-10) const;
    bool is_pure(double tol = 1e-10) const;

   private:
    DensityMatrix(int n, Matrix m) : n_(n), m_(std::move(m)) {
    }

    int n_ = 0;
    Matrix m_;
};

/// Tr[P rho] for a Pauli string (complex in general).
cplx pauli_expectation(const Matrix &rho, const PauliString &pauli);

/// Tr[O rho]. Throws if the imaginary residue exceeds 1e-10.
double expectation(const DensityMatrix &state, const Observable &obs);
double expectation(const Matrix &rho, const Observable &obs);

/// Tr[A B] without forming the product.
cplx trace_of_product(const Matrix &a, const Matrix &b);

}  // namespace qem
