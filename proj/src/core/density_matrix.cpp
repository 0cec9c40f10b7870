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

#include "qem/core/density_matrix.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qem {

namespace {

int qubits_for_dim(Eigen::Index dim) {
    if (dim <= 0 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument("density matrix dimension must be a power of two");
    }
    int n = std::countr_zero(static_cast<std::uint64_t>(dim));
    check_qubit_count(n);
    return n;
}

}  // namespace

DensityMatrix DensityMatrix::basis_state(int n_qubits, std::uint64_t index) {
    check_qubit_count(n_qubits);
    Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (index >= static_cast<std::uint64_t>(dim)) {
        throw std::invalid_argument("basis index out of range");
    }
    Matrix m = Matrix::Zero(dim, dim);
    m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return DensityMatrix(n_qubits, std::move(m));
}

DensityMatrix DensityMatrix::from_state_vector(const Vector &psi) {
    int n = qubits_for_dim(psi.size());
    double norm = psi.norm();
    if (std::abs(norm - 1.0) > 1e-10) {
        throw std::invalid_argument("state vector is not normalized");
    }
    return DensityMatrix(n, psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    check_qubit_count(n_qubits);
    Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Matrix m = Matrix::Identity(dim, dim) / static_cast<double>(dim);
    return DensityMatrix(n_qubits, std::move(m));
}

DensityMatrix DensityMatrix::from_matrix(Matrix m, double tol) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("density matrix must be square");
    }
    int n = qubits_for_dim(m.rows());
    DensityMatrix out(n, std::move(m));
    if (!out.is_physical(tol)) {
        throw std::invalid_argument("matrix is not a valid density matrix");
    }
    return out;
}

DensityMatrix DensityMatrix::from_matrix_unchecked(int n_qubits, Matrix m) {
    return DensityMatrix(n_qubits, std::move(m));
}

double DensityMatrix::trace() const {
    return m_.trace().real();
}

double DensityMatrix::purity() const {
    return trace_of_product(m_, m_).real();
}

bool DensityMatrix::is_physical(double tol) const {
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol) {
        return false;
    }
    if (std::abs(m_.trace().real() - 1.0) > tol || std::abs(m_.trace().imag()) > tol) {
        return false;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -tol;
}

bool DensityMatrix::is_pure(double tol) const {
    return std::abs(purity() - 1.0) <= tol;
}

cplx pauli_expectation(const Matrix &rho, const PauliString &pauli) {
    if (rho.rows() != (Eigen::Index{1} << pauli.n_qubits())) {
        throw std::invalid_argument("Pauli/state dimension mismatch");
    }
    std::uint64_t bx = pauli.basis_x();
    std::uint64_t bz = pauli.basis_z();
    // P|c> = i^{phase + |x&z|} (-1)^{|z&c|} |c^x>, so Tr[P rho] = sum_c amp(c) rho(c, c^x).
    cplx acc_even = 0;
    cplx acc_odd = 0;
    const auto dim = static_cast<std::uint64_t>(rho.rows());
    for (std::uint64_t c = 0; c < dim; ++c) {
        cplx v = rho(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c ^ bx));
        if (std::popcount(bz & c) & 1) {
            acc_odd += v;
        } else {
            acc_even += v;
        }
    }
    static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    int e = (pauli.phase() + std::popcount(pauli.x_mask() & pauli.z_mask())) % 4;
    return table[e] * (acc_even - acc_odd);
}

double expectation(const Matrix &rho, const Observable &obs) {
    cplx acc = 0;
    for (const auto &t : obs.terms()) {
        acc += t.coeff * pauli_expectation(rho, t.pauli);
    }
    if (std::abs(acc.imag()) > 1e-10) {
        throw std::domain_error("expectation has a non-negligible imaginary part");
    }
    return acc.real();
}

double expectation(const DensityMatrix &state, const Observable &obs) {
    if (state.n_qubits() != obs.n_qubits()) {
        throw std::invalid_argument("observable/state qubit count mismatch");
    }
    return expectation(state.matrix(), obs);
}

cplx trace_of_product(const Matrix &a, const Matrix &b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) {
        throw std::invalid_argument("trace_of_product dimension mismatch");
    }
    return (a.transpose().cwiseProduct(b)).sum();
}

}  // namespace qem
