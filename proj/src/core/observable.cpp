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

#include "qem/core/observable.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qem {

Observable::Observable(int n_qubits, std::vector<PauliTerm> terms) : n_(n_qubits), terms_(std::move(terms)) {
    check_qubit_count(n_qubits);
    if (terms_.empty()) {
        throw std::invalid_argument("observable needs at least one term");
    }
    for (auto &t : terms_) {
        if (t.pauli.n_qubits() != n_) {
            throw std::invalid_argument("observable term size mismatch: " + t.pauli.label());
        }
        if (!t.pauli.is_hermitian()) {
            throw std::invalid_argument("observable term is not Hermitian: " + t.pauli.label());
        }
        if (!std::isfinite(t.coeff)) {
            throw std::invalid_argument("observable coefficient is not finite");
        }
        // Fold a -1 phase into the coefficient so every stored string has phase +1.
        if (t.pauli.phase() == 2) {
            t.coeff = -t.coeff;
            t.pauli = t.pauli.unsigned_part();
        }
    }
}

Observable::Observable(const PauliString &pauli, double coeff) : Observable(pauli.n_qubits(), {{coeff, pauli}}) {
}

Observable Observable::from_labels(const std::vector<std::pair<double, std::string>> &terms) {
    if (terms.empty()) {
        throw std::invalid_argument("observable needs at least one term");
    }
    std::vector<PauliTerm> out;
    for (const auto &[c, label] : terms) {
        out.push_back({c, PauliString::from_label(label)});
    }
    int n = out.front().pauli.n_qubits();
    return Observable(n, std::move(out));
}

bool Observable::is_diagonal() const {
    for (const auto &t : terms_) {
        if (!t.pauli.is_diagonal()) {
            return false;
        }
    }
    return true;
}

double Observable::coefficient_norm() const {
    double s = 0;
    for (const auto &t : terms_) {
        s += std::abs(t.coeff);
    }
    return s;
}

double Observable::spectral_norm() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(to_matrix(), Eigen::EigenvaluesOnly);
    const auto &ev = solver.eigenvalues();
    return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

double Observable::trace() const {
    double dim = std::ldexp(1.0, n_);
    double s = 0;
    for (const auto &t : terms_) {
        if (t.pauli.is_identity()) {
            s += t.coeff * dim;
        }
    }
    return s;
}

Matrix Observable::to_matrix() const {
    Eigen::Index dim = Eigen::Index{1} << n_;
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto &t : terms_) {
        m += t.coeff * t.pauli.to_matrix();
    }
    return m;
}

RealVector Observable::diagonal_spectrum() const {
    if (!is_diagonal()) {
        throw std::invalid_argument("diagonal_spectrum needs an I/Z-only observable");
    }
    Eigen::Index dim = Eigen::Index{1} << n_;
    RealVector spec = RealVector::Zero(dim);
    for (const auto &t : terms_) {
        std::uint64_t bz = t.pauli.basis_z();
        for (Eigen::Index r = 0; r < dim; ++r) {
            int parity = std::popcount(bz & static_cast<std::uint64_t>(r)) & 1;
            spec(r) += parity ? -t.coeff : t.coeff;
        }
    }
    return spec;
}

}  // namespace qem
