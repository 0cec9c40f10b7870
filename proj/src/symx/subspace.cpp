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

#include "qem/symx/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qem::symx {

namespace {

// Rotates v so its first non-negligible component is real and positive.
void fix_phase(Eigen::Ref<Vector> v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12) {
            v *= std::conj(v(i)) / std::abs(v(i));
            return;
        }
    }
}

bool lexicographically_greater(const Vector &a, const Vector &b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (std::abs(a(i).real() - b(i).real()) > 1e-12) {
            return a(i).real() > b(i).real();
        }
        if (std::abs(a(i).imag() - b(i).imag()) > 1e-12) {
            return a(i).imag() > b(i).imag();
        }
    }
    return false;
}

Matrix combination(const ExpansionBasis &basis, const Vector &weights) {
    if (static_cast<std::size_t>(weights.size()) != basis.size()) {
        throw std::invalid_argument("one weight per expansion operator is required");
    }
    Matrix gamma = Matrix::Zero(basis.ops.front().rows(), basis.ops.front().cols());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        gamma += weights(static_cast<Eigen::Index>(j)) * basis.ops[j];
    }
    return gamma;
}

}  // namespace

ExpansionBasis ExpansionBasis::from_paulis(const std::vector<PauliString> &paulis, bool prepend_identity) {
    if (paulis.empty() && !prepend_identity) {
        throw std::invalid_argument("expansion basis is empty");
    }
    ExpansionBasis b;
    if (prepend_identity) {
        int n = paulis.empty() ? 0 : paulis.front().n_qubits();
        b.ops.push_back(Matrix::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n));
        b.labels.push_back("I");
    }
    for (const auto &p : paulis) {
        if (p.is_identity() && prepend_identity) {
            continue;
        }
        b.ops.push_back(p.to_matrix());
        b.labels.push_back(p.label());
    }
    b.validate();
    return b;
}

void ExpansionBasis::validate() const {
    if (ops.empty()) {
        throw std::invalid_argument("expansion basis is empty");
    }
    const auto dim = ops.front().rows();
    for (const auto &g : ops) {
        if (g.rows() != dim || g.cols() != dim) {
            throw std::invalid_argument("expansion operators must be square and of equal size");
        }
    }
    const auto m = static_cast<Eigen::Index>(ops.size());
    Matrix gram(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            gram(i, j) = trace_of_product(ops[static_cast<std::size_t>(i)].adjoint(), ops[static_cast<std::size_t>(j)]) /
                         static_cast<double>(dim);
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    double top = es.eigenvalues().maxCoeff();
    if (!(es.eigenvalues().minCoeff() > 1e-10 * std::max(top, 1.0))) {
        throw std::invalid_argument("expansion operators are linearly dependent");
    }
}

SubspaceMatrices build_subspace_matrices(const DensityMatrix &rho, const Observable &h, const ExpansionBasis &basis) {
    basis.validate();
    if (basis.ops.front().rows() != rho.dim() || h.n_qubits() != rho.n_qubits()) {
        throw std::invalid_argument("expansion basis, Hamiltonian and state dimensions differ");
    }
    const Matrix hm = h.to_matrix();
    const auto m = static_cast<Eigen::Index>(basis.size());
    std::vector<Matrix> g_rho;
    std::vector<Matrix> h_g_rho;
    for (const auto &g : basis.ops) {
        g_rho.push_back(g * rho.matrix());
        h_g_rho.push_back(hm * g_rho.back());
    }
    SubspaceMatrices out{Matrix(m, m), Matrix(m, m)};
    for (Eigen::Index i = 0; i < m; ++i) {
        Matrix gi_dag = basis.ops[static_cast<std::size_t>(i)].adjoint();
        for (Eigen::Index j = 0; j < m; ++j) {
            out.hbar(i, j) = trace_of_product(gi_dag, h_g_rho[static_cast<std::size_t>(j)]);
            out.sbar(i, j) = trace_of_product(gi_dag, g_rho[static_cast<std::size_t>(j)]);
        }
    }
    if ((out.hbar - out.hbar.adjoint()).cwiseAbs().maxCoeff() > 1e-10 ||
        (out.sbar - out.sbar.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::logic_error("subspace matrices are not Hermitian");
    }
    out.hbar = (out.hbar + out.hbar.adjoint()) / 2.0;
    out.sbar = (out.sbar + out.sbar.adjoint()) / 2.0;
    return out;
}

GevpSolution solve_gevp(const Matrix &hbar, const Matrix &sbar, double threshold) {
    if (hbar.rows() != hbar.cols() || sbar.rows() != sbar.cols() || hbar.rows() != sbar.rows() || hbar.rows() == 0) {
        throw std::invalid_argument("GEVP matrices must be square, nonempty and of equal size");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> overlap(sbar);
    const RealVector &s = overlap.eigenvalues();
    double top = s.maxCoeff();
    if (s.minCoeff() < -1e-8 * std::max(top, 1.0)) {
        throw std::invalid_argument("overlap matrix is not positive semidefinite");
    }
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (s(k) > threshold * top) {
            keep.push_back(k);
        }
    }
    if (keep.empty() || !(top > 0)) {
        throw std::domain_error("no overlap direction survives the threshold");
    }
    Matrix x(hbar.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        x.col(static_cast<Eigen::Index>(c)) = overlap.eigenvectors().col(keep[c]) / std::sqrt(s(keep[c]));
    }
    Matrix reduced = x.adjoint() * hbar * x;
    reduced = (reduced + reduced.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(reduced);
    GevpSolution sol;
    sol.energies = es.eigenvalues();
    sol.weights = x * es.eigenvectors();
    sol.retained = static_cast<int>(keep.size());
    for (Eigen::Index k = 0; k < sol.weights.cols(); ++k) {
        fix_phase(sol.weights.col(k));
    }
    // Order each degenerate block lexicographically, largest first.
    Eigen::Index start = 0;
    while (start < sol.energies.size()) {
        Eigen::Index end = start + 1;
        while (end < sol.energies.size() &&
               std::abs(sol.energies(end) - sol.energies(start)) <= 1e-10 * std::max(1.0, std::abs(sol.energies(start)))) {
            ++end;
        }
        std::vector<Eigen::Index> order(static_cast<std::size_t>(end - start));
        std::iota(order.begin(), order.end(), start);
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return lexicographically_greater(sol.weights.col(a), sol.weights.col(b));
        });
        Matrix block(sol.weights.rows(), end - start);
        for (std::size_t i = 0; i < order.size(); ++i) {
            block.col(static_cast<Eigen::Index>(i)) = sol.weights.col(order[i]);
        }
        sol.weights.middleCols(start, end - start) = block;
        start = end;
    }
    return sol;
}

DensityMatrix expanded_state(const DensityMatrix &rho, const ExpansionBasis &basis, const Vector &weights) {
    Matrix gamma = combination(basis, weights);
    Matrix out = gamma * rho.matrix() * gamma.adjoint();
    double norm = out.trace().real();
    if (!(norm > 1e-14)) {
        throw std::domain_error("expanded state has zero norm");
    }
    return DensityMatrix::from_matrix_unchecked(rho.n_qubits(), out / norm);
}

double expanded_expectation(const DensityMatrix &rho, const Observable &obs, const ExpansionBasis &basis,
                            const Vector &weights) {
    Matrix gamma = combination(basis, weights);
    Matrix g_rho_gdag = gamma * rho.matrix() * gamma.adjoint();
    double norm = g_rho_gdag.trace().real();
    if (!(norm > 1e-14)) {
        throw std::domain_error("expanded state has zero norm");
    }
    return expectation(g_rho_gdag, obs) / norm;
}

SubspaceResult subspace_expand(const DensityMatrix &rho, const Observable &h, const ExpansionBasis &basis,
                               double threshold) {
    SubspaceMatrices mats = build_subspace_matrices(rho, h, basis);
    SubspaceResult r;
    r.gevp = solve_gevp(mats.hbar, mats.sbar, threshold);
    r.energy = r.gevp.energies(0);
    r.weights = r.gevp.weights.col(0);
    Eigen::SelfAdjointEigenSolver<Matrix> spectrum(h.to_matrix(), Eigen::EigenvaluesOnly);
    r.below_spectrum = r.energy < spectrum.eigenvalues()(0) - 1e-10;
    return r;
}

}  // namespace qem::symx
