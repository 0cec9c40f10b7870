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

#include "qem/purify/purify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qem::purify {

namespace {

Matrix matrix_power(const Matrix &rho, int m) {
    Matrix out = rho;
    for (int k = 1; k < m; ++k) {
        out = out * rho;
    }
    return out;
}

}  // namespace

PurifiedEstimate vd_expectation(const DensityMatrix &rho, const Observable &obs, int copies) {
    if (copies < 1) {
        throw std::invalid_argument("virtual distillation needs at least one copy");
    }
    Matrix power = matrix_power(rho.matrix(), copies);
    double tr = power.trace().real();
    if (!(tr > 1e-14)) {
        throw std::domain_error("Tr[rho^M] vanishes");
    }
    return {expectation(power, obs) / tr, copies, tr, 1.0 / (tr * tr)};
}

double vd_swap_check(const DensityMatrix &rho, const Observable &obs, int copies) {
    const int n = rho.n_qubits();
    if (copies < 1) {
        throw std::invalid_argument("virtual distillation needs at least one copy");
    }
    if (copies * n > 12) {
        throw std::invalid_argument("cyclic-shift check is limited to copies * qubits <= 12");
    }
    const int total = copies * n;
    const std::uint64_t dim = std::uint64_t{1} << total;
    const std::uint64_t local = std::uint64_t{1} << n;
    // Copy c occupies bits [(copies-1-c) n, (copies-c) n) of the joint index.
    auto copy_of = [&](std::uint64_t joint, int c) {
        return (joint >> ((copies - 1 - c) * n)) & (local - 1);
    };
    // Shift of one qubit position across the copies: copy c takes copy c+1's bit.
    auto qubit_shift = [&](std::uint64_t joint, int q) {
        std::uint64_t out = joint;
        for (int c = 0; c < copies; ++c) {
            int src = (c + 1) % copies;
            int bit_dst = (copies - 1 - c) * n + (n - 1 - q);
            int bit_src = (copies - 1 - src) * n + (n - 1 - q);
            out &= ~(std::uint64_t{1} << bit_dst);
            out |= ((joint >> bit_src) & 1) << bit_dst;
        }
        return out;
    };
    std::vector<std::uint64_t> perm(dim);
    for (std::uint64_t j = 0; j < dim; ++j) {
        std::uint64_t v = j;
        for (int q = 0; q < n; ++q) {
            v = qubit_shift(v, q);
        }
        perm[j] = v;
    }
    // <I| S A |I> = A(J, I) with S|J> = |I>, i.e. J = perm^{-1}(I).
    std::vector<std::uint64_t> inverse(dim);
    for (std::uint64_t j = 0; j < dim; ++j) {
        inverse[perm[j]] = j;
    }
    const Matrix first = obs.to_matrix() * rho.matrix();
    const Matrix &r = rho.matrix();
    cplx acc = 0;
    for (std::uint64_t i = 0; i < dim; ++i) {
        std::uint64_t j = inverse[i];
        cplx term = first(static_cast<Eigen::Index>(copy_of(j, 0)), static_cast<Eigen::Index>(copy_of(i, 0)));
        for (int c = 1; c < copies && term != cplx(0); ++c) {
            term *= r(static_cast<Eigen::Index>(copy_of(j, c)), static_cast<Eigen::Index>(copy_of(i, c)));
        }
        acc += term;
    }
    if (std::abs(acc.imag()) > 1e-10) {
        throw std::domain_error("cyclic-shift trace has a non-negligible imaginary part");
    }
    return acc.real();
}

PurifiedEstimate echo_verification(const DensityMatrix &rho, const DensityMatrix &rho_bar, const Observable &obs) {
    if (rho.dim() != rho_bar.dim()) {
        throw std::invalid_argument("echo verification states differ in size");
    }
    double overlap = trace_of_product(rho_bar.matrix(), rho.matrix()).real();
    if (!(overlap > 1e-14)) {
        throw std::domain_error("forward and echo states have vanishing overlap");
    }
    Matrix sym = rho_bar.matrix() * rho.matrix() + rho.matrix() * rho_bar.matrix();
    return {expectation(sym, obs) / (2.0 * overlap), 2, overlap, 1.0 / overlap};
}

PurifiedEstimate echo_verification(const DensityMatrix &rho, const Observable &obs) {
    return echo_verification(rho, rho, obs);
}

McWeenyResult mcweeny(const Matrix &d, double tol, int max_iter) {
    if (d.rows() != d.cols()) {
        throw std::invalid_argument("McWeeny purification needs a square matrix");
    }
    if ((d - d.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("McWeeny purification needs a Hermitian matrix");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
    const RealVector &ev = es.eigenvalues();
    if (ev.minCoeff() < -0.1 || ev.maxCoeff() > 1.1) {
        throw std::domain_error("McWeeny purification needs eigenvalues in [-0.1, 1.1]");
    }
    McWeenyResult r;
    r.d = d;
    auto residual = [](const Matrix &m) { return (m * m - m).norm(); };
    r.residual = residual(r.d);
    if (((ev.array() - 0.5).abs() <= 1e-10).any()) {
        return r;
    }
    while (r.residual >= tol) {
        if (r.iterations == max_iter) {
            throw std::runtime_error("McWeeny purification did not converge within " + std::to_string(max_iter) +
                                     " iterations");
        }
        Matrix d2 = r.d * r.d;
        r.d = 3.0 * d2 - 2.0 * d2 * r.d;
        r.d = (r.d + r.d.adjoint()) / 2.0;
        ++r.iterations;
        r.residual = residual(r.d);
    }
    r.converged = true;
    return r;
}

DominantEigen dominant_eigen(const DensityMatrix &rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    const auto n = es.eigenvalues().size();
    DominantEigen out;
    out.p1 = std::max(es.eigenvalues()(n - 1), -1e-10);
    out.p2 = n > 1 ? std::max(es.eigenvalues()(n - 2), -1e-10) : 0.0;
    out.phi1 = es.eigenvectors().col(n - 1);
    return out;
}

double dominant_value(const DensityMatrix &rho, const Observable &obs) {
    Vector phi = dominant_eigen(rho).phi1;
    return (phi.adjoint() * obs.to_matrix() * phi)(0, 0).real();
}

DensityMatrix global_depolarized(const DensityMatrix &rho0, double lambda) {
    if (lambda < 0) {
        throw std::invalid_argument("fault rate must be nonnegative");
    }
    double keep = std::exp(-lambda);
    const auto dim = rho0.dim();
    Matrix m = keep * rho0.matrix() + (1.0 - keep) * Matrix::Identity(dim, dim) / static_cast<double>(dim);
    return DensityMatrix::from_matrix_unchecked(rho0.n_qubits(), std::move(m));
}

double vd_overhead_floor(double lambda, int copies) {
    double denom = 1.0 + std::pow(std::exp(lambda) - 1.0, copies);
    return std::exp(2.0 * copies * lambda) / (denom * denom);
}

double ev_overhead_floor(double lambda) {
    double e = std::exp(lambda) - 1.0;
    return std::exp(2.0 * lambda) / (1.0 + e * e);
}

}  // namespace qem::purify
