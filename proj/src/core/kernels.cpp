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

#include "qem/core/kernels.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>
#include <string>

namespace qem::kernels {

namespace {

constexpr int kMaxGateQubits = 6;

struct Layout {
    std::vector<std::uint64_t> offsets;  // gate index -> basis offset
    std::vector<std::uint64_t> bases;    // basis indices with all target bits clear
};

Layout make_layout(int n_qubits, std::span<const int> targets) {
    int k = static_cast<int>(targets.size());
    Layout l;
    l.offsets.resize(std::size_t{1} << k);
    for (std::size_t g = 0; g < l.offsets.size(); ++g) {
        std::uint64_t off = 0;
        for (int j = 0; j < k; ++j) {
            if ((g >> (k - 1 - j)) & 1) {
                off |= std::uint64_t{1} << (n_qubits - 1 - targets[j]);
            }
        }
        l.offsets[g] = off;
    }
    std::uint64_t target_bits = l.offsets.back();
    std::uint64_t dim = std::uint64_t{1} << n_qubits;
    l.bases.reserve(dim >> k);
    for (std::uint64_t r = 0; r < dim; ++r) {
        if ((r & target_bits) == 0) {
            l.bases.push_back(r);
        }
    }
    return l;
}

// rho -> (U (x) I) rho on the row index.
void left_multiply(Matrix &rho, const Matrix &u, const Layout &l) {
    const std::size_t gdim = l.offsets.size();
    std::array<cplx, std::size_t{1} << kMaxGateQubits> buf{};
    const Eigen::Index dim = rho.cols();
    for (Eigen::Index c = 0; c < dim; ++c) {
        cplx *col = rho.col(c).data();
        for (std::uint64_t b : l.bases) {
            for (std::size_t h = 0; h < gdim; ++h) {
                buf[h] = col[b + l.offsets[h]];
            }
            for (std::size_t g = 0; g < gdim; ++g) {
                cplx acc = 0;
                for (std::size_t h = 0; h < gdim; ++h) {
                    acc += u(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(h)) * buf[h];
                }
                col[b + l.offsets[g]] = acc;
            }
        }
    }
}

// rho -> rho (U (x) I)^dagger on the column index.
void right_multiply_adjoint(Matrix &rho, const Matrix &u, const Layout &l) {
    const std::size_t gdim = l.offsets.size();
    std::array<cplx, std::size_t{1} << kMaxGateQubits> buf{};
    const Eigen::Index dim = rho.rows();
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (std::uint64_t b : l.bases) {
            for (std::size_t h = 0; h < gdim; ++h) {
                buf[h] = rho(r, static_cast<Eigen::Index>(b + l.offsets[h]));
            }
            for (std::size_t g = 0; g < gdim; ++g) {
                cplx acc = 0;
                for (std::size_t h = 0; h < gdim; ++h) {
                    acc += std::conj(u(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(h))) * buf[h];
                }
                rho(r, static_cast<Eigen::Index>(b + l.offsets[g])) = acc;
            }
        }
    }
}

void check_operator(const Matrix &op, std::span<const int> targets) {
    Eigen::Index expect = Eigen::Index{1} << targets.size();
    if (op.rows() != expect || op.cols() != expect) {
        throw std::invalid_argument("operator dimension " + std::to_string(op.rows()) + " does not match " +
                                    std::to_string(targets.size()) + " target(s)");
    }
}

}  // namespace

void check_targets(int n_qubits, std::span<const int> targets) {
    if (targets.empty() || static_cast<int>(targets.size()) > kMaxGateQubits) {
        throw std::invalid_argument("operator must act on 1.." + std::to_string(kMaxGateQubits) + " qubits");
    }
    std::vector<int> sorted(targets.begin(), targets.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("duplicate target qubit");
    }
    if (sorted.front() < 0 || sorted.back() >= n_qubits) {
        throw std::invalid_argument("target qubit out of range");
    }
}

void apply_unitary(Matrix &rho, int n_qubits, const Matrix &u, std::span<const int> targets) {
    check_targets(n_qubits, targets);
    check_operator(u, targets);
    Layout l = make_layout(n_qubits, targets);
    left_multiply(rho, u, l);
    right_multiply_adjoint(rho, u, l);
}

void apply_kraus(Matrix &rho, int n_qubits, std::span<const Matrix> ops, std::span<const int> targets) {
    check_targets(n_qubits, targets);
    if (ops.empty()) {
        throw std::invalid_argument("empty Kraus set");
    }
    Layout l = make_layout(n_qubits, targets);
    if (ops.size() == 1) {
        check_operator(ops[0], targets);
        left_multiply(rho, ops[0], l);
        right_multiply_adjoint(rho, ops[0], l);
        return;
    }
    Matrix acc = Matrix::Zero(rho.rows(), rho.cols());
    Matrix work;
    for (const auto &k : ops) {
        check_operator(k, targets);
        work = rho;
        left_multiply(work, k, l);
        right_multiply_adjoint(work, k, l);
        acc += work;
    }
    rho = std::move(acc);
}

void conjugate_pauli(Matrix &rho, std::uint64_t basis_x, std::uint64_t basis_z) {
    const auto dim = static_cast<std::uint64_t>(rho.rows());
    // (P rho P^dagger)(a, b) = (-1)^{|z & (a^b)|} rho(a^x, b^x); the phase cancels.
    if (basis_x == 0) {
        if (basis_z == 0) {
            return;
        }
        for (std::uint64_t b = 0; b < dim; ++b) {
            for (std::uint64_t a = 0; a < dim; ++a) {
                if (std::popcount(basis_z & (a ^ b)) & 1) {
                    rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *= -1.0;
                }
            }
        }
        return;
    }
    std::uint64_t top = std::uint64_t{1} << (63 - std::countl_zero(basis_x));
    for (std::uint64_t b = 0; b < dim; ++b) {
        for (std::uint64_t a = 0; a < dim; ++a) {
            if (a & top) {
                continue;
            }
            auto ia = static_cast<Eigen::Index>(a);
            auto ib = static_cast<Eigen::Index>(b);
            auto ja = static_cast<Eigen::Index>(a ^ basis_x);
            auto jb = static_cast<Eigen::Index>(b ^ basis_x);
            double s = (std::popcount(basis_z & (a ^ b)) & 1) ? -1.0 : 1.0;
            cplx tmp = rho(ia, ib);
            rho(ia, ib) = s * rho(ja, jb);
            rho(ja, jb) = s * tmp;
        }
    }
}

void apply_pauli_mixture(Matrix &rho, std::span<const WeightedPauli> terms) {
    const auto dim = static_cast<std::uint64_t>(rho.rows());
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto &t : terms) {
        if (t.weight == 0) {
            continue;
        }
        for (std::uint64_t b = 0; b < dim; ++b) {
            for (std::uint64_t a = 0; a < dim; ++a) {
                double s = (std::popcount(t.basis_z & (a ^ b)) & 1) ? -t.weight : t.weight;
                out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                    s * rho(static_cast<Eigen::Index>(a ^ t.basis_x), static_cast<Eigen::Index>(b ^ t.basis_x));
            }
        }
    }
    rho = std::move(out);
}

void depolarize(Matrix &rho, int n_qubits, std::span<const int> targets, double p) {
    check_targets(n_qubits, targets);
    if (p == 0) {
        return;
    }
    Layout l = make_layout(n_qubits, targets);
    const std::size_t gdim = l.offsets.size();
    const double inv = 1.0 / static_cast<double>(gdim);
    // Tr_S[rho] (x) I_S / 2^|S| only touches blocks (b + off_g, b' + off_g).
    for (std::uint64_t bc : l.bases) {
        for (std::uint64_t br : l.bases) {
            cplx partial = 0;
            for (std::size_t g = 0; g < gdim; ++g) {
                partial += rho(static_cast<Eigen::Index>(br + l.offsets[g]), static_cast<Eigen::Index>(bc + l.offsets[g]));
            }
            for (std::size_t g = 0; g < gdim; ++g) {
                for (std::size_t h = 0; h < gdim; ++h) {
                    auto r = static_cast<Eigen::Index>(br + l.offsets[g]);
                    auto c = static_cast<Eigen::Index>(bc + l.offsets[h]);
                    rho(r, c) *= (1.0 - p);
                    if (g == h) {
                        rho(r, c) += p * inv * partial;
                    }
                }
            }
        }
    }
}

WeightedPauli embed(const PauliString &local, int n_qubits, std::span<const int> targets, double weight) {
    if (local.n_qubits() != static_cast<int>(targets.size())) {
        throw std::invalid_argument("Pauli support does not match targets");
    }
    WeightedPauli w;
    w.weight = weight;
    for (std::size_t j = 0; j < targets.size(); ++j) {
        std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - targets[j]);
        if ((local.x_mask() >> j) & 1) {
            w.basis_x |= bit;
        }
        if ((local.z_mask() >> j) & 1) {
            w.basis_z |= bit;
        }
    }
    return w;
}

}  // namespace qem::kernels
