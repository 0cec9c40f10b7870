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

#include "qem/core/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace qem {

namespace {

std::uint64_t reverse_bits(std::uint64_t mask, int n) {
    std::uint64_t out = 0;
    for (int q = 0; q < n; ++q) {
        if ((mask >> q) & 1) {
            out |= std::uint64_t{1} << (n - 1 - q);
        }
    }
    return out;
}

}  // namespace

void check_qubit_count(int n_qubits) {
    if (n_qubits < 0 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count must be in [0, " + std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(n_qubits));
    }
}

int commutation_sign(std::uint64_t x1, std::uint64_t z1, std::uint64_t x2, std::uint64_t z2) {
    int anti = std::popcount((x1 & z2) ^ (z1 & x2)) & 1;
    return anti ? -1 : 1;
}

PauliString::PauliString(int n_qubits) : PauliString(n_qubits, 0, 0, 0) {
}

PauliString::PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask, int phase)
    : n_(n_qubits), x_(x_mask), z_(z_mask), phase_(((phase % 4) + 4) % 4) {
    if (n_qubits < 0 || n_qubits > 63) {
        throw std::invalid_argument("PauliString qubit count out of range");
    }
    std::uint64_t valid = n_qubits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_qubits) - 1);
    if ((x_mask | z_mask) & ~valid) {
        throw std::invalid_argument("PauliString mask has bits beyond n_qubits");
    }
}

PauliString PauliString::from_label(std::string_view label) {
    int phase = 0;
    if (!label.empty() && (label[0] == '+' || label[0] == '-')) {
        phase = label[0] == '-' ? 2 : 0;
        label.remove_prefix(1);
    }
    if (!label.empty() && label[0] == 'i') {
        phase += 1;
        label.remove_prefix(1);
    }
    int n = static_cast<int>(label.size());
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    for (int q = 0; q < n; ++q) {
        switch (label[q]) {
            case 'I':
            case '_':
                break;
            case 'X':
                x |= std::uint64_t{1} << q;
                break;
            case 'Y':
                x |= std::uint64_t{1} << q;
                z |= std::uint64_t{1} << q;
                break;
            case 'Z':
                z |= std::uint64_t{1} << q;
                break;
            default:
                throw std::invalid_argument("bad Pauli label character '" + std::string(1, label[q]) + "'");
        }
    }
    return PauliString(n, x, z, phase);
}

PauliString PauliString::single(int n_qubits, int qubit, char op) {
    std::string label(n_qubits, 'I');
    if (qubit < 0 || qubit >= n_qubits) {
        throw std::invalid_argument("qubit index out of range");
    }
    label[qubit] = op;
    return from_label(label);
}

cplx PauliString::phase_factor() const {
    static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[phase_];
}

char PauliString::op(int qubit) const {
    bool x = (x_ >> qubit) & 1;
    bool z = (z_ >> qubit) & 1;
    return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
}

int PauliString::weight() const {
    return std::popcount(x_ | z_);
}

std::uint64_t PauliString::basis_x() const {
    return reverse_bits(x_, n_);
}

std::uint64_t PauliString::basis_z() const {
    return reverse_bits(z_, n_);
}

bool PauliString::commutes_with(const PauliString &other) const {
    if (other.n_ != n_) {
        throw std::invalid_argument("Pauli size mismatch");
    }
    return commutation_sign(x_, z_, other.x_, other.z_) == 1;
}

bool PauliString::qubitwise_commutes_with(const PauliString &other) const {
    if (other.n_ != n_) {
        throw std::invalid_argument("Pauli size mismatch");
    }
    for (int q = 0; q < n_; ++q) {
        char a = op(q);
        char b = other.op(q);
        if (a != 'I' && b != 'I' && a != b) {
            return false;
        }
    }
    return true;
}

PauliString PauliString::operator*(const PauliString &other) const {
    if (other.n_ != n_) {
        throw std::invalid_argument("Pauli size mismatch");
    }
    // Write each factor as i^{xz} X^x Z^z; moving Z^{z1} past X^{x2} costs (-1)^{z1.x2}.
    std::uint64_t x = x_ ^ other.x_;
    std::uint64_t z = z_ ^ other.z_;
    int e = phase_ + other.phase_ + std::popcount(x_ & z_) + std::popcount(other.x_ & other.z_) +
            2 * std::popcount(z_ & other.x_) - std::popcount(x & z);
    return PauliString(n_, x, z, e);
}

cplx PauliString::amplitude(std::uint64_t r) const {
    int e = phase_ + std::popcount(x_ & z_) + 2 * std::popcount(basis_z() & r);
    static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[((e % 4) + 4) % 4];
}

Matrix PauliString::to_matrix() const {
    check_qubit_count(n_);
    Eigen::Index dim = Eigen::Index{1} << n_;
    Matrix m = Matrix::Zero(dim, dim);
    std::uint64_t bx = basis_x();
    std::uint64_t bz = basis_z();
    static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    int base = phase_ + std::popcount(x_ & z_);
    for (std::uint64_t r = 0; r < static_cast<std::uint64_t>(dim); ++r) {
        int e = base + 2 * std::popcount(bz & r);
        m(static_cast<Eigen::Index>(r ^ bx), static_cast<Eigen::Index>(r)) = table[e % 4];
    }
    return m;
}

std::string PauliString::label() const {
    std::string out;
    switch (phase_) {
        case 1:
            out = "+i";
            break;
        case 2:
            out = "-";
            break;
        case 3:
            out = "-i";
            break;
        default:
            break;
    }
    for (int q = 0; q < n_; ++q) {
        out.push_back(op(q));
    }
    return out;
}

}  // namespace qem
