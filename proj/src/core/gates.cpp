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

#include "qem/core/gates.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qem/core/channel.hpp"
#include "qem/core/pauli.hpp"

namespace qem::gates {

namespace {

const cplx kI{0, 1};

Matrix m2(cplx a, cplx b, cplx c, cplx d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    return s;
}

// Fixes the global phase so the first entry of largest magnitude is real positive.
Matrix canonical_phase(const Matrix &u) {
    Eigen::Index best = 0;
    double mag = -1;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (std::abs(u(i)) > mag + 1e-9) {
            mag = std::abs(u(i));
            best = i;
        }
    }
    cplx phase = u(best) / std::abs(u(best));
    return u / phase;
}

}  // namespace

Matrix identity(int n_qubits) {
    Eigen::Index d = Eigen::Index{1} << n_qubits;
    return Matrix::Identity(d, d);
}

Matrix x() {
    return m2(0, 1, 1, 0);
}
Matrix y() {
    return m2(0, -kI, kI, 0);
}
Matrix z() {
    return m2(1, 0, 0, -1);
}
Matrix h() {
    double r = 1.0 / std::sqrt(2.0);
    return m2(r, r, r, -r);
}
Matrix s() {
    return m2(1, 0, 0, kI);
}
Matrix sdg() {
    return m2(1, 0, 0, -kI);
}
Matrix t() {
    return m2(1, 0, 0, std::exp(kI * (std::numbers::pi / 4)));
}
Matrix tdg() {
    return m2(1, 0, 0, std::exp(-kI * (std::numbers::pi / 4)));
}
Matrix sx() {
    return 0.5 * m2(1.0 + kI, 1.0 - kI, 1.0 - kI, 1.0 + kI);
}
Matrix rx(double theta) {
    double c = std::cos(theta / 2);
    double sn = std::sin(theta / 2);
    return m2(c, -kI * sn, -kI * sn, c);
}
Matrix ry(double theta) {
    double c = std::cos(theta / 2);
    double sn = std::sin(theta / 2);
    return m2(c, -sn, sn, c);
}
Matrix rz(double theta) {
    return m2(std::exp(-kI * (theta / 2)), 0, 0, std::exp(kI * (theta / 2)));
}
Matrix cnot() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
}
Matrix cz() {
    Matrix m = Matrix::Identity(4, 4);
    m(3, 3) = -1;
    return m;
}
Matrix swap() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
    return m;
}

int arity(const std::string &name) {
    std::string n = upper(name);
    if (n == "CNOT" || n == "CX" || n == "CZ" || n == "SWAP") {
        return 2;
    }
    return 1;
}

Matrix by_name(const std::string &name, std::span<const double> params) {
    std::string n = upper(name);
    auto need = [&](std::size_t count) {
        if (params.size() != count) {
            throw std::invalid_argument("gate " + name + " takes " + std::to_string(count) + " parameter(s)");
        }
    };
    if (n == "RX" || n == "RY" || n == "RZ") {
        need(1);
        return n == "RX" ? rx(params[0]) : n == "RY" ? ry(params[0]) : rz(params[0]);
    }
    need(0);
    if (n == "I" || n == "ID") return identity(1);
    if (n == "X") return x();
    if (n == "Y") return y();
    if (n == "Z") return z();
    if (n == "H") return h();
    if (n == "S") return s();
    if (n == "SDG") return sdg();
    if (n == "T") return t();
    if (n == "TDG") return tdg();
    if (n == "SX") return sx();
    if (n == "CNOT" || n == "CX") return cnot();
    if (n == "CZ") return cz();
    if (n == "SWAP") return swap();
    throw std::invalid_argument("unknown gate '" + name + "'");
}

const std::vector<Matrix> &single_qubit_cliffords() {
    static const std::vector<Matrix> group = [] {
        std::vector<Matrix> out{identity(1)};
        const Matrix gens[2] = {h(), s()};
        for (std::size_t i = 0; i < out.size(); ++i) {
            for (const auto &g : gens) {
                Matrix cand = canonical_phase(g * out[i]);
                bool seen = std::any_of(out.begin(), out.end(),
                                        [&](const Matrix &m) { return (m - cand).cwiseAbs().maxCoeff() < 1e-9; });
                if (!seen) {
                    out.push_back(cand);
                }
            }
        }
        if (out.size() != 24) {
            throw std::logic_error("single-qubit Clifford closure did not produce 24 elements");
        }
        return out;
    }();
    return group;
}

bool is_unitary(const Matrix &u, double tol) {
    if (u.rows() != u.cols()) {
        return false;
    }
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool is_clifford(const Matrix &u, double tol) {
    if (!is_unitary(u, tol)) {
        return false;
    }
    int k = std::countr_zero(static_cast<std::uint64_t>(u.rows()));
    double norm = std::ldexp(1.0, -k);
    for (int q = 0; q < k; ++q) {
        for (char op : {'X', 'Z'}) {
            Matrix image = u * PauliString::single(k, q, op).to_matrix() * u.adjoint();
            // A Pauli image has a single Pauli component of unit magnitude.
            bool found = false;
            for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << (2 * k)); ++idx) {
                cplx c = trace_of_product(pauli_from_index(k, idx).to_matrix(), image) * norm;
                if (std::abs(std::abs(c) - 1.0) <= tol) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace qem::gates
