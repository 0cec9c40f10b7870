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

#include <span>
#include <string>
#include <vector>

#include "qem/core/types.hpp"

namespace qem::gates {

Matrix identity(int n_qubits = 1);
Matrix x();
Matrix y();
Matrix z();
Matrix h();
Matrix s();
Matrix sdg();
Matrix t();
Matrix tdg();
Matrix sx();
Matrix rx(double theta);
Matrix ry(double theta);
Matrix rz(double theta);
Matrix cnot();
Matrix cz();
Matrix swap();

/// Unitary for a gate name ("H", "CNOT", "RZ", ...). Names are case-insensitive.
Matrix by_name(const std::string &name, std::span<const double> params = {});
/// Number of qubits the named gate acts on.
int arity(const std::string &name);

/// The 24 single-qubit Clifford unitaries, one representative per global phase,
/// in a fixed order with the identity first.
const std::vector<Matrix> &single_qubit_cliffords();

/// True if u maps every Pauli to a Pauli (up to sign) under conjugation.
bool is_clifford(const Matrix &u, double tol = 1e-10);

bool is_unitary(const Matrix &u, double tol = 1e-10);

}  // namespace qem::gates
