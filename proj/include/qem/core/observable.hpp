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

#include <string>
#include <utility>
#include <vector>

#include "qem/core/pauli.hpp"
#include "qem/core/types.hpp"

namespace qem {

struct PauliTerm {
    double coeff = 0;
    PauliString pauli;
};

/// Real linear combination of Hermitian Pauli strings.
class Observable {
   public:
    Observable() = default;
    Observable(int n_qubits, std::vector<PauliTerm> terms);
    explicit Observable(const PauliString &pauli, double coeff = 1.0);

    static Observable from_labels(const std::vector<std::pair<double, std::string>> &terms);

    int n_qubits() const {
        return n_;
    }
    const std::vector<PauliTerm> &terms() const {
        return terms_;
    }
    bool is_single_term() const {
        return terms_.size() == 1;
    }
    bool is_diagonal() const;

    /// Sum of |coefficients|, an upper bound on the spectral norm.
    double coefficient_norm() const;
    /// Largest |eigenvalue|, from a dense Hermitian eigensolve.
    double spectral_norm() const;
    /// Tr[O] computed from the identity terms.
    double trace() const;

    Matrix to_matrix() const;
    /// Diagonal of a Z-type observable, indexed by computational basis state.
    RealVector diagonal_spectrum() const;

   private:
    int n_ = 0;
    std::vector<PauliTerm> terms_;
};

}  // namespace qem
