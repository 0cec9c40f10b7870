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
#include <string>
#include <string_view>

#include "qem/core/types.hpp"

namespace qem {

/// An n-qubit Pauli operator i^phase * P_0 (x) P_1 (x) ... (x) P_{n-1}.
///
/// Bit q of x_mask / z_mask refers to qubit q. Qubit 0 is the leftmost
/// character of a label and the most significant bit of a computational
/// basis index, so "ZI" acts on the high bit of |10>.
///
/// The single-qubit factor for (x, z) = (1, 1) is Y, not XZ.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(int n_qubits);
    PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask, int phase = 0);

    /// Parses labels like "XZI", "-YY", "+iZ", "I_Z" ('_' is identity).
    static PauliString from_label(std::string_view label);
    static PauliString single(int n_qubits, int qubit, char op);

    int n_qubits() const {
        return n_;
    }
    std::uint64_t x_mask() const {
        return x_;
    }
    std::uint64_t z_mask() const {
        return z_;
    }
    /// Power of i in the overall phase, in [0, 4).
    int phase() const {
        return phase_;
    }
    cplx phase_factor() const;

    char op(int qubit) const;
    int weight() const;
    bool is_identity() const {
        return x_ == 0 && z_ == 0;
    }
    bool is_hermitian() const {
        return phase_ % 2 == 0;
    }
    /// True when every factor is I or Z.
    bool is_diagonal() const {
        return x_ == 0;
    }

    /// Masks re-indexed so bit positions match computational basis indices.
    std::uint64_t basis_x() const;
    std::uint64_t basis_z() const;

    /// Same operator with the phase dropped to +1.
    PauliString unsigned_part() const {
        return PauliString(n_, x_, z_, 0);
    }

    bool commutes_with(const PauliString &other) const;
    /// Factor-by-factor commutation; required for simultaneous product-basis readout.
    bool qubitwise_commutes_with(const PauliString &other) const;

    PauliString operator*(const PauliString &other) const;
    bool operator==(const PauliString &other) const = default;

    Matrix to_matrix() const;
    std::string label() const;

    /// Amplitude w with P|r> = w |r ^ basis_x()>, for basis index r.
    cplx amplitude(std::uint64_t r) const;

   private:
    int n_ = 0;
    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
    int phase_ = 0;
};

/// Sign (+1 or -1) of the symplectic product; +1 iff the two strings commute.
int commutation_sign(std::uint64_t x1, std::uint64_t z1, std::uint64_t x2, std::uint64_t z2);

}  // namespace qem
