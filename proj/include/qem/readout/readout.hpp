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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qem/core/channel.hpp"
#include "qem/core/density_matrix.hpp"
#include "qem/core/pauli.hpp"
#include "qem/core/types.hpp"

namespace qem::readout {

/// Column-stochastic map from ideal to observed outcome distributions,
/// A(x, y) = Pr[read x | prepared y]. Outcomes are indexed like basis states
/// (qubit 0 is the most significant bit).
class AssignmentMatrix {
   public:
    enum class Form { full, tensor };

    AssignmentMatrix() = default;
    static AssignmentMatrix full(int n_qubits, RealMatrix a);
    /// factors[q] is the 2x2 matrix of qubit q.
    static AssignmentMatrix tensor(std::vector<RealMatrix> factors);

    int n_qubits() const {
        return n_;
    }
    Form form() const {
        return form_;
    }
    const std::vector<RealMatrix> &factors() const {
        return factors_;
    }
    /// The 2^N x 2^N matrix (Kronecker product for the tensor form).
    RealMatrix dense() const;

    /// A p, or A^T p with `transpose`.
    RealVector apply(const RealVector &p, bool transpose = false) const;
    /// Solves A x = b (or A^T x = b) by LU, never forming the inverse.
    RealVector solve(const RealVector &b, bool transpose = false) const;
    /// 2-norm condition number.
    double condition_number() const;

    std::string to_json() const;
    static AssignmentMatrix from_json(const std::string &text);
    void save(const std::string &path) const;
    static AssignmentMatrix load(const std::string &path);

   private:
    void validate() const;

    int n_ = 0;
    Form form_ = Form::full;
    RealMatrix full_;
    std::vector<RealMatrix> factors_;
};

struct ReadoutDistribution {
    RealVector probs;
    bool quasi = false;  // may hold negative entries after inversion
};

/// Diagonal of rho in the computational basis.
ReadoutDistribution measurement_distribution(const DensityMatrix &rho);

/// Empirical distribution of `shots` draws.
ReadoutDistribution sample_counts(const ReadoutDistribution &dist, std::size_t shots, Rng &rng);

/// Prepares every basis state, applies the measurement channels, reads the
/// diagonal. Tensor mode calibrates each qubit on its own with the others in
/// |0>. Throws if an output leaves the computational basis (coherences above
/// 1e-10).
AssignmentMatrix calibrate(std::span<const Channel> meas_channels, int n_qubits,
                           AssignmentMatrix::Form mode);

ReadoutDistribution forward(const AssignmentMatrix &a, const ReadoutDistribution &p);

/// A^{-1} p_noisy; entries may be negative.
ReadoutDistribution invert(const AssignmentMatrix &a, const ReadoutDistribution &p_noisy);

/// O^T A^{-1} p_noisy via one transposed solve A^T y = O.
double mitigated_expectation(const AssignmentMatrix &a, const RealVector &spectrum,
                             const ReadoutDistribution &p_noisy);

struct IbuResult {
    ReadoutDistribution dist;
    int iterations = 0;
    double last_step = 0;  // L1 change of the final update
};

/// Iterative Bayesian unfolding p <- p . A^T (p_noisy / A p) from the uniform
/// start. Stops after `max_iterations` or when the L1 step drops below `tol`.
IbuResult ibu(const AssignmentMatrix &a, const ReadoutDistribution &p_noisy, int max_iterations = 100,
              double tol = 1e-10);

/// R(u, v) = <<Z^u| A |Z^v>>, the readout map in the Z-string basis.
RealMatrix z_transfer_matrix(const AssignmentMatrix &a);

/// Average of X^s A X^s over all bit-flip masks s.
AssignmentMatrix bit_flip_twirl(const AssignmentMatrix &a);

/// D = <<Z^x| twirled A |Z^x>> for a Z-type Pauli string.
double twirl_factor(const AssignmentMatrix &a, const PauliString &z_string);

/// Divides each twirled noisy value by its factor. Throws when |D| < 1e-6.
std::vector<double> twirled_rescale(std::span<const double> factors, std::span<const double> noisy_values);

}  // namespace qem::readout
