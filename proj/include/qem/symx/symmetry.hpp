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
#include <vector>

#include "qem/core/circuit.hpp"
#include "qem/core/density_matrix.hpp"
#include "qem/core/observable.hpp"
#include "qem/core/pauli.hpp"
#include "qem/core/random.hpp"
#include "qem/stats/estimator.hpp"

namespace qem::symx {

/// Commuting Pauli symmetries S_i with target eigenvalues s_i = +-1.
struct SymmetrySpec {
    std::vector<PauliString> ops;
    std::vector<int> eigenvalues;

    static SymmetrySpec single(const PauliString &op, int eigenvalue = 1);
    int n_qubits() const;
    /// Throws unless the operators are Hermitian, mutually commuting, and
    /// each eigenvalue is +-1.
    void validate() const;
};

/// prod_i (I + s_i S_i) / 2.
Matrix projector(const SymmetrySpec &sym);

/// The projector as a sum of Pauli strings with real coefficients.
Observable projector_terms(const SymmetrySpec &sym);

/// Pi O Pi expanded over Pauli strings.
Observable projected_observable(const SymmetrySpec &sym, const Observable &obs);

struct PostSelection {
    DensityMatrix state;
    double pass_rate = 0;
    double overhead = 0;  // 1 / pass_rate
};

/// Pi rho Pi / Tr[Pi rho].
PostSelection postselect_state(const DensityMatrix &rho, const Matrix &pi);

struct SvValue {
    double value = 0;
    double pass_rate = 0;
    double overhead = 0;  // pass_rate^-2
};

/// Tr[Pi O Pi rho] / Tr[Pi rho].
SvValue sv_postprocess(const DensityMatrix &rho, const Matrix &pi, const Observable &obs);

enum class SvMode {
    direct,       // measure symmetry and observable together, discard failing shots
    postprocess,  // estimate Tr[Pi O Pi rho] and Tr[Pi rho] separately, take the ratio
};

struct SvShotResult {
    EstimatorReport report;
    double retained_fraction = 0;
};

/// Shot-level symmetry verification of a noisy circuit. Direct mode needs
/// every observable term to commute qubit-wise with every symmetry. Term t
/// draws from stream.substream(t).
SvShotResult sv_shot_mitigate(const NoisyCircuit &c, const SymmetrySpec &sym, const Observable &obs,
                              std::size_t shots, SvMode mode, const RngStream &stream);

}  // namespace qem::symx
