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
#include <string>
#include <vector>

#include "qem/core/circuit.hpp"
#include "qem/core/observable.hpp"
#include "qem/core/random.hpp"
#include "qem/stats/estimator.hpp"

namespace qem::pec {

/// One implementable operation: the ideal gate followed by `post` channels in order.
struct BasisOperation {
    double alpha = 0;
    std::vector<Channel> post;
    std::string label;
};

/// ideal gate = sum_n alpha_n B_n, with gamma = sum_n |alpha_n|.
struct GateDecomposition {
    Gate gate;
    std::vector<BasisOperation> basis;
    double gamma = 1;
};

enum class Basis {
    rewrite,    // {noisy gate, gate followed by the error part alone}; gamma = (1+p)/(1-p)
    inversion,  // noisy gate followed by Pauli insertions drawn from the inverse channel
};

/// Quasi-probabilities of ch^{-1} over Pauli insertions. The returned
/// decomposition targets the identity: ch followed by the insertions.
GateDecomposition invert_pauli_channel(const Channel &ch);

/// Decomposes the ideal gate over operations available on the noisy device.
/// `error` must be a Pauli channel; any identity weight in it is folded into
/// the fault-free part first so p is the non-identity weight.
GateDecomposition decompose_noisy_gate(const Gate &gate, const Channel &error, double p,
                                       Basis basis = Basis::rewrite);

GateDecomposition decompose_location(const Location &loc, Basis basis = Basis::rewrite);

/// Rewrites a location so that only a fraction `residual` of its fault
/// probability remains: (1 - p r) U + p r N U as a combination of U_p and N U.
GateDecomposition partial_decomposition(const Location &loc, double residual);

/// Max entrywise deviation of sum_n alpha_n T(B_n) from T(ideal gate) on the
/// joint support, from brute-force Pauli transfer matrices.
double decomposition_residual(const GateDecomposition &d);

/// prod_m gamma_m^2.
double circuit_overhead(const NoisyCircuit &c, Basis basis = Basis::rewrite);

struct PecConfig {
    std::size_t shots = 0;
    bool exact = false;
    Basis basis = Basis::rewrite;
    bool twirl = false;  // twirl non-Pauli noise instead of rejecting it
    std::size_t max_patterns = std::size_t{1} << 16;
};

/// Quasi-probability estimate of the zero-noise expectation. Exact mode sums
/// every insertion pattern; sampled mode draws one basis operation per
/// location per shot.
EstimatorReport pec_mitigate(const NoisyCircuit &c, const Observable &obs, const PecConfig &cfg,
                             const RngStream &stream);

/// Cancels the same fraction of every location so the residual fault rate is
/// lambda_target.
EstimatorReport partial_pec(const NoisyCircuit &c, const Observable &obs, double lambda_target,
                            const PecConfig &cfg, const RngStream &stream);

/// The signed combination of pattern states, sum_n alpha_n rho_n, from full
/// enumeration. Equals the ideal state for complete cancellation.
Matrix mitigated_state(const NoisyCircuit &c, const PecConfig &cfg);

}  // namespace qem::pec
