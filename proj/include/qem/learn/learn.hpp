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

namespace qem::learn {

struct TrainingPair {
    double ideal = 0;  // E0(T), noiseless
    double noisy = 0;  // E(T)
    std::string descriptor;
};

struct TrainingSet {
    std::vector<TrainingPair> pairs;
};

/// Copies of `c` in which every single-qubit gate is replaced by a uniformly
/// random single-qubit Clifford; error channels and fault probabilities are
/// kept. Throws if a multi-qubit gate is not Clifford.
std::vector<NoisyCircuit> make_clifford_variants(const NoisyCircuit &c, std::size_t count, Rng &rng);

/// Every assignment of the 24 Cliffords to the single-qubit gates, in
/// lexicographic order. Capped at 24^3 variants.
std::vector<NoisyCircuit> exhaustive_clifford_variants(const NoisyCircuit &c);

/// Ideal and noisy expectations of each variant, exact. With truncate_top > 0
/// only the pairs with the largest |ideal| are kept.
TrainingSet build_training_set(const std::vector<NoisyCircuit> &variants, const Observable &obs,
                               std::size_t truncate_top = 0);

struct RescaleShift {
    double theta0 = 0;
    double theta1 = 1;
    double apply(double noisy) const {
        return theta0 + theta1 * noisy;
    }
};

/// Ordinary least squares for E0 = theta0 + theta1 E.
RescaleShift fit_rescale_shift(const TrainingSet &ts);

/// (noisy - (1 - P0) Tr[O] / 2^N) / P0.
double depolarizing_rescale(double p0, const Observable &obs, double noisy);

/// How the maximally mixed part enters the purity of
/// P0 rho0 + (1 - P0) I / 2^N.
enum class PurityConvention {
    exact_mixture,  // Tr[rho^2] = P0^2 + P0 (1 - P0) / 2^{N-1} + (1 - P0)^2 / 2^N
    as_published,   // same, with the last term over 2^{2N}
};

double purity_from_P0(double p0, int n_qubits, PurityConvention conv = PurityConvention::exact_mixture);

/// Larger root of the purity quadratic. Throws below the P0 = 0 floor.
double purity_estimate_P0(double purity, int n_qubits, PurityConvention conv = PurityConvention::exact_mixture);

struct LearnConfig {
    std::size_t train_count = 16;
    std::size_t truncate_top = 0;
    bool exhaustive = false;
    bool exact = true;
    std::size_t shots = 0;  // per circuit in sampled mode
};

struct LearnResult {
    EstimatorReport report;
    RescaleShift fit;
    TrainingSet training;
};

/// Fits theta on Clifford variants of `c` and applies it to the primary.
LearnResult learn_mitigate(const NoisyCircuit &c, const Observable &obs, const LearnConfig &cfg,
                           const RngStream &stream);

}  // namespace qem::learn
