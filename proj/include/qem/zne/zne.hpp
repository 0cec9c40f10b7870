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
#include <span>
#include <utility>
#include <vector>

#include "qem/core/circuit.hpp"
#include "qem/core/observable.hpp"
#include "qem/core/random.hpp"
#include "qem/stats/estimator.hpp"

namespace qem::zne {

/// gamma_m = prod_{k != m} lambda_k / (lambda_k - lambda_m). The weights sum to 1
/// and cancel every power lambda^1 .. lambda^{M-1}. A single node is only
/// accepted with `diagnostic` set and yields {1}.
std::vector<double> richardson_coefficients(std::span<const double> nodes, bool diagnostic = false);

/// (sum |gamma_m|)^2.
double richardson_overhead(std::span<const double> nodes);

/// Weights c_m with f(0) = sum_m c_m y_m for a least-squares polynomial of
/// `degree` through the nodes. degree = nodes - 1 reproduces Richardson.
std::vector<double> polynomial_coefficients(std::span<const double> nodes, int degree);

struct ExponentialFit {
    double amplitude = 0;  // zero-noise value, sign included
    double rate = 0;
};

/// value = a e^{-b lambda} by linear regression of log|value| on lambda.
/// All values must be nonzero and share a sign.
ExponentialFit fit_exponential(std::span<const std::pair<double, double>> points);

enum class Model { richardson, polynomial, exponential };

struct ZneConfig {
    std::vector<double> nodes;
    Model model = Model::richardson;
    int degree = 1;  // polynomial model only
    std::size_t shots_per_node = 0;
    bool exact = true;
    BoostMode boost = BoostMode::linear;
};

struct NodeResult {
    double lambda = 0;
    double mean = 0;
    double variance = 0;  // per shot
    std::size_t shots = 0;
};

struct ZneResult {
    EstimatorReport report;
    std::vector<NodeResult> nodes;
};

void validate(const ZneConfig &cfg);

/// Zero-noise estimate from per-node data under cfg.model. Returns the value
/// and the propagated per-shot variance.
std::pair<double, double> extrapolate(const ZneConfig &cfg, std::span<const NodeResult> nodes);

/// Runs each node at its boosted noise level (exactly, or with shots), then
/// extrapolates to zero noise. Node m draws from stream.substream(m).
ZneResult zne_mitigate(const NoisyCircuit &circuit, const Observable &obs, const ZneConfig &cfg,
                       const RngStream &stream);

}  // namespace qem::zne
