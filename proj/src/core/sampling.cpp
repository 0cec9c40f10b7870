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

#include "qem/core/sampling.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace qem {

double sample_pm1(double mean, Rng &rng) {
    double p_plus = std::clamp((1.0 + mean) / 2.0, 0.0, 1.0);
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p_plus ? 1.0 : -1.0;
}

double sample_shot(const DensityMatrix &state, const Observable &obs, Rng &rng) {
    if (!obs.is_single_term()) {
        throw std::invalid_argument("sample_shot takes a single Pauli term; decompose composite observables");
    }
    const auto &term = obs.terms().front();
    double mean = pauli_expectation(state.matrix(), term.pauli).real();
    return term.coeff * sample_pm1(mean, rng);
}

double sample_observable_shot(const DensityMatrix &state, const Observable &obs, Rng &rng) {
    double total = 0;
    for (const auto &t : obs.terms()) {
        if (t.pauli.is_identity()) {
            total += t.coeff;
            continue;
        }
        double mean = pauli_expectation(state.matrix(), t.pauli).real();
        total += t.coeff * sample_pm1(mean, rng);
    }
    return total;
}

double shot_variance(const DensityMatrix &state, const Observable &obs) {
    double v = 0;
    for (const auto &t : obs.terms()) {
        double mean = pauli_expectation(state.matrix(), t.pauli).real();
        v += t.coeff * t.coeff * (1.0 - mean * mean);
    }
    return v;
}

}  // namespace qem
