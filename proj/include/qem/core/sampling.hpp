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

#include "qem/core/density_matrix.hpp"
#include "qem/core/observable.hpp"

namespace qem {

/// One Born-rule measurement of a single-term observable c*P: returns +c or -c.
/// Throws for composite observables; decompose them first.
double sample_shot(const DensityMatrix &state, const Observable &obs, Rng &rng);

/// One shot of a composite observable: every term is measured on its own
/// fresh copy of the state and the outcomes are summed with their coefficients.
double sample_observable_shot(const DensityMatrix &state, const Observable &obs, Rng &rng);

/// Per-shot variance of sample_observable_shot: sum_k c_k^2 (1 - <P_k>^2).
double shot_variance(const DensityMatrix &state, const Observable &obs);

/// Draws +1 with probability (1 + mean) / 2, else -1.
double sample_pm1(double mean, Rng &rng);

}  // namespace qem
