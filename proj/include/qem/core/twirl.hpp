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

#include "qem/core/channel.hpp"

namespace qem {

/// Average of P^dagger E(P . P^dagger) P over the Pauli group on the channel's
/// support. The result is a stochastic Pauli channel whose probabilities are
/// the diagonal of the channel's chi matrix. Supports of 1 or 2 qubits only.
Channel pauli_twirl(const Channel &ch);

}  // namespace qem
