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

#include "qem/core/twirl.hpp"

#include <stdexcept>

namespace qem {

Channel pauli_twirl(const Channel &ch) {
    int k = ch.support_size();
    if (k < 1 || k > 2) {
        throw std::invalid_argument("pauli_twirl supports 1- and 2-qubit channels only");
    }
    if (ch.is_pauli()) {
        return ch;
    }
    // Twirling keeps the transfer-matrix diagonal and zeroes everything else.
    RealMatrix ptm = ch.transfer_matrix();
    std::vector<double> fid(static_cast<std::size_t>(ptm.rows()));
    for (Eigen::Index i = 0; i < ptm.rows(); ++i) {
        fid[static_cast<std::size_t>(i)] = ptm(i, i);
    }
    auto probs = probabilities_from_fidelities(fid, k);
    std::vector<PauliProbability> out;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 1e-15) {
            out.push_back({pauli_from_index(k, i), probs[i]});
        }
    }
    return Channel::from_pauli(std::move(out), ch.targets(), 1e-9);
}

}  // namespace qem
