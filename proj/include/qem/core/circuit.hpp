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

#include <string>
#include <vector>

#include "qem/core/channel.hpp"
#include "qem/core/density_matrix.hpp"
#include "qem/core/types.hpp"

namespace qem {

/// An ideal unitary on named target qubits.
struct Gate {
    Gate() = default;
    /// Throws if u is not unitary to 1e-10 or its size does not match targets.
    Gate(std::string name, Matrix u, std::vector<int> targets);
    static Gate named(const std::string &name, std::vector<int> targets, std::vector<double> params = {});

    std::string name;
    Matrix unitary;
    std::vector<int> targets;
};

DensityMatrix apply_gate(DensityMatrix state, const Gate &gate);

/// One fault location: an ideal gate followed by an error event.
///
/// The full noise after the gate is (1 - p) * identity + p * error, where
/// `error` is the normalized error part and p = p_fault is supplied by the
/// caller. Noise boosting changes p only, never the shape of `error`.
struct Location {
    Gate gate;
    Channel error;
    double p_fault = 0;

    bool noiseless() const {
        return p_fault == 0;
    }
    /// The full channel (1 - p) id + p error.
    Channel noise() const;
};

/// How noise_scale acts on a location.
///   linear:      p -> scale * p (the error part is unchanged).
///   exponential: each Pauli fidelity f of the full channel becomes f^scale.
///                A depolarizing location of strength p then has strength
///                1 - (1 - p)^scale, so expectation values decay exactly as
///                a power of the fault-free probability. Pauli noise only.
enum class BoostMode { linear, exponential };

class NoisyCircuit {
   public:
    NoisyCircuit() = default;
    explicit NoisyCircuit(int n_qubits);

    int n_qubits() const {
        return n_;
    }
    const std::vector<Location> &locations() const {
        return locations_;
    }
    std::size_t size() const {
        return locations_.size();
    }

    NoisyCircuit &add(Gate gate);
    NoisyCircuit &add(Gate gate, Channel error, double p_fault);
    NoisyCircuit &add(Location loc);

   private:
    int n_ = 0;
    std::vector<Location> locations_;
};

/// lambda = sum of p_f over locations.
double circuit_fault_rate(const NoisyCircuit &c);
/// P0 = prod (1 - p_f).
double fault_free_probability(const NoisyCircuit &c);

/// Full channel of a location at a boosted noise level.
Channel boosted_noise(const Location &loc, double noise_scale, BoostMode mode = BoostMode::linear);

/// Runs from |0...0> applying each gate then its boosted noise. noise_scale 0
/// gives the ideal state; linear mode needs noise_scale * p_f < 1 everywhere.
DensityMatrix run_circuit(const NoisyCircuit &c, double noise_scale = 1.0, BoostMode mode = BoostMode::linear);

/// Noiseless output state.
DensityMatrix ideal_state(const NoisyCircuit &c);

/// Copy of the circuit with every error part replaced by its Pauli twirl.
NoisyCircuit twirl_circuit_noise(const NoisyCircuit &c);

}  // namespace qem
