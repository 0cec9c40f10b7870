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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qem/core/circuit.hpp"
#include "qem/core/observable.hpp"
#include "qem/learn/learn.hpp"
#include "qem/pec/pec.hpp"
#include "qem/readout/readout.hpp"
#include "qem/symx/symmetry.hpp"
#include "qem/zne/zne.hpp"

namespace qem::cli {

/// Invalid or incomplete experiment configuration (exit code 2).
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// One entry of "methods". Only the fields of the named method are used.
struct MethodBlock {
    std::string name;   // raw, zne, pec, readout, sv, subspace, vd, ev, learn
    std::string label;  // CSV method column

    zne::ZneConfig zne;

    pec::Basis pec_basis = pec::Basis::rewrite;
    std::optional<double> lambda_target;
    bool twirl = false;
    std::size_t max_patterns = std::size_t{1} << 16;

    std::string assignment_path;  // empty: calibrate from the readout block
    bool ibu = false;
    int ibu_iterations = 100;

    std::optional<symx::SymmetrySpec> symmetry;
    symx::SvMode sv_mode = symx::SvMode::postprocess;

    std::vector<PauliString> expansion;
    std::optional<Observable> hamiltonian;
    double threshold = 1e-10;

    int copies = 2;

    learn::LearnConfig learn;
};

struct ReadoutSpec {
    std::vector<Channel> channels;
    readout::AssignmentMatrix::Form mode = readout::AssignmentMatrix::Form::full;
};

struct ExperimentConfig {
    NoisyCircuit circuit;
    Observable observable;
    std::vector<MethodBlock> methods;
    std::optional<ReadoutSpec> readout;
    bool exact = true;
    std::size_t shots = 0;
    std::uint64_t seed = 0;
    std::string base_dir;  // for relative paths inside method blocks
};

/// Parses and validates an experiment document. Throws ConfigError.
ExperimentConfig parse_config(const std::string &text, const std::string &base_dir = ".");

ExperimentConfig load_config(const std::string &path);

/// Builds one error channel from its JSON description.
Channel parse_channel(const nlohmann::json &j, const std::vector<int> &default_targets, int n_qubits);

Observable parse_observable(const nlohmann::json &j, int n_qubits);

}  // namespace qem::cli
