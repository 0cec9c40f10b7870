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

#include "qem/cli/config.hpp"
#include "qem/stats/estimator.hpp"

namespace qem::cli {

struct SweepRow {
    std::string method;
    double lambda = 0;
    double mean = 0;
    double variance = 0;
    std::size_t n_shots = 0;
};

struct RunOutput {
    std::vector<EstimatorReport> rows;  // ideal, raw, then one per method block
    std::vector<SweepRow> sweep;
};

/// Executes every method block in order. Simulation errors propagate as
/// std::exception; configuration problems found late throw ConfigError.
RunOutput run_experiment(const ExperimentConfig &cfg);

std::string results_csv(const RunOutput &out);
std::string sweep_csv(const RunOutput &out);

/// Assignment matrix from the config's readout block.
readout::AssignmentMatrix calibrate_from_config(const ExperimentConfig &cfg);

}  // namespace qem::cli
