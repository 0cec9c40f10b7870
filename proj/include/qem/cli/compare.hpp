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

#include <optional>
#include <string>
#include <vector>

namespace qem::cli {

struct CompareRow {
    std::string method;
    std::size_t n_shots = 0;
    double mean = 0;
    double variance = 0;
    std::optional<double> bias;
    std::optional<double> mse;
    std::optional<double> predicted_overhead;
    std::optional<double> measured_overhead;  // variance over the raw row's variance
    int mse_rank = 0;                         // 1 = smallest MSE; 0 when MSE is missing
};

/// Reads results.csv text. Throws std::invalid_argument on malformed input.
std::vector<CompareRow> parse_results(const std::string &csv_text);

/// Fills measured overhead and MSE ranks.
void rank_rows(std::vector<CompareRow> &rows);

/// Plain-text table of the rows, in file order, followed by the MSE ranking.
std::string format_comparison(const std::vector<CompareRow> &rows);

}  // namespace qem::cli
