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

#include "qem/cli/compare.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "qem/stats/estimator.hpp"

namespace qem::cli {

namespace {

// Splits one RFC-4180 record. Quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_record(const std::string &line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": unterminated quote");
    }
    fields.push_back(std::move(cur));
    return fields;
}

double to_number(const std::string &s, const char *column, std::size_t line_no) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (s.empty() || used != s.size()) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": column '" + column +
                                    "' is not a number: '" + s + "'");
    }
    return v;
}

std::optional<double> to_optional(const std::string &s, const char *column, std::size_t line_no) {
    if (s.empty()) {
        return std::nullopt;
    }
    return to_number(s, column, line_no);
}

std::string show(const std::optional<double> &v) {
    return v ? fmt::format("{:.6g}", *v) : std::string("-");
}

}  // namespace

std::vector<CompareRow> parse_results(const std::string &csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<CompareRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (!header_seen) {
            if (line != csv_header()) {
                throw std::invalid_argument("unexpected header; expected '" + csv_header() + "'");
            }
            header_seen = true;
            continue;
        }
        auto f = split_record(line, line_no);
        if (f.size() != 8) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 8 fields, found " +
                                        std::to_string(f.size()));
        }
        CompareRow r;
        r.method = f[0];
        if (r.method.empty()) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": empty method name");
        }
        double shots = to_number(f[1], "n_shots", line_no);
        if (shots < 0 || shots != static_cast<double>(static_cast<std::size_t>(shots))) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": n_shots must be a count");
        }
        r.n_shots = static_cast<std::size_t>(shots);
        r.mean = to_number(f[2], "mean", line_no);
        r.variance = to_number(f[3], "variance", line_no);
        r.bias = to_optional(f[4], "bias", line_no);
        r.mse = to_optional(f[5], "mse", line_no);
        r.predicted_overhead = to_optional(f[6], "overhead", line_no);
        to_number(f[7], "seed", line_no);
        rows.push_back(std::move(r));
    }
    if (!header_seen) {
        throw std::invalid_argument("results file is empty");
    }
    if (rows.empty()) {
        throw std::invalid_argument("results file has no rows");
    }
    return rows;
}

void rank_rows(std::vector<CompareRow> &rows) {
    auto raw = std::find_if(rows.begin(), rows.end(), [](const CompareRow &r) { return r.method == "raw"; });
    std::optional<double> raw_var;
    if (raw != rows.end() && raw->variance > 0) {
        raw_var = raw->variance;
    }
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].measured_overhead.reset();
        rows[i].mse_rank = 0;
        if (rows[i].method == "ideal") {
            continue;
        }
        if (raw_var) {
            rows[i].measured_overhead = rows[i].variance / *raw_var;
        }
        if (rows[i].mse) {
            order.push_back(i);
        }
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return *rows[a].mse < *rows[b].mse; });
    for (std::size_t k = 0; k < order.size(); ++k) {
        rows[order[k]].mse_rank = static_cast<int>(k + 1);
    }
}

std::string format_comparison(const std::vector<CompareRow> &rows) {
    std::size_t width = 6;
    for (const auto &r : rows) {
        width = std::max(width, r.method.size());
    }
    std::string out = fmt::format("{:<{}}  {:>8}  {:>12}  {:>12}  {:>12}  {:>12}  {:>12}  {:>12}\n", "method", width,
                                  "n_shots", "mean", "bias", "variance", "mse", "pred_ovh", "meas_ovh");
    for (const auto &r : rows) {
        out += fmt::format("{:<{}}  {:>8}  {:>12.6g}  {:>12}  {:>12.6g}  {:>12}  {:>12}  {:>12}\n", r.method, width,
                           r.n_shots, r.mean, show(r.bias), r.variance, show(r.mse), show(r.predicted_overhead),
                           show(r.measured_overhead));
    }
    std::vector<const CompareRow *> ranked;
    for (const auto &r : rows) {
        if (r.mse_rank > 0) {
            ranked.push_back(&r);
        }
    }
    std::sort(ranked.begin(), ranked.end(), [](const CompareRow *a, const CompareRow *b) { return a->mse_rank < b->mse_rank; });
    out += "\nranking by mse (bias^2 + variance / n_shots):\n";
    for (const auto *r : ranked) {
        out += fmt::format("  {}. {}  mse={:.6g}\n", r->mse_rank, r->method, *r->mse);
    }
    return out;
}

}  // namespace qem::cli
