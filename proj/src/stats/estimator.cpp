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

#include "qem/stats/estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "qem/core/parallel.hpp"

namespace qem {

std::string to_string(OverheadKind kind) {
    switch (kind) {
        case OverheadKind::none:
            return "none";
        case OverheadKind::variance_ratio:
            return "variance_ratio";
        case OverheadKind::range_ratio:
            return "range_ratio";
        case OverheadKind::predicted:
            return "predicted";
    }
    return "none";
}

void EstimatorReport::set_reference(double ref) {
    reference = ref;
    bias = mean - ref;
    double stat = n_shots > 0 ? variance / static_cast<double>(n_shots) : 0.0;
    mse = (*bias) * (*bias) + stat;
}

EstimatorReport summarize(std::span<const double> samples, std::optional<double> reference) {
    if (samples.size() < 2) {
        throw std::invalid_argument("summarize needs at least two samples");
    }
    double n = static_cast<double>(samples.size());
    double mean = pairwise_sum(samples) / n;
    std::vector<double> dev(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double d = samples[i] - mean;
        dev[i] = d * d;
    }
    EstimatorReport r;
    r.mean = mean;
    r.variance = pairwise_sum(dev) / (n - 1.0);
    r.n_shots = samples.size();
    if (reference) {
        r.set_reference(*reference);
    }
    return r;
}

EstimatorReport exact_report(double value, double per_shot_variance, std::optional<double> reference) {
    EstimatorReport r;
    r.mean = value;
    r.variance = per_shot_variance;
    r.n_shots = 0;
    if (reference) {
        r.set_reference(*reference);
    }
    return r;
}

double sampling_overhead(double var_em, double var_raw) {
    if (!(var_raw > 0)) {
        throw std::invalid_argument("raw variance must be positive");
    }
    return var_em / var_raw;
}

std::size_t hoeffding_samples(double range, double epsilon, double delta) {
    if (range < 0 || !(epsilon > 0) || !(delta > 0) || !(delta < 1)) {
        throw std::invalid_argument("hoeffding_samples needs range >= 0, epsilon > 0, 0 < delta < 1");
    }
    double n = std::log(2.0 / delta) * range * range / (2.0 * epsilon * epsilon);
    return static_cast<std::size_t>(std::ceil(n));
}

double fidelity_with_pure(const Matrix &rho0, const Matrix &sigma) {
    return trace_of_product(rho0, sigma).real();
}

double fidelity_boost(const Matrix &rho_em, const Matrix &rho, const Matrix &rho0) {
    double purity = trace_of_product(rho0, rho0).real();
    if (std::abs(purity - 1.0) > 1e-10) {
        throw std::invalid_argument("fidelity_boost needs a pure ideal state");
    }
    double denom = fidelity_with_pure(rho0, rho);
    if (std::abs(denom) < 1e-15) {
        throw std::domain_error("noisy state has zero overlap with the ideal state");
    }
    return fidelity_with_pure(rho0, rho_em) / denom;
}

double extraction_rate(double boost, double overhead, ExtractionMode mode) {
    if (!(overhead >= 1.0)) {
        throw std::invalid_argument("sampling overhead must be at least 1");
    }
    switch (mode) {
        case ExtractionMode::postprocess:
            return boost / std::sqrt(overhead);
        case ExtractionMode::postselect:
            return boost / overhead;
    }
    throw std::invalid_argument("unknown extraction mode");
}

double bias_fidelity_bound(double operator_norm, double fidelity) {
    return 2.0 * operator_norm * std::sqrt(std::max(0.0, 1.0 - fidelity));
}

std::string csv_header() {
    return "method,n_shots,mean,variance,bias,mse,overhead,seed";
}

std::string to_csv_row(const EstimatorReport &r) {
    auto opt = [](const std::optional<double> &v) { return v ? fmt::format("{:.17g}", *v) : std::string(); };
    std::string method = r.method;
    if (method.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : method) {
            quoted += c;
            if (c == '"') {
                quoted += '"';
            }
        }
        method = quoted + "\"";
    }
    return fmt::format("{},{},{:.17g},{:.17g},{},{},{},{}", method, r.n_shots, r.mean, r.variance, opt(r.bias),
                       opt(r.mse), opt(r.overhead), r.seed);
}

}  // namespace qem
