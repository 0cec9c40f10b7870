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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "qem/core/density_matrix.hpp"

namespace qem {

/// What an EstimatorReport's overhead number means.
enum class OverheadKind {
    none,
    variance_ratio,  // measured per-shot variance over raw per-shot variance
    range_ratio,     // squared ratio of estimator ranges (Hoeffding form)
    predicted,       // closed-form prediction for the method
};

std::string to_string(OverheadKind kind);

/// Result of one estimation run.
///
/// `variance` is always the per-shot variance. The variance of `mean` is
/// variance / n_shots; an exact (shot-free) evaluation has n_shots == 0 and
/// contributes no statistical error, so mse = bias^2.
struct EstimatorReport {
    std::string method;
    double mean = 0;
    double variance = 0;
    std::size_t n_shots = 0;
    std::optional<double> reference;
    std::optional<double> bias;
    std::optional<double> mse;
    std::optional<double> overhead;
    OverheadKind overhead_kind = OverheadKind::none;
    std::uint64_t seed = 0;

    /// Sets reference, bias and mse together so the decomposition always holds.
    void set_reference(double ref);
    void set_overhead(double value, OverheadKind kind) {
        overhead = value;
        overhead_kind = kind;
    }
};

/// Sample mean and unbiased per-shot variance. Needs at least two samples.
EstimatorReport summarize(std::span<const double> samples, std::optional<double> reference = std::nullopt);

/// Report for a value computed exactly from the density matrix.
EstimatorReport exact_report(double value, double per_shot_variance = 0,
                             std::optional<double> reference = std::nullopt);

/// C_em = var_em / var_raw.
double sampling_overhead(double var_em, double var_raw);

/// Shots for |estimate - mean| <= epsilon with probability 1 - delta for an
/// estimator confined to an interval of width `range`.
std::size_t hoeffding_samples(double range, double epsilon, double delta);

/// Tr[rho0 rho_em] / Tr[rho0 rho] for a pure ideal state rho0.
double fidelity_boost(const Matrix &rho_em, const Matrix &rho, const Matrix &rho0);

enum class ExtractionMode { postselect, postprocess };
/// boost / sqrt(overhead) (post-processing) or boost / overhead (post-selection).
double extraction_rate(double boost, double overhead, ExtractionMode mode);

/// Fidelity F(rho0, sigma) = <psi0|sigma|psi0> with rho0 = |psi0><psi0| pure.
double fidelity_with_pure(const Matrix &rho0, const Matrix &sigma);

/// Right-hand side of |bias| <= 2 ||O|| sqrt(1 - F(rho0, rho_em)).
double bias_fidelity_bound(double operator_norm, double fidelity);

/// method,n_shots,mean,variance,bias,mse,overhead,seed
std::string csv_header();
std::string to_csv_row(const EstimatorReport &report);

}  // namespace qem
