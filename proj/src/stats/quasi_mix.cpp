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

#include "qem/stats/quasi_mix.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "qem/core/parallel.hpp"

namespace qem {

AliasTable::AliasTable(std::span<const double> weights) {
    const std::size_t n = weights.size();
    if (n == 0) {
        throw std::invalid_argument("alias table needs at least one weight");
    }
    double total = 0;
    for (double w : weights) {
        if (!(w >= 0) || !std::isfinite(w)) {
            throw std::invalid_argument("alias table weights must be finite and nonnegative");
        }
        total += w;
    }
    if (!(total > 0)) {
        throw std::invalid_argument("alias table weights sum to zero");
    }
    prob_.assign(n, 1.0);
    alias_.resize(n);
    std::vector<double> scaled(n);
    std::vector<std::size_t> small;
    std::vector<std::size_t> large;
    for (std::size_t i = 0; i < n; ++i) {
        alias_[i] = i;
        scaled[i] = weights[i] * static_cast<double>(n) / total;
        (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
        std::size_t s = small.back();
        small.pop_back();
        std::size_t l = large.back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    // Leftovers are 1 up to rounding.
    for (std::size_t i : small) {
        prob_[i] = 1.0;
    }
    for (std::size_t i : large) {
        prob_[i] = 1.0;
    }
}

std::size_t AliasTable::sample(Rng &rng) const {
    std::size_t column = std::uniform_int_distribution<std::size_t>(0, prob_.size() - 1)(rng);
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    return u < prob_[column] ? column : alias_[column];
}

QuasiMix::QuasiMix(std::vector<Term> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) {
        throw std::invalid_argument("a quasi-probability mix needs at least one term");
    }
    std::vector<double> weights;
    weights.reserve(terms_.size());
    for (const auto &t : terms_) {
        if (!t.variant) {
            throw std::invalid_argument("mix term has no variant");
        }
        weights.push_back(std::abs(t.alpha));
        one_norm_ += std::abs(t.alpha);
    }
    table_ = AliasTable(weights);
}

double QuasiMix::draw(Rng &rng) const {
    const auto &t = terms_[table_.sample(rng)];
    double sign = t.alpha < 0 ? -1.0 : 1.0;
    return one_norm_ * sign * t.variant(rng);
}

std::vector<double> mc_sample_mix(const QuasiMix &mix, std::size_t shots, const RngStream &stream) {
    if (shots == 0) {
        throw std::invalid_argument("mc_sample_mix needs at least one shot");
    }
    std::vector<double> out(shots);
    parallel_for(shots, [&](std::size_t i) {
        Rng rng = stream.shot(i);
        out[i] = mix.draw(rng);
    });
    return out;
}

double overhead_of_mix(const QuasiMix &mix) {
    return mix.one_norm() * mix.one_norm();
}

}  // namespace qem
