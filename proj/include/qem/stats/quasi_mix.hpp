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
#include <functional>
#include <span>
#include <vector>

#include "qem/core/random.hpp"
#include "qem/core/types.hpp"

namespace qem {

/// Walker/Vose alias table: O(n) build, O(1) draws from a discrete distribution.
class AliasTable {
   public:
    AliasTable() = default;
    /// Weights must be nonnegative with a positive sum; they need not be normalized.
    explicit AliasTable(std::span<const double> weights);

    std::size_t sample(Rng &rng) const;
    std::size_t size() const {
        return prob_.size();
    }

   private:
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
};

/// A signed combination sum_n alpha_n E[variant_n] sampled as a mixture.
///
/// Each shot picks term n with probability |alpha_n| / A, A = sum |alpha_n|,
/// and returns A * sign(alpha_n) * (one draw of variant_n).
class QuasiMix {
   public:
    using Variant = std::function<double(Rng &)>;
    struct Term {
        double alpha = 0;
        Variant variant;
    };

    explicit QuasiMix(std::vector<Term> terms);

    const std::vector<Term> &terms() const {
        return terms_;
    }
    double one_norm() const {
        return one_norm_;
    }
    /// One shot of the signed mixture estimator.
    double draw(Rng &rng) const;

   private:
    std::vector<Term> terms_;
    double one_norm_ = 0;
    AliasTable table_;
};

/// `shots` independent draws; shot i uses stream.shot(i).
std::vector<double> mc_sample_mix(const QuasiMix &mix, std::size_t shots, const RngStream &stream);

/// C_em = A^2.
double overhead_of_mix(const QuasiMix &mix);

}  // namespace qem
