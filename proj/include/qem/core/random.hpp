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

#include "qem/core/types.hpp"

namespace qem {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-split random streams.
///
/// A stream is identified by the master seed plus a path of sub-stream ids.
/// Every shot draws from its own generator keyed by (seed, stream, shot index),
/// so results do not depend on how shots are scheduled across threads.
class RngStream {
   public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {
    }

    std::uint64_t seed() const {
        return seed_;
    }

    RngStream substream(std::uint64_t id) const {
        return RngStream(seed_, mix64(stream_ ^ mix64(id + 0x632be59bd9b4e019ULL)));
    }

    Rng shot(std::uint64_t index) const {
        return Rng(mix64(seed_ ^ mix64(stream_ + mix64(index))));
    }

   private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace qem
