//
// Copyright 2026 The cpdnes Authors
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
//

#pragma once

#include <cstdint>
#include <limits>

namespace cpdnes {

// SplitMix64. Small, splittable and fully determined by its 64-bit state,
// which lets every (trial, player, iteration) own an independent substream
// without any shared generator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform();

 private:
  std::uint64_t state_;
};

// Finalizer used to derive substream keys.
std::uint64_t mix64(std::uint64_t z);

// Purpose tags keep draws for different mechanisms disjoint.
enum class StreamPurpose : std::uint64_t {
  kCompression = 1,
  kNoise = 2,
};

// Deterministic, order-independent substream for one player at one round.
SplitMix64 substream(std::uint64_t trial_seed, std::uint64_t player,
                     std::uint64_t iteration,
                     StreamPurpose purpose = StreamPurpose::kCompression);

}  // namespace cpdnes
