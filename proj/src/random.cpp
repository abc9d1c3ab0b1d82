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

#include "cpdnes/random.hpp"

namespace cpdnes {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SplitMix64::result_type SplitMix64::operator()() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double SplitMix64::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

SplitMix64 substream(std::uint64_t trial_seed, std::uint64_t player,
                     std::uint64_t iteration, StreamPurpose purpose) {
  std::uint64_t key = mix64(trial_seed + 0x9e3779b97f4a7c15ULL);
  key = mix64(key ^ (player + 0x632be59bd9b4e019ULL));
  key = mix64(key ^ (iteration + 0x85157af5ULL));
  key = mix64(key ^ static_cast<std::uint64_t>(purpose));
  return SplitMix64(key);
}

}  // namespace cpdnes
