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
#include <optional>
#include <string>
#include <vector>

namespace cpdnes {

// alpha_k = c1 / (c2 k + 1)^omega1,  beta_k = c3 / (c2 k + 1)^omega2.
struct StepSchedule {
  double c1 = 0.4;
  double c2 = 1.0;
  double c3 = 0.4;
  double omega1 = 0.3;
  double omega2 = 0.6;

  double alpha(std::uint64_t k) const;
  double beta(std::uint64_t k) const;
  // Effective decision step alpha_k * beta_k.
  double product(std::uint64_t k) const { return alpha(k) * beta(k); }

  void validate() const;
};

// Condition names reported in ScheduleVerdict::failed_conditions.
inline constexpr const char* kCondSumOmega = "omega1 + omega2 <= 1";
inline constexpr const char* kCondOmega2 = "omega2 > 0.5";
inline constexpr const char* kCondTwoOmega1 = "2 omega1 + omega2 > 1";

struct ScheduleVerdict {
  bool passes = false;
  std::vector<std::string> failed_conditions;
  std::optional<double> rate_exponent;  // min(2 omega1, omega2) iff passes
};

// Exponent form of the summability conditions
//   sum alpha beta = inf, sum alpha^2 beta < inf, sum beta^2 < inf.
ScheduleVerdict check_conditions(const StepSchedule& s);

struct HyperbolicProduct {
  double c4 = 0.0;
  double c5 = 0.0;
};

// (c4, c5) with alpha_k beta_k = c4 / (c5 k + 1), present only when
// omega1 + omega2 == 1.
std::optional<HyperbolicProduct> dp_product_check(const StepSchedule& s);

}  // namespace cpdnes
