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

#include "cpdnes/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "cpdnes/error.hpp"

namespace cpdnes {

namespace {
constexpr double kExponentEps = 1e-12;
}

double StepSchedule::alpha(std::uint64_t k) const {
  return c1 / std::pow(c2 * static_cast<double>(k) + 1.0, omega1);
}

double StepSchedule::beta(std::uint64_t k) const {
  return c3 / std::pow(c2 * static_cast<double>(k) + 1.0, omega2);
}

void StepSchedule::validate() const {
  if (!(c1 > 0.0)) throw ConfigError("schedule.alpha.c", "must be positive");
  if (!(c3 > 0.0)) throw ConfigError("schedule.beta.c", "must be positive");
  if (!(c2 > 0.0)) throw ConfigError("schedule.c2", "must be positive");
  if (omega1 < 0.0) throw ConfigError("schedule.alpha.omega", "must be non-negative");
  if (omega2 < 0.0) throw ConfigError("schedule.beta.omega", "must be non-negative");
}

ScheduleVerdict check_conditions(const StepSchedule& s) {
  ScheduleVerdict v;
  // sum alpha beta diverges iff omega1 + omega2 <= 1.
  if (!(s.omega1 + s.omega2 <= 1.0 + kExponentEps)) {
    v.failed_conditions.emplace_back(kCondSumOmega);
  }
  // sum beta^2 converges iff 2 omega2 > 1.
  if (!(s.omega2 > 0.5 + kExponentEps)) {
    v.failed_conditions.emplace_back(kCondOmega2);
  }
  // sum alpha^2 beta converges iff 2 omega1 + omega2 > 1.
  if (!(2.0 * s.omega1 + s.omega2 > 1.0 + kExponentEps)) {
    v.failed_conditions.emplace_back(kCondTwoOmega1);
  }
  v.passes = v.failed_conditions.empty();
  if (v.passes) v.rate_exponent = std::min(2.0 * s.omega1, s.omega2);
  return v;
}

std::optional<HyperbolicProduct> dp_product_check(const StepSchedule& s) {
  if (std::abs(s.omega1 + s.omega2 - 1.0) > kExponentEps) return std::nullopt;
  // c1 c3 / (c2 k + 1): c4 = c1 c3, c5 = c2.
  return HyperbolicProduct{s.c1 * s.c3, s.c2};
}

}  // namespace cpdnes
