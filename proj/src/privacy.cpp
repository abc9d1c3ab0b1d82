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

#include "cpdnes/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cpdnes/error.hpp"

namespace cpdnes {

namespace {

// Output law of the dithered quantizer for one scalar.
std::map<double, double> rounding_law(double v, double theta) {
  const double scaled = v / theta;
  const double l = std::floor(scaled);
  const double p_up = scaled - l;
  std::map<double, double> law;
  if (1.0 - p_up > 0.0) law[l] += 1.0 - p_up;
  if (p_up > 0.0) law[l + 1.0] += p_up;
  return law;
}

double step_product_sum(const StepSchedule& schedule, std::uint64_t k) {
  double sum = 0.0;
  for (std::uint64_t s = 0; s < k; ++s) sum += schedule.product(s);
  return sum;
}

}  // namespace

std::string to_string(LedgerMode mode) {
  return mode == LedgerMode::kClosedForm ? "closed-form" : "partial-sum";
}

double closed_form_coefficient(double c4, double c5, double C, std::size_t n,
                               double theta) {
  return 2.0 * C * c4 * std::sqrt(static_cast<double>(n)) / (c5 * theta);
}

double delta_closed_form(std::uint64_t k, double c4, double c5, double C,
                         std::size_t n, double theta) {
  const double coef = closed_form_coefficient(c4, c5, C, n, theta);
  return std::min(1.0, coef * std::log(c5 * static_cast<double>(k) + 1.0));
}

double delta_partial_sum(const StepSchedule& schedule, std::uint64_t k, double C,
                         std::size_t n, double theta) {
  const double sens = 2.0 * C * std::sqrt(static_cast<double>(n)) *
                      step_product_sum(schedule, k);
  return std::min(1.0, sens / theta);
}

double dsc_budget(std::uint64_t k, double r_base, const StepSchedule& schedule,
                  double C, std::size_t n, double theta) {
  const double sens = 2.0 * C * std::sqrt(static_cast<double>(n)) *
                      step_product_sum(schedule, k);
  const double r = std::pow(r_base, static_cast<double>(k));
  return std::min(1.0, sens / (r * theta));
}

double single_step_gap(std::span<const double> y, std::span<const double> y_prime,
                       double theta) {
  if (y.size() != y_prime.size()) {
    throw StructuralError("single_step_gap: dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    auto a = rounding_law(y[j], theta);
    const auto b = rounding_law(y_prime[j], theta);
    for (const auto& [level, p] : b) a[level] -= p;
    double tv = 0.0;
    for (const auto& [level, d] : a) tv += std::abs(d);
    total += 0.5 * tv;
  }
  return std::min(1.0, total);
}

double single_step_gap_bound(std::span<const double> y,
                             std::span<const double> y_prime, double theta) {
  if (y.size() != y_prime.size()) {
    throw StructuralError("single_step_gap_bound: dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    total += std::min(1.0, std::abs(y[j] - y_prime[j]) / theta);
  }
  return std::min(1.0, total);
}

PrivacyLedger closed_form_ledger(std::uint64_t iterations, double c4, double c5,
                                 double C, std::size_t n, double theta) {
  PrivacyLedger ledger;
  ledger.mode = LedgerMode::kClosedForm;
  ledger.theta = theta;
  const double scale = 2.0 * C * c4 * std::sqrt(static_cast<double>(n)) / c5;
  for (std::uint64_t k = 0; k <= iterations; ++k) {
    const double sens = scale * std::log(c5 * static_cast<double>(k) + 1.0);
    ledger.sensitivity.push_back(sens);
    ledger.delta.push_back(delta_closed_form(k, c4, c5, C, n, theta));
  }
  return ledger;
}

PrivacyLedger partial_sum_ledger(const StepSchedule& schedule, std::uint64_t iterations,
                                 double C, std::size_t n, double theta) {
  PrivacyLedger ledger;
  ledger.mode = LedgerMode::kPartialSum;
  ledger.theta = theta;
  const double scale = 2.0 * C * std::sqrt(static_cast<double>(n));
  double sum = 0.0;
  for (std::uint64_t k = 0; k <= iterations; ++k) {
    const double sens = scale * sum;
    ledger.sensitivity.push_back(sens);
    ledger.delta.push_back(std::min(1.0, sens / theta));
    sum += schedule.product(k);
  }
  return ledger;
}

std::vector<double> dsc_ledger(std::uint64_t iterations, double r_base,
                               const StepSchedule& schedule, double C, std::size_t n,
                               double theta) {
  std::vector<double> delta;
  const double scale = 2.0 * C * std::sqrt(static_cast<double>(n));
  double sum = 0.0;
  for (std::uint64_t k = 0; k <= iterations; ++k) {
    const double r = std::pow(r_base, static_cast<double>(k));
    delta.push_back(std::min(1.0, scale * sum / (r * theta)));
    sum += schedule.product(k);
  }
  return delta;
}

std::uint64_t saturation_iteration(std::span<const double> delta) {
  for (std::size_t k = 0; k < delta.size(); ++k) {
    if (delta[k] >= 1.0) return k;
  }
  return delta.size();
}

AdjacentPair AdjacentPair::Make(EnergyGameParams first, EnergyGameParams second) {
  if (first.s.size() != second.s.size()) {
    throw StructuralError("adjacent games must have the same players");
  }
  if (first.p0 != second.p0 || first.h_price != second.h_price ||
      first.box_lo != second.box_lo || first.box_hi != second.box_hi) {
    throw StructuralError("price or box change alters every objective");
  }
  std::size_t differing = first.s.size();
  for (std::size_t i = 0; i < first.s.size(); ++i) {
    if (first.s[i] != second.s[i]) {
      if (differing != first.s.size()) {
        throw StructuralError("more than one objective differs");
      }
      differing = i;
    }
  }
  if (differing == first.s.size()) {
    throw StructuralError("objective sets are identical");
  }
  return AdjacentPair{std::move(first), std::move(second), differing};
}

}  // namespace cpdnes
