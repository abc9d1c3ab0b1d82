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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cpdnes/game.hpp"
#include "cpdnes/schedule.hpp"

namespace cpdnes {

// Per-iteration (0, delta_k) accounting for CP-DNES with the dithered
// quantizer. The adversary sees every broadcast C(y_{i,k}); two adjacent
// objective sets can only be told apart through the sensitivity
// ||y_{i0,k} - y'_{i0,k}||_1, which grows by at most 2 C alpha_k beta_k
// per round.
enum class LedgerMode {
  kClosedForm,  // hyperbolic step product c4 / (c5 k + 1), log bound
  kPartialSum,  // direct sum of alpha_s beta_s for any schedule
};

std::string to_string(LedgerMode mode);

struct PrivacyLedger {
  LedgerMode mode = LedgerMode::kClosedForm;
  double theta = 0.0;
  std::vector<double> sensitivity;  // l1 sensitivity bound per k
  std::vector<double> delta;        // min(1, sensitivity / theta)
};

// 2 C c4 sqrt(n) / (c5 theta).
double closed_form_coefficient(double c4, double c5, double C, std::size_t n,
                               double theta);
// min{1, coefficient * ln(c5 k + 1)}.
double delta_closed_form(std::uint64_t k, double c4, double c5, double C,
                         std::size_t n, double theta);
// min{1, (2 C sqrt(n) / theta) sum_{s<k} alpha_s beta_s}.
double delta_partial_sum(const StepSchedule& schedule, std::uint64_t k, double C,
                         std::size_t n, double theta);
// Same sensitivity divided by r_k theta, r_k = r_base^k.
double dsc_budget(std::uint64_t k, double r_base, const StepSchedule& schedule,
                  double C, std::size_t n, double theta);

// Largest probability gap an observer of one broadcast can exploit: the
// total-variation distance between C(y) and C(y'), summed over coordinates
// and clipped to 1. Equals |y - y'| / theta when each coordinate pair shares
// a grid cell.
double single_step_gap(std::span<const double> y, std::span<const double> y_prime,
                       double theta);
// sum_j min{1, |y_j - y'_j| / theta}, clipped to 1.
double single_step_gap_bound(std::span<const double> y,
                             std::span<const double> y_prime, double theta);

PrivacyLedger closed_form_ledger(std::uint64_t iterations, double c4, double c5,
                                 double C, std::size_t n, double theta);
PrivacyLedger partial_sum_ledger(const StepSchedule& schedule, std::uint64_t iterations,
                                 double C, std::size_t n, double theta);
std::vector<double> dsc_ledger(std::uint64_t iterations, double r_base,
                               const StepSchedule& schedule, double C, std::size_t n,
                               double theta);

// First k with delta_k == 1, or iterations + 1 if it never saturates.
std::uint64_t saturation_iteration(std::span<const double> delta);

// Two energy games whose objectives differ for exactly one player.
struct AdjacentPair {
  EnergyGameParams first;
  EnergyGameParams second;
  std::size_t differing_player = 0;

  // Throws StructuralError unless exactly one comfort target differs and the
  // shared price parameters agree.
  static AdjacentPair Make(EnergyGameParams first, EnergyGameParams second);
};

}  // namespace cpdnes
