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
#include <optional>
#include <string>
#include <vector>

#include "cpdnes/game.hpp"

namespace cpdnes {

// Centralised reference equilibrium.
struct NeSolution {
  DecisionProfile x_star;
  // max_i ||x_i - P(x_i - eta phi_i(x))||
  double residual = 0.0;
  std::string method;
  std::size_t iterations = 0;
};

double ne_residual(const AggregativeGame& game, const DecisionProfile& x, double eta);

// Solves (2 + p0) x_i + p0 sum_j x_j = 2 s_i - h_price. Returns nullopt when
// the solution is not strictly inside every box, in which case the
// stationarity system does not characterise the equilibrium.
std::optional<NeSolution> ne_linear(const EnergyGameParams& params);

struct FixedPointOptions {
  double tol = 1e-8;
  std::size_t max_iters = 100000;
  std::optional<double> eta;  // default m / L_phi^2
  std::optional<std::vector<double>> start;  // default box midpoints
};

// Projected pseudo-gradient iteration x <- P[x - eta Phi(x)]; a contraction
// under strong monotonicity. Throws NoConvergence past max_iters.
NeSolution ne_fixed_point(const AggregativeGame& game, const FixedPointOptions& options = {});

// ne_linear when it applies, otherwise ne_fixed_point.
NeSolution solve_energy_ne(const EnergyGameParams& params, double tol = 1e-8);

}  // namespace cpdnes
