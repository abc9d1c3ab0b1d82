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

#include "cpdnes/oracle.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "cpdnes/error.hpp"

namespace cpdnes {

double ne_residual(const AggregativeGame& game, const DecisionProfile& x, double eta) {
  const auto grad = phi(game, x);
  double worst = 0.0;
  for (std::size_t i = 0; i < game.players(); ++i) {
    const auto& box = game.constraint(i);
    const auto xi = x.block(i);
    double sq = 0.0;
    for (std::size_t j = 0; j < game.dim(); ++j) {
      const double moved = std::clamp(xi[j] - eta * grad[i * game.dim() + j],
                                      box.lo()[j], box.hi()[j]);
      sq += (xi[j] - moved) * (xi[j] - moved);
    }
    worst = std::max(worst, std::sqrt(sq));
  }
  return worst;
}

std::optional<NeSolution> ne_linear(const EnergyGameParams& params) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(params.players());
  Eigen::MatrixXd a = (2.0 + params.p0) * Eigen::MatrixXd::Identity(n, n) +
                      params.p0 * Eigen::MatrixXd::Ones(n, n);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) rhs(i) = 2.0 * params.s[i] - params.h_price;
  const Eigen::VectorXd x = a.ldlt().solve(rhs);

  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(x(i) > params.box_lo && x(i) < params.box_hi)) return std::nullopt;
  }
  std::vector<double> values(x.data(), x.data() + n);
  EnergyGame game(params);
  const GameBounds b = game.bounds();
  NeSolution sol{DecisionProfile(params.players(), 1, std::move(values)), 0.0,
                 "linear", 0};
  sol.residual = ne_residual(game, sol.x_star, b.m / (b.L_phi * b.L_phi));
  return sol;
}

NeSolution ne_fixed_point(const AggregativeGame& game, const FixedPointOptions& options) {
  const GameBounds b = game.bounds();
  const double eta = options.eta.value_or(b.m / (b.L_phi * b.L_phi));
  if (!(eta > 0.0)) throw ConfigError("oracle.eta", "must be positive");

  DecisionProfile x(game.players(), game.dim());
  if (options.start) {
    x = DecisionProfile(game.players(), game.dim(), *options.start);
  } else {
    for (std::size_t i = 0; i < game.players(); ++i) {
      const auto mid = game.constraint(i).midpoint();
      std::copy(mid.begin(), mid.end(), x.block(i).begin());
    }
  }

  double residual = ne_residual(game, x, eta);
  std::size_t it = 0;
  while (residual > options.tol) {
    if (it == options.max_iters) {
      throw NoConvergence(fmt::format("fixed-point oracle: residual {:.3e} after {} "
                                      "iterations",
                                      residual, it),
                          residual);
    }
    const auto grad = phi(game, x);
    for (std::size_t i = 0; i < game.players(); ++i) {
      auto xi = x.block(i);
      for (std::size_t j = 0; j < game.dim(); ++j) {
        xi[j] -= eta * grad[i * game.dim() + j];
      }
      project_in_place(xi, game.constraint(i));
    }
    ++it;
    residual = ne_residual(game, x, eta);
  }
  return NeSolution{std::move(x), residual, "fixed-point", it};
}

NeSolution solve_energy_ne(const EnergyGameParams& params, double tol) {
  if (auto sol = ne_linear(params)) return *sol;
  EnergyGame game(params);
  FixedPointOptions opts;
  opts.tol = tol;
  return ne_fixed_point(game, opts);
}

}  // namespace cpdnes
