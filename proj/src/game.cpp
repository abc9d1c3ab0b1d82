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

#include "cpdnes/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cpdnes/error.hpp"

namespace cpdnes {

namespace {

void check_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw StructuralError(std::string(what) + ": expected dimension " +
                          std::to_string(want) + ", got " +
                          std::to_string(got));
  }
}

}  // namespace

BoxConstraint::BoxConstraint(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  check_dim(hi_.size(), lo_.size(), "BoxConstraint");
  for (std::size_t j = 0; j < lo_.size(); ++j) {
    if (!(lo_[j] < hi_[j])) {
      throw StructuralError("BoxConstraint: lo must be below hi at coordinate " +
                            std::to_string(j));
    }
  }
}

BoxConstraint BoxConstraint::Uniform(std::size_t dim, double lo, double hi) {
  return BoxConstraint(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

bool BoxConstraint::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lo_[j] || x[j] > hi_[j]) return false;
  }
  return true;
}

std::vector<double> BoxConstraint::midpoint() const {
  std::vector<double> mid(dim());
  for (std::size_t j = 0; j < dim(); ++j) mid[j] = 0.5 * (lo_[j] + hi_[j]);
  return mid;
}

std::vector<double> project(std::span<const double> x, const BoxConstraint& box) {
  std::vector<double> out(x.begin(), x.end());
  project_in_place(out, box);
  return out;
}

void project_in_place(std::span<double> x, const BoxConstraint& box) {
  check_dim(x.size(), box.dim(), "project");
  for (std::size_t j = 0; j < x.size(); ++j) {
    x[j] = std::clamp(x[j], box.lo()[j], box.hi()[j]);
  }
}

DecisionProfile::DecisionProfile(std::size_t players, std::size_t dim, double fill)
    : players_(players), dim_(dim), values_(players * dim, fill) {}

DecisionProfile::DecisionProfile(std::size_t players, std::size_t dim,
                                 std::vector<double> values)
    : players_(players), dim_(dim), values_(std::move(values)) {
  check_dim(values_.size(), players * dim, "DecisionProfile");
}

std::span<double> DecisionProfile::block(std::size_t i) {
  return std::span<double>(values_).subspan(i * dim_, dim_);
}

std::span<const double> DecisionProfile::block(std::size_t i) const {
  return std::span<const double>(values_).subspan(i * dim_, dim_);
}

void AggregativeGame::pseudo_gradient(std::size_t i, std::span<const double> x_i,
                                      std::span<const double> z,
                                      std::span<double> out) const {
  assembled_pseudo_gradient(*this, i, x_i, z, out);
}

void assembled_pseudo_gradient(const AggregativeGame& game, std::size_t i,
                               std::span<const double> x_i,
                               std::span<const double> z, std::span<double> out) {
  const std::size_t n = game.dim();
  check_dim(x_i.size(), n, "pseudo_gradient x_i");
  check_dim(z.size(), n, "pseudo_gradient z_i");
  check_dim(out.size(), n, "pseudo_gradient out");
  std::vector<double> dv(n);
  game.grad_x(i, x_i, z, out);
  game.grad_v(i, x_i, z, dv);
  const double inv_n = 1.0 / static_cast<double>(game.players());
  for (std::size_t j = 0; j < n; ++j) out[j] += inv_n * dv[j];
}

std::vector<double> pseudo_gradient(const AggregativeGame& game, std::size_t i,
                                    std::span<const double> x_i,
                                    std::span<const double> z_i) {
  check_dim(x_i.size(), game.dim(), "pseudo_gradient x_i");
  check_dim(z_i.size(), game.dim(), "pseudo_gradient z_i");
  std::vector<double> out(game.dim());
  game.pseudo_gradient(i, x_i, z_i, out);
  return out;
}

std::vector<double> aggregate(const DecisionProfile& x) {
  if (x.players() == 0) throw StructuralError("aggregate: empty profile");
  std::vector<double> mean(x.dim(), 0.0);
  for (std::size_t i = 0; i < x.players(); ++i) {
    auto b = x.block(i);
    for (std::size_t j = 0; j < x.dim(); ++j) mean[j] += b[j];
  }
  for (double& v : mean) v /= static_cast<double>(x.players());
  return mean;
}

std::vector<double> game_map(const AggregativeGame& game,
                             const DecisionProfile& x, const DecisionProfile& z) {
  check_dim(x.players(), game.players(), "game_map players");
  check_dim(x.dim(), game.dim(), "game_map x");
  check_dim(z.players(), game.players(), "game_map z players");
  check_dim(z.dim(), game.dim(), "game_map z");
  std::vector<double> out(x.size());
  std::span<double> all(out);
  for (std::size_t i = 0; i < game.players(); ++i) {
    game.pseudo_gradient(i, x.block(i), z.block(i),
                         all.subspan(i * game.dim(), game.dim()));
  }
  return out;
}

std::vector<double> phi(const AggregativeGame& game, const DecisionProfile& x) {
  const auto h = aggregate(x);
  DecisionProfile z(x.players(), x.dim());
  for (std::size_t i = 0; i < x.players(); ++i) {
    std::copy(h.begin(), h.end(), z.block(i).begin());
  }
  return game_map(game, x, z);
}

ClippedGame::ClippedGame(std::shared_ptr<const AggregativeGame> inner, double clip)
    : inner_(std::move(inner)), clip_(clip) {
  if (!inner_) throw StructuralError("ClippedGame: null game");
  if (!(clip_ > 0.0)) throw StructuralError("ClippedGame: clip must be positive");
}

GameBounds ClippedGame::bounds() const {
  GameBounds b = inner_->bounds();
  b.C = clip_;
  return b;
}

void ClippedGame::pseudo_gradient(std::size_t i, std::span<const double> x_i,
                                  std::span<const double> z,
                                  std::span<double> out) const {
  inner_->pseudo_gradient(i, x_i, z, out);
  double sq = 0.0;
  for (double v : out) sq += v * v;
  const double norm = std::sqrt(sq);
  if (norm > clip_) {
    const double scale = clip_ / norm;
    for (double& v : out) v *= scale;
  }
}

void EnergyGameParams::validate() const {
  if (s.empty()) throw ConfigError("game.s", "at least one player required");
  if (p0 < 0.0) throw ConfigError("game.p0", "must be non-negative");
  if (!(box_lo < box_hi)) throw ConfigError("game.box", "lo must be below hi");
  if (!(gradient_bound > 0.0)) throw ConfigError("game.C", "must be positive");
}

GameBounds energy_game_bounds(const EnergyGameParams& params) {
  // Jacobian of Phi is (2 + p0) I + p0 11^T: eigenvalues 2 + p0 (N-1 times)
  // and 2 + p0 + N p0.
  const double n = static_cast<double>(params.players());
  GameBounds b;
  b.m = 2.0 + params.p0;
  b.L_phi = 2.0 + params.p0 + n * params.p0;
  b.L_g = n * params.p0;
  b.C = params.gradient_bound;
  return b;
}

EnergyGame::EnergyGame(EnergyGameParams params)
    : params_(std::move(params)),
      box_(BoxConstraint::Uniform(1, params_.box_lo, params_.box_hi)) {
  params_.validate();
}

double EnergyGame::cost(std::size_t i, std::span<const double> x_i,
                        std::span<const double> v) const {
  const double n = static_cast<double>(players());
  const double d = x_i[0] - params_.s.at(i);
  return d * d + (params_.p0 * n * v[0] + params_.h_price) * x_i[0];
}

void EnergyGame::grad_x(std::size_t i, std::span<const double> x_i,
                        std::span<const double> v, std::span<double> out) const {
  const double n = static_cast<double>(players());
  out[0] = 2.0 * (x_i[0] - params_.s.at(i)) + params_.p0 * n * v[0] +
           params_.h_price;
}

void EnergyGame::grad_v(std::size_t, std::span<const double> x_i,
                        std::span<const double>, std::span<double> out) const {
  const double n = static_cast<double>(players());
  out[0] = params_.p0 * n * x_i[0];
}

void EnergyGame::pseudo_gradient(std::size_t i, std::span<const double> x_i,
                                 std::span<const double> z,
                                 std::span<double> out) const {
  const double n = static_cast<double>(players());
  out[0] = 2.0 * (x_i[0] - params_.s.at(i)) + n * params_.p0 * z[0] +
           params_.h_price + params_.p0 * x_i[0];
}

}  // namespace cpdnes
