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
#include <memory>
#include <span>
#include <vector>

namespace cpdnes {

// Axis-aligned box lo <= x <= hi.
class BoxConstraint {
 public:
  BoxConstraint(std::vector<double> lo, std::vector<double> hi);
  static BoxConstraint Uniform(std::size_t dim, double lo, double hi);

  std::size_t dim() const { return lo_.size(); }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }

  bool contains(std::span<const double> x) const;
  std::vector<double> midpoint() const;

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
};

// Coordinate-wise clamp onto the box.
std::vector<double> project(std::span<const double> x, const BoxConstraint& box);
void project_in_place(std::span<double> x, const BoxConstraint& box);

// Stacked player decisions col(x_1, ..., x_N), each block of length dim.
class DecisionProfile {
 public:
  DecisionProfile(std::size_t players, std::size_t dim, double fill = 0.0);
  DecisionProfile(std::size_t players, std::size_t dim,
                  std::vector<double> values);

  std::size_t players() const { return players_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return values_.size(); }

  std::span<double> block(std::size_t i);
  std::span<const double> block(std::size_t i) const;

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const DecisionProfile&) const = default;

 private:
  std::size_t players_;
  std::size_t dim_;
  std::vector<double> values_;
};

// Constants of the monotonicity, Lipschitz and gradient-bound assumptions.
struct GameBounds {
  double m = 0.0;      // strong monotonicity of the pseudo-gradient map
  double L_phi = 0.0;  // Lipschitz constant of phi
  double L_g = 0.0;    // Lipschitz constant of g_i in its aggregate argument
  double C = 0.0;      // gradient bound
};

// A game in which player i pays f_i(x_i, v) with v the mean decision.
//
// Implementations provide the two partial derivatives; the pseudo-gradient
//   g_i(x_i, z) = d/dx_i f_i(x_i, v) + (1/N) d/dv f_i(x_i, v)  at v = z
// is assembled from them unless a subclass supplies a closed form.
class AggregativeGame {
 public:
  virtual ~AggregativeGame() = default;

  virtual std::size_t players() const = 0;
  virtual std::size_t dim() const = 0;
  virtual const BoxConstraint& constraint(std::size_t i) const = 0;
  virtual GameBounds bounds() const = 0;

  virtual double cost(std::size_t i, std::span<const double> x_i,
                      std::span<const double> v) const = 0;
  virtual void grad_x(std::size_t i, std::span<const double> x_i,
                      std::span<const double> v, std::span<double> out) const = 0;
  virtual void grad_v(std::size_t i, std::span<const double> x_i,
                      std::span<const double> v, std::span<double> out) const = 0;

  virtual void pseudo_gradient(std::size_t i, std::span<const double> x_i,
                               std::span<const double> z,
                               std::span<double> out) const;
};

// Pseudo-gradient assembled from grad_x and grad_v, bypassing any override.
void assembled_pseudo_gradient(const AggregativeGame& game, std::size_t i,
                               std::span<const double> x_i,
                               std::span<const double> z, std::span<double> out);

std::vector<double> pseudo_gradient(const AggregativeGame& game, std::size_t i,
                                    std::span<const double> x_i,
                                    std::span<const double> z_i);

// h(x) = (1/N) sum_i x_i.
std::vector<double> aggregate(const DecisionProfile& x);

// G(x, z) = col(g_i(x_i, z_i)); z holds one aggregate estimate per player.
std::vector<double> game_map(const AggregativeGame& game,
                             const DecisionProfile& x, const DecisionProfile& z);

// Phi(x) = G(x, 1 (x) h(x)).
std::vector<double> phi(const AggregativeGame& game, const DecisionProfile& x);

// Clips ||g_i|| to C by rescaling. Cost and partials pass through.
class ClippedGame final : public AggregativeGame {
 public:
  ClippedGame(std::shared_ptr<const AggregativeGame> inner, double clip);

  std::size_t players() const override { return inner_->players(); }
  std::size_t dim() const override { return inner_->dim(); }
  const BoxConstraint& constraint(std::size_t i) const override {
    return inner_->constraint(i);
  }
  GameBounds bounds() const override;
  double cost(std::size_t i, std::span<const double> x_i,
              std::span<const double> v) const override {
    return inner_->cost(i, x_i, v);
  }
  void grad_x(std::size_t i, std::span<const double> x_i,
              std::span<const double> v, std::span<double> out) const override {
    inner_->grad_x(i, x_i, v, out);
  }
  void grad_v(std::size_t i, std::span<const double> x_i,
              std::span<const double> v, std::span<double> out) const override {
    inner_->grad_v(i, x_i, v, out);
  }
  void pseudo_gradient(std::size_t i, std::span<const double> x_i,
                       std::span<const double> z,
                       std::span<double> out) const override;

 private:
  std::shared_ptr<const AggregativeGame> inner_;
  double clip_;
};

// Energy-consumption game for HVAC end-users:
//   f_i = (x_i - s_i)^2 + (p0 * sum_j x_j + h_price) * x_i,  x_i in [lo, hi].
struct EnergyGameParams {
  std::vector<double> s = {56.0, 40.0, 43.0, 60.0, 50.0};
  double p0 = 0.05;
  double h_price = 8.0;
  double box_lo = 30.0;
  double box_hi = 50.0;
  double gradient_bound = 15.0;

  std::size_t players() const { return s.size(); }
  void validate() const;
};

GameBounds energy_game_bounds(const EnergyGameParams& params);

class EnergyGame final : public AggregativeGame {
 public:
  explicit EnergyGame(EnergyGameParams params);

  const EnergyGameParams& params() const { return params_; }

  std::size_t players() const override { return params_.players(); }
  std::size_t dim() const override { return 1; }
  const BoxConstraint& constraint(std::size_t) const override { return box_; }
  GameBounds bounds() const override { return energy_game_bounds(params_); }

  double cost(std::size_t i, std::span<const double> x_i,
              std::span<const double> v) const override;
  void grad_x(std::size_t i, std::span<const double> x_i,
              std::span<const double> v, std::span<double> out) const override;
  void grad_v(std::size_t i, std::span<const double> x_i,
              std::span<const double> v, std::span<double> out) const override;

  // 2(x_i - s_i) + N p0 z + h_price + p0 x_i
  void pseudo_gradient(std::size_t i, std::span<const double> x_i,
                       std::span<const double> z,
                       std::span<double> out) const override;

 private:
  EnergyGameParams params_;
  BoxConstraint box_;
};

}  // namespace cpdnes
