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

#include <cmath>
#include <random>

#include "cpdnes/error.hpp"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_support.hpp"

namespace cpdnes {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;

TEST(BoxConstraintTest, RejectsInvertedBounds) {
  EXPECT_THROW(BoxConstraint({1.0, 2.0}, {0.0, 3.0}), StructuralError);
  EXPECT_THROW(BoxConstraint({1.0}, {2.0, 3.0}), StructuralError);
}

TEST(ProjectTest, ClampsIntoBox) {
  const auto box = BoxConstraint::Uniform(3, 30.0, 50.0);
  EXPECT_THAT(project(std::vector<double>{10.0, 40.0, 70.0}, box),
              ElementsAre(30.0, 40.0, 50.0));
  EXPECT_EQ(box.midpoint(), std::vector<double>(3, 40.0));
}

TEST(ProjectTest, IdempotentAndNonExpansive) {
  const auto box = BoxConstraint::Uniform(4, -1.0, 2.0);
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> x(4), y(4);
    for (auto& v : x) v = d(gen);
    for (auto& v : y) v = d(gen);
    const auto px = project(x, box);
    const auto py = project(y, box);
    EXPECT_EQ(project(px, box), px);
    EXPECT_TRUE(box.contains(px));
    double dp = 0.0, dx = 0.0;
    for (int j = 0; j < 4; ++j) {
      dp += (px[j] - py[j]) * (px[j] - py[j]);
      dx += (x[j] - y[j]) * (x[j] - y[j]);
    }
    EXPECT_LE(dp, dx + 1e-12);
  }
}

TEST(EnergyGameTest, BoundsFollowParameters) {
  const auto b = energy_game_bounds(EnergyGameParams{});
  EXPECT_DOUBLE_EQ(b.m, 2.05);
  EXPECT_DOUBLE_EQ(b.L_phi, 2.3);
  EXPECT_DOUBLE_EQ(b.L_g, 0.25);
  EXPECT_DOUBLE_EQ(b.C, 15.0);
}

TEST(EnergyGameTest, ValidateNamesField) {
  EnergyGameParams p;
  p.p0 = -1.0;
  try {
    p.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "game.p0");
  }
}

TEST(EnergyGameTest, PseudoGradientAtKnownPoint) {
  const EnergyGame game(EnergyGameParams{});
  // 2(40 - 56) + 5 * 0.05 * 40 + 8 + 0.05 * 40
  const std::vector<double> x = {40.0};
  EXPECT_THAT(pseudo_gradient(game, 0, x, x), ElementsAre(DoubleNear(-12.0, 1e-12)));
}

TEST(EnergyGameTest, ClosedFormMatchesAssembledPartials) {
  const EnergyGame game(EnergyGameParams{});
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> d(30.0, 50.0);
  for (int t = 0; t < 100; ++t) {
    for (std::size_t i = 0; i < 5; ++i) {
      const std::vector<double> x = {d(gen)}, z = {d(gen)};
      std::vector<double> a(1), b(1);
      game.pseudo_gradient(i, x, z, a);
      assembled_pseudo_gradient(game, i, x, z, b);
      EXPECT_NEAR(a[0], b[0], 1e-10);
    }
  }
}

TEST(EnergyGameTest, GradientMatchesFiniteDifferenceOfCost) {
  // d/dx_i f_i(x_i, h(x)) with h the mean of all players, against the
  // pseudo-gradient evaluated at z = h(x).
  const EnergyGame game(EnergyGameParams{});
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> d(30.0, 50.0);
  const double eps = 1e-5;
  for (int t = 0; t < 50; ++t) {
    DecisionProfile x(5, 1);
    for (auto& v : x.values()) v = d(gen);
    for (std::size_t i = 0; i < 5; ++i) {
      auto plus = x, minus = x;
      plus.block(i)[0] += eps;
      minus.block(i)[0] -= eps;
      const double fd = (game.cost(i, plus.block(i), aggregate(plus)) -
                         game.cost(i, minus.block(i), aggregate(minus))) /
                        (2 * eps);
      const auto g = pseudo_gradient(game, i, x.block(i), aggregate(x));
      EXPECT_NEAR(g[0], fd, 1e-5);
    }
  }
}

TEST(EnergyGameTest, PhiIsStronglyMonotone) {
  const EnergyGame game(EnergyGameParams{});
  const double m = game.bounds().m;
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> d(30.0, 50.0);
  for (int t = 0; t < 200; ++t) {
    DecisionProfile x(5, 1), y(5, 1);
    for (auto& v : x.values()) v = d(gen);
    for (auto& v : y.values()) v = d(gen);
    const auto px = phi(game, x), py = phi(game, y);
    double inner = 0.0, dist = 0.0;
    for (int j = 0; j < 5; ++j) {
      const double dxj = x.values()[j] - y.values()[j];
      inner += (px[j] - py[j]) * dxj;
      dist += dxj * dxj;
    }
    EXPECT_GE(inner, m * dist - 1e-9);
  }
}

TEST(ClippedGameTest, NormNeverExceedsClip) {
  auto inner = cpdnes::testing::energy_game();
  const ClippedGame clipped(inner, 15.0);
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> d(30.0, 50.0);
  std::uniform_real_distribution<double> z(-90.0, 90.0);
  for (int t = 0; t < 1000; ++t) {
    const std::vector<double> x = {d(gen)}, v = {z(gen)};
    for (std::size_t i = 0; i < 5; ++i) {
      std::vector<double> raw(1), out(1);
      inner->pseudo_gradient(i, x, v, raw);
      clipped.pseudo_gradient(i, x, v, out);
      EXPECT_LE(std::abs(out[0]), 15.0 + 1e-12);
      if (std::abs(raw[0]) <= 15.0) EXPECT_DOUBLE_EQ(out[0], raw[0]);
      else EXPECT_NEAR(out[0], 15.0 * raw[0] / std::abs(raw[0]), 1e-12);
    }
  }
}

TEST(ClippedGameTest, RejectsNonPositiveClip) {
  EXPECT_THROW(ClippedGame(cpdnes::testing::energy_game(), 0.0), StructuralError);
}

TEST(EnergyGameTest, UnclippedGradientExceedsBoundSomewhereOnBox) {
  // User 4 at the lower box edge with every estimate at 30.
  const EnergyGame game(EnergyGameParams{});
  const std::vector<double> x = {30.0};
  EXPECT_GT(std::abs(pseudo_gradient(game, 3, x, x)[0]), 15.0);
}

}  // namespace
}  // namespace cpdnes
