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

#include <cmath>

#include "cpdnes/error.hpp"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace cpdnes {
namespace {

using ::testing::ElementsAre;
using ::testing::UnorderedElementsAre;

StepSchedule with_exponents(double omega1, double omega2) {
  StepSchedule s;
  s.omega1 = omega1;
  s.omega2 = omega2;
  return s;
}

TEST(StepScheduleTest, DefaultValues) {
  const StepSchedule s;
  EXPECT_DOUBLE_EQ(s.alpha(0), 0.4);
  EXPECT_DOUBLE_EQ(s.beta(0), 0.4);
  EXPECT_NEAR(s.alpha(9), 0.4 / std::pow(10.0, 0.3), 1e-15);
  EXPECT_NEAR(s.beta(9), 0.4 / std::pow(10.0, 0.6), 1e-15);
  EXPECT_NEAR(s.product(9), 0.16 / 10.0 / std::pow(10.0, -0.1), 1e-15);
}

TEST(StepScheduleTest, ValidateNamesField) {
  StepSchedule s;
  s.c3 = 0.0;
  try {
    s.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "schedule.beta.c");
  }
}

TEST(CheckConditionsTest, ExperimentSchedulePasses) {
  const auto v = check_conditions(with_exponents(0.3, 0.6));
  EXPECT_TRUE(v.passes);
  EXPECT_TRUE(v.failed_conditions.empty());
  ASSERT_TRUE(v.rate_exponent.has_value());
  EXPECT_DOUBLE_EQ(*v.rate_exponent, 0.6);
}

TEST(CheckConditionsTest, ConstantStepsFail) {
  const auto v = check_conditions(with_exponents(0.0, 0.0));
  EXPECT_FALSE(v.passes);
  EXPECT_FALSE(v.rate_exponent.has_value());
  EXPECT_THAT(v.failed_conditions, UnorderedElementsAre(kCondOmega2, kCondTwoOmega1));
}

TEST(CheckConditionsTest, BoundaryExponentsFail) {
  const auto v = check_conditions(with_exponents(0.2, 0.5));
  EXPECT_THAT(v.failed_conditions, UnorderedElementsAre(kCondOmega2, kCondTwoOmega1));
}

TEST(CheckConditionsTest, FastDecayFailsSummability) {
  const auto v = check_conditions(with_exponents(0.5, 0.7));
  EXPECT_THAT(v.failed_conditions, ElementsAre(kCondSumOmega));
}

TEST(CheckConditionsTest, RateIsSmallerExponent) {
  EXPECT_DOUBLE_EQ(*check_conditions(with_exponents(0.2, 0.7)).rate_exponent, 0.4);
  EXPECT_DOUBLE_EQ(*check_conditions(with_exponents(0.45, 0.55)).rate_exponent, 0.55);
}

// Independent oracle: the decay order p of a series term t(k) is recovered
// numerically as log2(t(K) / t(2K)) at large K, and the series is summable
// iff p > 1. This never reads omega1 or omega2.
double decay_order(auto term) {
  constexpr double kK = 1e9;
  return std::log2(term(kK) / term(2 * kK));
}

TEST(CheckConditionsTest, AgreesWithNumericDecayOrders) {
  for (double w1 = 0.0; w1 <= 1.0; w1 += 0.07) {
    for (double w2 = 0.0; w2 <= 1.0; w2 += 0.07) {
      const auto s = with_exponents(w1, w2);
      auto a = [&](double k) { return s.alpha(static_cast<std::uint64_t>(k)); };
      auto b = [&](double k) { return s.beta(static_cast<std::uint64_t>(k)); };
      const double p_ab = decay_order([&](double k) { return a(k) * b(k); });
      const double p_bb = decay_order([&](double k) { return b(k) * b(k); });
      const double p_aab = decay_order([&](double k) { return a(k) * a(k) * b(k); });
      const bool near_edge = std::abs(p_ab - 1) < 1e-3 || std::abs(p_bb - 1) < 1e-3 ||
                             std::abs(p_aab - 1) < 1e-3;
      if (near_edge) continue;
      const bool expected = p_ab < 1 && p_bb > 1 && p_aab > 1;
      EXPECT_EQ(check_conditions(s).passes, expected) << w1 << ", " << w2;
    }
  }
}

TEST(DpProductCheckTest, HyperbolicOnlyOnUnitExponentSum) {
  EXPECT_FALSE(dp_product_check(with_exponents(0.3, 0.6)).has_value());
  auto s = with_exponents(0.4, 0.6);
  s.c2 = 2.0;
  const auto h = dp_product_check(s);
  ASSERT_TRUE(h.has_value());
  for (std::uint64_t k : {0u, 1u, 7u, 100u, 12345u}) {
    EXPECT_NEAR(s.product(k), h->c4 / (h->c5 * k + 1.0), 1e-15);
  }
}

}  // namespace
}  // namespace cpdnes
