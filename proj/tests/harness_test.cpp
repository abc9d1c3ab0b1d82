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

#include "cpdnes/harness.hpp"

#include <cmath>
#include <filesystem>

#include "cpdnes/error.hpp"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_support.hpp"

namespace cpdnes {
namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;

ExperimentConfig small_experiment(std::size_t trials = 6, std::uint64_t iterations = 150) {
  auto cfg = cpdnes::testing::shipped_config();
  apply_overrides(cfg, 5, trials, iterations);
  return cfg;
}

TEST(TrialsTest, ParallelMatchesSerialExactly) {
  const auto cfg = small_experiment();
  const auto ref = resolve_reference(cfg);
  for (const auto& v : cfg.variants) {
    const auto serial = run_trials_serial(v, cfg.trials, cfg.base_seed, ref);
    for (int threads : {1, 3}) {
      EXPECT_EQ(run_trials_parallel(v, cfg.trials, cfg.base_seed, ref, threads), serial)
          << v.name;
    }
  }
}

TEST(TrialsTest, TrialSeedsAreConsecutive) {
  const auto cfg = small_experiment(3);
  const auto records =
      run_trials_serial(cfg.variant("C1"), 3, 40, resolve_reference(cfg));
  EXPECT_EQ(records[0].seed, 40u);
  EXPECT_EQ(records[2].seed, 42u);
}

TEST(AggregateTest, MatchesDirectStatistics) {
  const auto cfg = small_experiment(5);
  const auto records =
      run_trials_serial(cfg.variant("C2"), 5, cfg.base_seed, resolve_reference(cfg));
  const auto s = aggregate_trials_serial("C2", records);
  ASSERT_EQ(s.length(), 151u);
  for (std::size_t k : {0u, 1u, 50u, 150u}) {
    double mean = 0.0;
    for (const auto& r : records) mean += r.sq_error[k] / 5.0;
    double var = 0.0;
    for (const auto& r : records) var += (r.sq_error[k] - mean) * (r.sq_error[k] - mean) / 5.0;
    EXPECT_NEAR(s.mse_mean[k], mean, 1e-12);
    EXPECT_NEAR(s.mse_std[k], std::sqrt(var), 1e-12);
  }
  EXPECT_EQ(s.bits_cum, records[0].bits_cum);
  const auto p = aggregate_trials_parallel("C2", records, 3);
  EXPECT_EQ(p.mse_mean, s.mse_mean);
  EXPECT_EQ(p.mse_std, s.mse_std);
  EXPECT_EQ(p.norm_mean, s.norm_mean);
  EXPECT_EQ(p.norm_std, s.norm_std);
  EXPECT_EQ(p.bits_cum, s.bits_cum);
}

TEST(AggregateTest, RejectsEmptyInput) {
  EXPECT_THROW(aggregate_trials_serial("x", {}), StructuralError);
}

TEST(ExperimentTest, SerialAndParallelExecutionAgree) {
  const auto cfg = small_experiment();
  const auto a = run_experiment(cfg, {Execution::kSerial, 1});
  const auto b = run_experiment(cfg, {Execution::kParallel, 2});
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    // NaN delta columns compare unequal, so check them through the CSV text.
    EXPECT_EQ(a[i].mse_mean, b[i].mse_mean);
    EXPECT_EQ(a[i].bits_cum, b[i].bits_cum);
  }
  EXPECT_EQ(to_csv(a), to_csv(b));
}

TEST(PrivacyColumnTest, PerVariant) {
  const auto cfg = small_experiment();
  const auto c1 = privacy_column(cfg, cfg.variant("C1"));
  ASSERT_EQ(c1.size(), 151u);
  EXPECT_NEAR(c1[1], 0.48 * std::log(2.0), 1e-12);
  EXPECT_TRUE(std::isnan(privacy_column(cfg, cfg.variant("conventional"))[3]));
  EXPECT_TRUE(std::isnan(privacy_column(cfg, cfg.variant("NP-DNES"))[3]));
  EXPECT_EQ(privacy_column(cfg, cfg.variant("DSC-DNES"))[150], 1.0);

  auto partial = cfg;
  partial.privacy = {};
  const auto ps = privacy_column(partial, partial.variant("C3"));
  EXPECT_NEAR(ps[1], 2 * 15 * 0.16 / 60.0, 1e-12);

  auto missing = cfg;
  missing.privacy = {LedgerMode::kClosedForm, std::nullopt, std::nullopt};
  EXPECT_THROW(privacy_column(missing, missing.variant("C3")), ConfigError);
}

TEST(ThresholdTest, FirstCrossing) {
  AggregateSeries s;
  s.mse_mean = {3.0, 1.0, 0.07, 0.2, 0.01};
  s.norm_mean = {2.0, 1.0, 0.5, 0.4, 0.1};
  s.bits_cum = {0, 10, 20, 30, 40};
  EXPECT_EQ(first_crossing(s, Metric::kMse, 0.08), 2u);
  EXPECT_EQ(bits_to_threshold(s, Metric::kMse, 0.08), 20u);
  EXPECT_EQ(bits_to_threshold(s, Metric::kRmseNorm, 0.18), 40u);
  EXPECT_FALSE(bits_to_threshold(s, Metric::kRmseNorm, 0.01).has_value());
}

TEST(CsvTest, RowCountAndHeader) {
  const auto series = run_experiment(small_experiment(2, 40));
  const auto text = to_csv(series);
  EXPECT_THAT(text, StartsWith(std::string(kCsvHeader) + "\n"));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 6 * 41);
  EXPECT_THAT(text, HasSubstr("\n0,C1,"));
  EXPECT_THAT(text, HasSubstr(",nan\n"));
}

TEST(CsvTest, RoundTripAtPrintedPrecision) {
  const auto series = run_experiment(small_experiment(3, 60));
  const auto text = to_csv(series);
  const auto parsed = parse_csv(text);
  ASSERT_EQ(parsed.size(), series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    EXPECT_EQ(parsed[i].variant, series[i].variant);
    EXPECT_EQ(parsed[i].bits_cum, series[i].bits_cum);
    for (std::size_t k = 0; k < series[i].length(); ++k) {
      EXPECT_NEAR(parsed[i].mse_mean[k], series[i].mse_mean[k],
                  1e-9 * std::abs(series[i].mse_mean[k]));
    }
  }
  EXPECT_EQ(to_csv(parsed), text);

  const auto path = std::filesystem::temp_directory_path() / "cpdnes_roundtrip.csv";
  emit_csv(series, path);
  EXPECT_EQ(to_csv(read_csv(path)), text);
  std::filesystem::remove(path);
}

TEST(CsvTest, MalformedInput) {
  EXPECT_THROW(parse_csv("k,variant\n"), StructuralError);
  EXPECT_THROW(parse_csv(std::string(kCsvHeader) + "\n0,a,1,2\n"), StructuralError);
}

TEST(CsvTest, FaultedVariantsAreSkipped) {
  AggregateSeries ok;
  ok.variant = "ok";
  ok.mse_mean = ok.mse_std = ok.norm_mean = ok.delta = {1.0};
  ok.bits_cum = {0};
  AggregateSeries bad;
  bad.variant = "bad";
  bad.fault = "diverged";
  const std::vector<AggregateSeries> both = {ok, bad};
  EXPECT_EQ(to_csv(both), std::string(kCsvHeader) + "\n0,ok,1,1,1,0,1\n");
}

TEST(ExperimentTest, GradientsStayWithinClipAlongTrajectories) {
  auto cfg = cpdnes::testing::shipped_config();
  apply_overrides(cfg, std::nullopt, 10, std::nullopt);
  const double C = cfg.game->bounds().C;
  const auto ref = resolve_reference(cfg);
  for (const auto& v : cfg.variants) {
    for (const auto& r : run_trials_parallel(v, cfg.trials, cfg.base_seed, ref)) {
      EXPECT_LE(r.max_gradient_norm, C) << v.name << " seed " << r.seed;
    }
  }
}

TEST(FaultTest, LowestTrialIsReported) {
  auto cfg = small_experiment(4, 200);
  auto dsc = cfg.variant("DSC-DNES");
  dsc.dsc->overflow = OverflowPolicy::kError;
  const auto ref = resolve_reference(cfg);
  try {
    run_trials_parallel(dsc, 4, 7, ref, 2);
    FAIL();
  } catch (const TrialFault& e) {
    EXPECT_EQ(e.trial(), 0u);
    EXPECT_GT(e.iteration(), 0u);
    EXPECT_THAT(e.what(), HasSubstr("trial 0"));
  }
  const auto series = run_variant(cfg, dsc, ref);
  ASSERT_TRUE(series.fault.has_value());
  EXPECT_THAT(*series.fault, HasSubstr("overflows"));
}

}  // namespace
}  // namespace cpdnes
