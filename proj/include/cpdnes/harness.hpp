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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpdnes/config.hpp"
#include "cpdnes/engines.hpp"
#include "cpdnes/error.hpp"

namespace cpdnes {

// Pointwise trial statistics for one variant, indexed by k = 0..T.
struct AggregateSeries {
  std::string variant;
  std::size_t trials = 0;
  std::vector<double> mse_mean;
  std::vector<double> mse_std;
  std::vector<double> norm_mean;
  std::vector<double> norm_std;
  std::vector<std::uint64_t> bits_cum;
  std::vector<double> delta;  // NaN where no ledger applies
  double max_mean_residual = 0.0;
  std::size_t saturated = 0;
  std::optional<std::string> fault;  // set when a trial aborted the variant

  std::size_t length() const { return mse_mean.size(); }
  bool operator==(const AggregateSeries&) const = default;
};

enum class Execution { kSerial, kParallel };

struct ExecutionOptions {
  Execution mode = Execution::kParallel;
  int parallelism = 0;  // 0: OpenMP default
};

// Trial t runs with seed base_seed + t. Results are ordered by trial index
// whatever order they complete in. A faulting trial rethrows as TrialFault.
std::vector<RunRecord> run_trials_serial(const EngineConfig& cfg, std::size_t trials,
                                         std::uint64_t base_seed,
                                         const std::vector<double>& reference);
std::vector<RunRecord> run_trials_parallel(const EngineConfig& cfg, std::size_t trials,
                                           std::uint64_t base_seed,
                                           const std::vector<double>& reference,
                                           int parallelism = 0);

class TrialFault : public Error {
 public:
  TrialFault(const std::string& what, std::size_t trial, std::uint64_t iteration)
      : Error(what), trial_(trial), iteration_(iteration) {}
  std::size_t trial() const { return trial_; }
  std::uint64_t iteration() const { return iteration_; }

 private:
  std::size_t trial_;
  std::uint64_t iteration_;
};

// Mean and (population) standard deviation over trials at every k, reduced in
// trial order.
AggregateSeries aggregate_trials_serial(std::string variant,
                                        std::span<const RunRecord> records);
AggregateSeries aggregate_trials_parallel(std::string variant,
                                          std::span<const RunRecord> records,
                                          int parallelism = 0);

// x* from the config, or from the oracle when none is given.
std::vector<double> resolve_reference(const ExperimentConfig& cfg);

// delta_k column for one variant; NaN when the variant has no ledger.
std::vector<double> privacy_column(const ExperimentConfig& cfg, const EngineConfig& variant);

AggregateSeries run_variant(const ExperimentConfig& cfg, const EngineConfig& variant,
                            const std::vector<double>& reference,
                            const ExecutionOptions& exec = {});
std::vector<AggregateSeries> run_experiment(const ExperimentConfig& cfg,
                                            const ExecutionOptions& exec = {});

// Cumulative bits at the first k whose trial-mean metric is <= level.
std::optional<std::uint64_t> bits_to_threshold(const AggregateSeries& series,
                                               Metric metric, double level);
std::optional<std::uint64_t> first_crossing(const AggregateSeries& series,
                                            Metric metric, double level);

inline constexpr std::string_view kCsvHeader =
    "k,variant,mse_mean,mse_std,norm_mean,bits_cum,delta_k";

std::string to_csv(std::span<const AggregateSeries> series);
void emit_csv(std::span<const AggregateSeries> series, const std::filesystem::path& path);
// Inverse of to_csv at printed precision (std and bit columns only as stored).
std::vector<AggregateSeries> parse_csv(std::string_view text);
std::vector<AggregateSeries> read_csv(const std::filesystem::path& path);

}  // namespace cpdnes
