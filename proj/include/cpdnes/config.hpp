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
#include <string>
#include <string_view>
#include <vector>

#include "cpdnes/engines.hpp"
#include "cpdnes/privacy.hpp"

namespace cpdnes {

enum class Metric {
  kMse,       // trial mean of ||x_k - x*||^2
  kRmseNorm,  // trial mean of ||x_k - x*||
};

Metric parse_metric(std::string_view name);
std::string_view to_string(Metric metric);

struct Threshold {
  Metric metric = Metric::kMse;
  double level = 0.0;
};

struct PrivacySettings {
  std::optional<LedgerMode> mode;  // default: closed form when available
  std::optional<double> c4;
  std::optional<double> c5;
};

struct ExperimentConfig {
  EnergyGameParams game_params;
  std::shared_ptr<const AggregativeGame> game;
  std::shared_ptr<const Topology> topology;
  StepSchedule schedule;
  InitialProfile init;
  std::vector<EngineConfig> variants;
  std::size_t trials = 100;
  std::uint64_t base_seed = 1;
  std::uint64_t iterations = 5000;
  std::optional<std::vector<double>> reference;  // explicit x*, else oracle
  std::vector<Threshold> thresholds;
  PrivacySettings privacy;

  const EngineConfig& variant(std::string_view name) const;
  void validate() const;
};

// Parses the JSON experiment document. Errors name the offending field.
ExperimentConfig parse_experiment(std::string_view json_text);
ExperimentConfig load_experiment(const std::filesystem::path& path);

// Command-line overrides applied after loading.
void apply_overrides(ExperimentConfig& cfg, std::optional<std::uint64_t> seed,
                     std::optional<std::size_t> trials,
                     std::optional<std::uint64_t> iterations);

}  // namespace cpdnes
