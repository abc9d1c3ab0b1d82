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

#include <benchmark/benchmark.h>

#include <filesystem>

#include "cpdnes/config.hpp"
#include "cpdnes/harness.hpp"

namespace {

using namespace cpdnes;

const ExperimentConfig& experiment() {
  static const ExperimentConfig cfg = [] {
    auto c = load_experiment(std::filesystem::path(CPDNES_SOURCE_DIR) /
                             "configs/energy_game.json");
    apply_overrides(c, std::nullopt, 16, 1000);
    return c;
  }();
  return cfg;
}

void BM_TrialsSerial(benchmark::State& state) {
  const auto& cfg = experiment();
  const auto ref = resolve_reference(cfg);
  for (auto _ : state) {
    auto r = run_trials_serial(cfg.variants[1], cfg.trials, cfg.base_seed, ref);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_TrialsSerial)->Unit(benchmark::kMillisecond);

void BM_TrialsParallel(benchmark::State& state) {
  const auto& cfg = experiment();
  const auto ref = resolve_reference(cfg);
  for (auto _ : state) {
    auto r = run_trials_parallel(cfg.variants[1], cfg.trials, cfg.base_seed, ref,
                                 static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_TrialsParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Aggregate(benchmark::State& state) {
  const auto& cfg = experiment();
  const auto ref = resolve_reference(cfg);
  const auto records = run_trials_serial(cfg.variants[1], cfg.trials, cfg.base_seed, ref);
  for (auto _ : state) {
    auto s = state.range(0) == 0 ? aggregate_trials_serial("C2", records)
                                 : aggregate_trials_parallel("C2", records);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Aggregate)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
