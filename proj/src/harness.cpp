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

#include <fmt/format.h>
#include <omp.h>

#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>

#include "cpdnes/error.hpp"
#include "cpdnes/oracle.hpp"

namespace cpdnes {

namespace {

RunRecord run_one(const EngineConfig& cfg, std::size_t trial, std::uint64_t base_seed,
                  const RunOptions& opts) {
  try {
    return run(cfg, base_seed + trial, opts);
  } catch (const NumericFault& e) {
    throw TrialFault(fmt::format("variant '{}' trial {}: {}", cfg.name, trial, e.what()),
                     trial, e.iteration());
  }
}

RunOptions options_for(const std::vector<double>& reference) {
  RunOptions opts;
  opts.reference = reference;
  return opts;
}

struct Moments {
  double mean;
  double std;
};

// Two-pass mean and population standard deviation, in trial order.
template <typename Get>
Moments moments(std::span<const RunRecord> records, Get get) {
  double sum = 0.0;
  for (const auto& r : records) sum += get(r);
  const double mean = sum / static_cast<double>(records.size());
  double ss = 0.0;
  for (const auto& r : records) {
    const double d = get(r) - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / static_cast<double>(records.size()))};
}

AggregateSeries prepare(std::string variant, std::span<const RunRecord> records) {
  if (records.empty()) throw StructuralError("aggregate: no trials");
  const std::size_t len = records.front().sq_error.size();
  for (const auto& r : records) {
    if (r.sq_error.size() != len || r.bits_cum.size() != len) {
      throw StructuralError("aggregate: trials differ in length or lack a reference");
    }
  }
  AggregateSeries s;
  s.variant = std::move(variant);
  s.trials = records.size();
  s.mse_mean.resize(len);
  s.mse_std.resize(len);
  s.norm_mean.resize(len);
  s.norm_std.resize(len);
  // Fixed-rate compressors: identical for every trial.
  s.bits_cum = records.front().bits_cum;
  s.delta.assign(len, std::numeric_limits<double>::quiet_NaN());
  for (const auto& r : records) {
    s.max_mean_residual = std::max(s.max_mean_residual, r.max_mean_residual);
    s.saturated += r.saturated;
  }
  return s;
}

void reduce_at(AggregateSeries& s, std::span<const RunRecord> records, std::size_t k) {
  const auto mse = moments(records, [k](const RunRecord& r) { return r.sq_error[k]; });
  const auto nrm = moments(records, [k](const RunRecord& r) { return r.error_norm[k]; });
  s.mse_mean[k] = mse.mean;
  s.mse_std[k] = mse.std;
  s.norm_mean[k] = nrm.mean;
  s.norm_std[k] = nrm.std;
}

}  // namespace

std::vector<RunRecord> run_trials_serial(const EngineConfig& cfg, std::size_t trials,
                                         std::uint64_t base_seed,
                                         const std::vector<double>& reference) {
  const auto opts = options_for(reference);
  std::vector<RunRecord> out;
  out.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) out.push_back(run_one(cfg, t, base_seed, opts));
  return out;
}

std::vector<RunRecord> run_trials_parallel(const EngineConfig& cfg, std::size_t trials,
                                           std::uint64_t base_seed,
                                           const std::vector<double>& reference,
                                           int parallelism) {
  cfg.validate();
  const auto opts = options_for(reference);
  std::vector<RunRecord> out(trials);
  std::vector<std::exception_ptr> errors(trials);
  const int threads = parallelism > 0 ? parallelism : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(trials);

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t t = 0; t < n; ++t) {
    try {
      out[t] = run_one(cfg, static_cast<std::size_t>(t), base_seed, opts);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  // Report the lowest faulting trial, as the serial path would.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

AggregateSeries aggregate_trials_serial(std::string variant,
                                        std::span<const RunRecord> records) {
  AggregateSeries s = prepare(std::move(variant), records);
  for (std::size_t k = 0; k < s.length(); ++k) reduce_at(s, records, k);
  return s;
}

AggregateSeries aggregate_trials_parallel(std::string variant,
                                          std::span<const RunRecord> records,
                                          int parallelism) {
  AggregateSeries s = prepare(std::move(variant), records);
  const int threads = parallelism > 0 ? parallelism : omp_get_max_threads();
  const auto len = static_cast<std::int64_t>(s.length());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t k = 0; k < len; ++k) reduce_at(s, records, static_cast<std::size_t>(k));
  return s;
}

std::vector<double> resolve_reference(const ExperimentConfig& cfg) {
  if (cfg.reference) return *cfg.reference;
  return solve_energy_ne(cfg.game_params).x_star.values();
}

std::vector<double> privacy_column(const ExperimentConfig& cfg,
                                   const EngineConfig& variant) {
  const std::size_t len = variant.iterations + 1;
  const double C = cfg.game->bounds().C;
  const std::size_t n = cfg.game->dim();

  if (variant.variant == EngineVariant::kDscDnes) {
    return dsc_ledger(variant.iterations, variant.dsc->r_base, variant.schedule, C, n,
                      variant.dsc->quantizer().theta);
  }
  if (variant.variant != EngineVariant::kCpDnes || !variant.compressor->quantizer()) {
    return std::vector<double>(len, std::numeric_limits<double>::quiet_NaN());
  }
  const double theta = variant.compressor->quantizer()->theta;
  const auto product = dp_product_check(variant.schedule);
  const LedgerMode mode = cfg.privacy.mode.value_or(
      product ? LedgerMode::kClosedForm : LedgerMode::kPartialSum);
  if (mode == LedgerMode::kPartialSum) {
    return partial_sum_ledger(variant.schedule, variant.iterations, C, n, theta).delta;
  }
  const auto c4 = cfg.privacy.c4 ? cfg.privacy.c4 : (product ? std::optional(product->c4) : std::nullopt);
  const auto c5 = cfg.privacy.c5 ? cfg.privacy.c5 : (product ? std::optional(product->c5) : std::nullopt);
  if (!c4 || !c5) {
    throw ConfigError("privacy.c4",
                      "closed-form ledger needs c4 and c5 when the schedule's step "
                      "product is not hyperbolic");
  }
  return closed_form_ledger(variant.iterations, *c4, *c5, C, n, theta).delta;
}

AggregateSeries run_variant(const ExperimentConfig& cfg, const EngineConfig& variant,
                            const std::vector<double>& reference,
                            const ExecutionOptions& exec) {
  std::vector<RunRecord> records;
  try {
    records = exec.mode == Execution::kSerial
                  ? run_trials_serial(variant, cfg.trials, cfg.base_seed, reference)
                  : run_trials_parallel(variant, cfg.trials, cfg.base_seed, reference,
                                        exec.parallelism);
  } catch (const TrialFault& e) {
    AggregateSeries failed;
    failed.variant = variant.name;
    failed.trials = cfg.trials;
    failed.fault = e.what();
    return failed;
  }
  AggregateSeries s = exec.mode == Execution::kSerial
                          ? aggregate_trials_serial(variant.name, records)
                          : aggregate_trials_parallel(variant.name, records,
                                                      exec.parallelism);
  s.delta = privacy_column(cfg, variant);
  return s;
}

std::vector<AggregateSeries> run_experiment(const ExperimentConfig& cfg,
                                            const ExecutionOptions& exec) {
  cfg.validate();
  const auto reference = resolve_reference(cfg);
  std::vector<AggregateSeries> out;
  for (const auto& v : cfg.variants) out.push_back(run_variant(cfg, v, reference, exec));
  return out;
}

std::optional<std::uint64_t> first_crossing(const AggregateSeries& series,
                                            Metric metric, double level) {
  const auto& values = metric == Metric::kMse ? series.mse_mean : series.norm_mean;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] <= level) return k;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> bits_to_threshold(const AggregateSeries& series,
                                               Metric metric, double level) {
  const auto k = first_crossing(series, metric, level);
  if (!k) return std::nullopt;
  return series.bits_cum[*k];
}

std::string to_csv(std::span<const AggregateSeries> series) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& s : series) {
    if (s.fault) continue;
    if (s.variant.find_first_of(",\n") != std::string::npos) {
      throw StructuralError("variant name '" + s.variant + "' cannot go in a CSV field");
    }
    for (std::size_t k = 0; k < s.length(); ++k) {
      out += fmt::format("{},{},{:.10g},{:.10g},{:.10g},{},{:.10g}\n", k, s.variant,
                         s.mse_mean[k], s.mse_std[k], s.norm_mean[k], s.bits_cum[k],
                         s.delta[k]);
    }
  }
  return out;
}

void emit_csv(std::span<const AggregateSeries> series, const std::filesystem::path& path) {
  const std::string text = to_csv(series);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write CSV to " + path.string());
  out << text;
  if (!out) throw Error("I/O failure writing " + path.string());
}

std::vector<AggregateSeries> parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw StructuralError("CSV header mismatch");
  }
  std::vector<AggregateSeries> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 7) {
      throw StructuralError(fmt::format("CSV row {} has {} fields", row, f.size()));
    }
    if (out.empty() || out.back().variant != f[1]) {
      out.emplace_back();
      out.back().variant = f[1];
    }
    auto& s = out.back();
    s.mse_mean.push_back(std::strtod(f[2].c_str(), nullptr));
    s.mse_std.push_back(std::strtod(f[3].c_str(), nullptr));
    s.norm_mean.push_back(std::strtod(f[4].c_str(), nullptr));
    s.bits_cum.push_back(std::strtoull(f[5].c_str(), nullptr, 10));
    s.delta.push_back(std::strtod(f[6].c_str(), nullptr));
  }
  return out;
}

std::vector<AggregateSeries> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open CSV " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

}  // namespace cpdnes
