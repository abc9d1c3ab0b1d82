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

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cpdnes/config.hpp"
#include "cpdnes/error.hpp"
#include "cpdnes/harness.hpp"
#include "cpdnes/oracle.hpp"
#include "cpdnes/plot.hpp"
#include "cpdnes/privacy.hpp"
#include "cpdnes/schedule.hpp"

namespace {

using namespace cpdnes;

struct Flags {
  std::string config;
  std::string out;
  std::string variant;
  std::string csv;
  std::string metric = "mse";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> iters;
  int parallelism = 0;
};

ExperimentConfig load(const Flags& f) {
  auto cfg = load_experiment(f.config);
  apply_overrides(cfg, f.seed, f.trials, f.iters);
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

void print_thresholds(const ExperimentConfig& cfg,
                      const std::vector<AggregateSeries>& series) {
  for (const auto& s : series) {
    if (s.fault) {
      std::cerr << fmt::format("{}: aborted: {}\n", s.variant, *s.fault);
      continue;
    }
    for (const auto& t : cfg.thresholds) {
      const auto k = first_crossing(s, t.metric, t.level);
      if (k) {
        std::cerr << fmt::format("{}: {} <= {} at k = {}, bits = {}\n", s.variant,
                                 to_string(t.metric), t.level, *k, s.bits_cum[*k]);
      } else {
        std::cerr << fmt::format("{}: {} <= {} not reached\n", s.variant,
                                 to_string(t.metric), t.level);
      }
    }
  }
}

ExecutionOptions exec_options(const Flags& f) {
  ExecutionOptions e;
  e.parallelism = f.parallelism;
  return e;
}

int cmd_ne(const Flags& f) {
  const auto cfg = load(f);
  const auto sol = solve_energy_ne(cfg.game_params);
  const auto& x = sol.x_star.values();
  std::string row;
  for (std::size_t i = 0; i < x.size(); ++i) row += fmt::format("{}{:.8f}", i ? ", " : "", x[i]);
  std::cout << fmt::format("x* = [{}]\nresidual = {:.3e}\nmethod = {}\n", row, sol.residual,
                           sol.method);
  return 0;
}

int cmd_run(const Flags& f) {
  const auto cfg = load(f);
  const auto& variant = cfg.variant(f.variant);
  const auto reference = resolve_reference(cfg);
  std::vector<AggregateSeries> series{run_variant(cfg, variant, reference, exec_options(f))};
  if (series.front().fault) throw Error(*series.front().fault);
  write_text(f.out, to_csv(series));
  print_thresholds(cfg, series);
  return 0;
}

int cmd_compare(const Flags& f) {
  const auto cfg = load(f);
  const auto series = run_experiment(cfg, exec_options(f));
  write_text(f.out, to_csv(series));
  print_thresholds(cfg, series);
  return 0;
}

int cmd_check_schedule(const Flags& f) {
  const auto cfg = load(f);
  const auto v = check_conditions(cfg.schedule);
  if (v.passes) {
    std::cout << fmt::format("pass, rate {}\n", *v.rate_exponent);
    return 0;
  }
  std::cout << "fail\n";
  for (const auto& c : v.failed_conditions) std::cout << "  violated: " << c << "\n";
  return 0;
}

std::string ln_term(double c5) {
  if (c5 == 1.0) return "ln(k+1)";
  return fmt::format("ln({}k+1)", c5);
}

int cmd_privacy(const Flags& f) {
  const auto cfg = load(f);
  const double C = cfg.game->bounds().C;
  const std::size_t n = cfg.game->dim();
  const std::vector<std::uint64_t> marks = {1, 10, 100, 1000, cfg.iterations};
  std::string head = fmt::format("{:<16}{:<36}", "variant", "ledger");
  for (auto k : marks) head += fmt::format("{:>12}", fmt::format("k={}", k));
  std::cout << head << "\n";

  for (const auto& v : cfg.variants) {
    std::string formula;
    std::vector<double> delta;
    if (v.variant == EngineVariant::kDscDnes) {
      delta = dsc_ledger(v.iterations, v.dsc->r_base, v.schedule, C, n,
                         v.dsc->quantizer().theta);
      formula = fmt::format("DSC, saturates at k = {}", saturation_iteration(delta));
    } else if (v.variant == EngineVariant::kCpDnes && v.compressor->quantizer()) {
      const double theta = v.compressor->quantizer()->theta;
      delta = privacy_column(cfg, v);
      const auto product = dp_product_check(v.schedule);
      const bool closed = cfg.privacy.mode.value_or(product ? LedgerMode::kClosedForm
                                                            : LedgerMode::kPartialSum) ==
                          LedgerMode::kClosedForm;
      if (closed) {
        const double c4 = cfg.privacy.c4.value_or(product ? product->c4 : 0.0);
        const double c5 = cfg.privacy.c5.value_or(product ? product->c5 : 1.0);
        formula = fmt::format("δ_k = min{{1, {:.4g} {}}}",
                              closed_form_coefficient(c4, c5, C, n, theta), ln_term(c5));
      } else {
        formula = fmt::format("partial sum, θ = {:.4g}", theta);
      }
    } else {
      continue;
    }
    std::string row = fmt::format("{:<16}", v.name);
    row += formula;
    const auto width = formula.size();
    row += std::string(width < 36 ? 36 - width : 1, ' ');
    for (auto k : marks) {
      row += k < delta.size() ? fmt::format("{:>12.6f}", delta[k]) : fmt::format("{:>12}", "-");
    }
    std::cout << row << "\n";
  }

  // The partial-sum ledger is always shown alongside, for comparison.
  for (const auto& v : cfg.variants) {
    if (v.variant != EngineVariant::kCpDnes || !v.compressor->quantizer()) continue;
    const auto ledger = partial_sum_ledger(v.schedule, v.iterations, C, n,
                                           v.compressor->quantizer()->theta);
    std::string row = fmt::format("{:<16}{:<36}", v.name, "partial sum");
    for (auto k : marks) {
      row += k < ledger.delta.size() ? fmt::format("{:>12.6f}", ledger.delta[k])
                                     : fmt::format("{:>12}", "-");
    }
    std::cout << row << "\n";
  }
  return 0;
}

int cmd_plot(const Flags& f) {
  const auto series = read_csv(f.csv);
  PlotOptions opts;
  opts.metric = parse_metric(f.metric);
  opts.title = opts.metric == Metric::kMse ? "trial-mean squared error"
                                           : "trial-mean error norm";
  write_text(f.out, render_svg(series, opts));
  return 0;
}

void common(CLI::App* sub, Flags& f, bool overrides) {
  sub->add_option("--config", f.config, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--out", f.out, "output path, stdout when omitted");
  if (overrides) {
    sub->add_option("--seed", f.seed, "base seed");
    sub->add_option("--trials", f.trials, "number of trials");
    sub->add_option("--iters", f.iters, "iteration budget T");
    sub->add_option("--parallelism", f.parallelism, "worker threads, 0 for default");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed, privacy-preserving distributed Nash equilibrium seeking"};
  app.require_subcommand(1);
  Flags f;

  auto* ne = app.add_subcommand("ne", "solve the game for its Nash equilibrium");
  common(ne, f, false);
  auto* run = app.add_subcommand("run", "run one variant and write its CSV");
  common(run, f, true);
  run->add_option("--variant", f.variant, "variant name")->required();
  auto* compare = app.add_subcommand("compare", "run every variant and write one CSV");
  common(compare, f, true);
  auto* schedule = app.add_subcommand("check-schedule", "check the step-size conditions");
  common(schedule, f, false);
  auto* privacy = app.add_subcommand("privacy", "print the privacy ledger table");
  common(privacy, f, true);
  auto* plot = app.add_subcommand("plot", "render a CSV to SVG");
  plot->add_option("--csv", f.csv, "CSV written by run or compare")
      ->required()
      ->check(CLI::ExistingFile);
  plot->add_option("--out", f.out, "SVG path, stdout when omitted");
  plot->add_option("--metric", f.metric, "mse or rmse-norm");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ne) return cmd_ne(f);
    if (*run) return cmd_run(f);
    if (*compare) return cmd_compare(f);
    if (*schedule) return cmd_check_schedule(f);
    if (*privacy) return cmd_privacy(f);
    if (*plot) return cmd_plot(f);
  } catch (const std::exception& e) {
    std::cerr << "cpdnes: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
