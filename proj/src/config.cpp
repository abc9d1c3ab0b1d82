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

#include "cpdnes/config.hpp"

#include <fmt/format.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cpdnes/error.hpp"

namespace cpdnes {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError(path + key, "missing");
  }
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback,
                 const std::string& path) {
  if (!obj.contains(key)) return fallback;
  return number(obj.at(key), path + key);
}

std::uint64_t count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(path, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number(v[i], fmt::format("{}[{}]", path, i)));
  }
  return out;
}

EnergyGameParams parse_game(const json& g) {
  const std::string type = text(require(g, "type", "game."), "game.type");
  if (type != "energy") throw ConfigError("game.type", "unknown game '" + type + "'");
  EnergyGameParams p;
  if (g.contains("s")) p.s = numbers(g.at("s"), "game.s");
  p.p0 = number_or(g, "p0", p.p0, "game.");
  p.h_price = number_or(g, "h", p.h_price, "game.");
  if (g.contains("box")) {
    const auto box = numbers(g.at("box"), "game.box");
    if (box.size() != 2) throw ConfigError("game.box", "expected [lo, hi]");
    p.box_lo = box[0];
    p.box_hi = box[1];
  }
  p.gradient_bound = number_or(g, "C", p.gradient_bound, "game.");
  p.validate();
  return p;
}

std::shared_ptr<const Topology> parse_topology(const json& t) {
  const std::string type = text(require(t, "type", "topology."), "topology.type");
  const auto n = count(require(t, "n", "topology."), "topology.n");
  if (type == "ring") {
    const double w = number_or(t, "weight", 1.0, "topology.");
    return std::make_shared<const Topology>(Topology::Ring(n, w));
  }
  if (type == "edges") {
    const auto& list = require(t, "edges", "topology.");
    if (!list.is_array()) throw ConfigError("topology.edges", "expected an array");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = fmt::format("topology.edges[{}]", i);
      const auto& e = list[i];
      if (!e.is_array() || e.size() < 2 || e.size() > 3) {
        throw ConfigError(path, "expected [a, b] or [a, b, weight]");
      }
      edges.push_back({count(e[0], path), count(e[1], path),
                       e.size() == 3 ? number(e[2], path) : 1.0});
    }
    return std::make_shared<const Topology>(Topology::FromEdges(n, edges));
  }
  throw ConfigError("topology.type", "unknown topology '" + type + "'");
}

StepSchedule parse_schedule(const json& s) {
  StepSchedule out;
  const auto& a = require(s, "alpha", "schedule.");
  const auto& b = require(s, "beta", "schedule.");
  out.c1 = number(require(a, "c", "schedule.alpha."), "schedule.alpha.c");
  out.omega1 = number(require(a, "omega", "schedule.alpha."), "schedule.alpha.omega");
  out.c3 = number(require(b, "c", "schedule.beta."), "schedule.beta.c");
  out.omega2 = number(require(b, "omega", "schedule.beta."), "schedule.beta.omega");
  out.c2 = number_or(s, "c2", 1.0, "schedule.");
  out.validate();
  return out;
}

InitialProfile parse_init(const json& v) {
  InitialProfile init;
  if (v.is_array()) {
    init.rule = InitRule::kExplicit;
    init.values = numbers(v, "init");
    return init;
  }
  const std::string rule = text(v, "init");
  if (rule == "midpoint") {
    init.rule = InitRule::kMidpoint;
  } else if (rule == "local-best-response") {
    init.rule = InitRule::kLocalBestResponse;
  } else {
    throw ConfigError("init", "unknown rule '" + rule + "'");
  }
  return init;
}

std::shared_ptr<const Compressor> parse_compressor(const json& c, const std::string& path) {
  const std::string type = text(require(c, "type", path + "."), path + ".type");
  if (type == "stochastic-quantizer") {
    const double theta = number(require(c, "theta", path + "."), path + ".theta");
    const double ymax = number_or(c, "ymax", 90.0, path + ".");
    return std::make_shared<const StochasticQuantizer>(
        QuantizerParams::ForRange(theta, ymax));
  }
  if (type == "identity") return std::make_shared<const IdentityCompressor>();
  if (type == "relative") {
    return std::make_shared<const RelativeCompressor>(
        number(require(c, "phi", path + "."), path + ".phi"));
  }
  throw ConfigError(path + ".type", "unknown compressor '" + type + "'");
}

EngineConfig parse_variant(const json& v, std::size_t index, const ExperimentConfig& base) {
  const std::string path = fmt::format("variants[{}]", index);
  EngineConfig e;
  try {
    e.variant =
        parse_engine_variant(text(require(v, "engine", path + "."), path + ".engine"));
  } catch (const ConfigError& err) {
    if (err.field() != "engine") throw;
    throw ConfigError(path + ".engine", err.detail());
  }
  e.name = v.contains("name") ? text(v.at("name"), path + ".name")
                              : std::string(to_string(e.variant));
  e.game = base.game;
  e.topology = base.topology;
  e.schedule = base.schedule;
  e.init = base.init;
  e.iterations = base.iterations;
  if (v.contains("iterations")) e.iterations = count(v.at("iterations"), path + ".iterations");
  if (v.contains("init")) e.init = parse_init(v.at("init"));

  switch (e.variant) {
    case EngineVariant::kCpDnes:
      e.compressor = parse_compressor(require(v, "compressor", path + "."),
                                      path + ".compressor");
      break;
    case EngineVariant::kConventional:
      if (v.contains("eta")) e.constant_eta = number(v.at("eta"), path + ".eta");
      break;
    case EngineVariant::kNpDnes:
      e.noise = NoiseParams{number(require(v, "rho", path + "."), path + ".rho")};
      break;
    case EngineVariant::kDscDnes: {
      DscParams d;
      d.r_base = number(require(v, "r", path + "."), path + ".r");
      if (v.contains("bits")) d.bits = static_cast<std::uint32_t>(count(v.at("bits"), path + ".bits"));
      d.ymax = number_or(v, "ymax", d.ymax, path + ".");
      if (v.contains("overflow")) {
        const std::string o = text(v.at("overflow"), path + ".overflow");
        if (o == "error") {
          d.overflow = OverflowPolicy::kError;
        } else if (o == "saturate") {
          d.overflow = OverflowPolicy::kSaturate;
        } else {
          throw ConfigError(path + ".overflow", "expected 'error' or 'saturate'");
        }
      }
      e.dsc = d;
      break;
    }
  }
  try {
    e.validate();
  } catch (const ConfigError& err) {
    throw ConfigError(path + "." + err.field(), err.detail());
  }
  return e;
}

}  // namespace

Metric parse_metric(std::string_view name) {
  if (name == "mse") return Metric::kMse;
  if (name == "rmse-norm") return Metric::kRmseNorm;
  throw ConfigError("metric", fmt::format("unknown metric '{}'", name));
}

std::string_view to_string(Metric metric) {
  return metric == Metric::kMse ? "mse" : "rmse-norm";
}

const EngineConfig& ExperimentConfig::variant(std::string_view name) const {
  for (const auto& v : variants) {
    if (v.name == name) return v;
  }
  throw ConfigError("variants", fmt::format("no variant named '{}'", name));
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials", "must be at least 1");
  if (variants.empty()) throw ConfigError("variants", "at least one variant required");
  for (const auto& t : thresholds) {
    if (!(t.level > 0.0)) throw ConfigError("thresholds", "levels must be positive");
  }
  if (reference && reference->size() != game->players() * game->dim()) {
    throw ConfigError("reference", "wrong length");
  }
  for (const auto& v : variants) v.validate();
}

ExperimentConfig parse_experiment(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  if (!doc.is_object()) throw ConfigError("<document>", "expected an object");

  ExperimentConfig cfg;
  cfg.game_params = parse_game(require(doc, "game", ""));
  std::shared_ptr<const AggregativeGame> game =
      std::make_shared<const EnergyGame>(cfg.game_params);
  const auto& g = doc.at("game");
  if (g.contains("clip")) {
    if (!g.at("clip").is_boolean()) throw ConfigError("game.clip", "expected a boolean");
    if (g.at("clip").get<bool>()) {
      game = std::make_shared<const ClippedGame>(game, cfg.game_params.gradient_bound);
    }
  }
  cfg.game = game;
  cfg.topology = parse_topology(require(doc, "topology", ""));
  if (cfg.topology->nodes() != cfg.game->players()) {
    throw ConfigError("topology.n", fmt::format("{} nodes for {} players",
                                                cfg.topology->nodes(),
                                                cfg.game->players()));
  }
  cfg.schedule = parse_schedule(require(doc, "schedule", ""));
  if (doc.contains("init")) cfg.init = parse_init(doc.at("init"));
  if (doc.contains("trials")) cfg.trials = count(doc.at("trials"), "trials");
  if (doc.contains("seed")) cfg.base_seed = count(doc.at("seed"), "seed");
  if (doc.contains("iterations")) cfg.iterations = count(doc.at("iterations"), "iterations");
  if (doc.contains("reference")) {
    const auto& r = doc.at("reference");
    if (r.is_string()) {
      if (r.get<std::string>() != "oracle") {
        throw ConfigError("reference", "expected \"oracle\" or an explicit vector");
      }
    } else {
      cfg.reference = numbers(r, "reference");
    }
  }
  if (doc.contains("thresholds")) {
    const auto& list = doc.at("thresholds");
    if (!list.is_array()) throw ConfigError("thresholds", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = fmt::format("thresholds[{}]", i);
      Threshold t;
      t.metric = parse_metric(text(require(list[i], "metric", path + "."), path + ".metric"));
      t.level = number(require(list[i], "level", path + "."), path + ".level");
      cfg.thresholds.push_back(t);
    }
  }
  if (doc.contains("privacy")) {
    const auto& p = doc.at("privacy");
    if (p.contains("mode")) {
      const std::string mode = text(p.at("mode"), "privacy.mode");
      if (mode == "closed-form") {
        cfg.privacy.mode = LedgerMode::kClosedForm;
      } else if (mode == "partial-sum") {
        cfg.privacy.mode = LedgerMode::kPartialSum;
      } else {
        throw ConfigError("privacy.mode", "expected 'closed-form' or 'partial-sum'");
      }
    }
    if (p.contains("c4")) cfg.privacy.c4 = number(p.at("c4"), "privacy.c4");
    if (p.contains("c5")) cfg.privacy.c5 = number(p.at("c5"), "privacy.c5");
  }

  const auto& variants = require(doc, "variants", "");
  if (!variants.is_array()) throw ConfigError("variants", "expected an array");
  for (std::size_t i = 0; i < variants.size(); ++i) {
    cfg.variants.push_back(parse_variant(variants[i], i, cfg));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment(buf.str());
}

void apply_overrides(ExperimentConfig& cfg, std::optional<std::uint64_t> seed,
                     std::optional<std::size_t> trials,
                     std::optional<std::uint64_t> iterations) {
  if (seed) cfg.base_seed = *seed;
  if (trials) cfg.trials = *trials;
  if (iterations) {
    cfg.iterations = *iterations;
    for (auto& v : cfg.variants) v.iterations = *iterations;
  }
  cfg.validate();
}

}  // namespace cpdnes
