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

#include "cpdnes/engines.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cpdnes/error.hpp"

namespace cpdnes {

std::string_view to_string(EngineVariant v) {
  switch (v) {
    case EngineVariant::kCpDnes:
      return "cp-dnes";
    case EngineVariant::kConventional:
      return "conventional";
    case EngineVariant::kNpDnes:
      return "np-dnes";
    case EngineVariant::kDscDnes:
      return "dsc-dnes";
  }
  return "unknown";
}

EngineVariant parse_engine_variant(std::string_view tag) {
  if (tag == "cp-dnes") return EngineVariant::kCpDnes;
  if (tag == "conventional") return EngineVariant::kConventional;
  if (tag == "np-dnes") return EngineVariant::kNpDnes;
  if (tag == "dsc-dnes") return EngineVariant::kDscDnes;
  throw ConfigError("engine", fmt::format("unknown engine variant '{}'", tag));
}

QuantizerParams DscParams::quantizer() const {
  return QuantizerParams{std::ldexp(ymax, -static_cast<int>(bits)), bits, ymax};
}

double DscParams::scale(std::uint64_t k) const {
  return std::pow(r_base, static_cast<double>(k));
}

void EngineConfig::validate() const {
  if (!game) throw ConfigError("game", "missing");
  if (!topology) throw ConfigError("topology", "missing");
  if (topology->nodes() != game->players()) {
    throw ConfigError("topology", fmt::format("{} nodes for {} players",
                                              topology->nodes(), game->players()));
  }
  schedule.validate();
  const bool cp = variant == EngineVariant::kCpDnes;
  const bool np = variant == EngineVariant::kNpDnes;
  const bool dsc = variant == EngineVariant::kDscDnes;
  const bool conv = variant == EngineVariant::kConventional;
  if (cp != static_cast<bool>(compressor)) {
    throw ConfigError("compressor", cp ? "required by cp-dnes"
                                       : "only valid for cp-dnes");
  }
  if (np != noise.has_value()) {
    throw ConfigError("rho", np ? "required by np-dnes" : "only valid for np-dnes");
  }
  if (dsc != this->dsc.has_value()) {
    throw ConfigError("r", dsc ? "required by dsc-dnes" : "only valid for dsc-dnes");
  }
  if (constant_eta && !conv) {
    throw ConfigError("eta", "only valid for conventional");
  }
  if (constant_eta && !(*constant_eta > 0.0)) {
    throw ConfigError("eta", "must be positive");
  }
  if (noise && !(noise->rho > 0.0 && noise->rho < 1.0)) {
    throw ConfigError("rho", "must lie in (0, 1)");
  }
  if (this->dsc) {
    if (!(this->dsc->r_base > 0.0 && this->dsc->r_base < 1.0)) {
      throw ConfigError("r", "must lie in (0, 1)");
    }
    if (this->dsc->bits < 1) throw ConfigError("bits", "must be at least 1");
    if (!(this->dsc->ymax > 0.0)) throw ConfigError("ymax", "must be positive");
  }
  if (init.rule == InitRule::kExplicit &&
      init.values.size() != game->players() * game->dim()) {
    throw ConfigError("init.x", fmt::format("expected {} values, got {}",
                                            game->players() * game->dim(),
                                            init.values.size()));
  }
}

std::vector<double> local_best_response(const AggregativeGame& game, std::size_t i) {
  // Fixed point of x = P[x - eta g_i(x, x)]: player i's best response when its
  // own decision stands in for the aggregate, computable before any exchange.
  const auto& box = game.constraint(i);
  const GameBounds b = game.bounds();
  const double eta = 1.0 / (b.L_phi + b.L_g);
  std::vector<double> x = box.midpoint();
  std::vector<double> g(x.size());
  for (int it = 0; it < 100000; ++it) {
    game.pseudo_gradient(i, x, x, g);
    double change = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double next = std::clamp(x[j] - eta * g[j], box.lo()[j], box.hi()[j]);
      change = std::max(change, std::abs(next - x[j]));
      x[j] = next;
    }
    if (change < 1e-13) break;
  }
  return x;
}

NetworkState initial_state(const EngineConfig& cfg) {
  const auto& game = *cfg.game;
  const std::size_t n = game.dim();
  NetworkState states(game.players());
  for (std::size_t i = 0; i < states.size(); ++i) {
    switch (cfg.init.rule) {
      case InitRule::kMidpoint:
        states[i].x = game.constraint(i).midpoint();
        break;
      case InitRule::kLocalBestResponse:
        states[i].x = local_best_response(game, i);
        break;
      case InitRule::kExplicit:
        states[i].x.assign(cfg.init.values.begin() + i * n,
                           cfg.init.values.begin() + (i + 1) * n);
        break;
    }
    states[i].y = states[i].x;
  }
  return states;
}

void perturb_message(std::span<double> y, std::uint64_t k, double rho, SplitMix64& rng) {
  const double sd = std::sqrt(std::pow(rho, static_cast<double>(k)));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : y) v += sd * normal(rng);
}

Messages broadcast(const NetworkState& states, std::uint64_t k,
                   const EngineConfig& cfg, std::uint64_t trial_seed) {
  const std::size_t n_players = states.size();
  Messages m;
  m.dim = cfg.game->dim();
  m.values.resize(n_players * m.dim);
  std::span<double> all(m.values);

  for (std::size_t i = 0; i < n_players; ++i) {
    auto out = all.subspan(i * m.dim, m.dim);
    const auto& y = states[i].y;
    switch (cfg.variant) {
      case EngineVariant::kCpDnes: {
        auto rng = substream(trial_seed, i, k);
        m.bits += cfg.compressor->compress(y, out, rng);
        break;
      }
      case EngineVariant::kConventional:
        std::copy(y.begin(), y.end(), out.begin());
        m.bits += 32 * m.dim;
        break;
      case EngineVariant::kNpDnes: {
        auto rng = substream(trial_seed, i, k, StreamPurpose::kNoise);
        std::copy(y.begin(), y.end(), out.begin());
        perturb_message(out, k, cfg.noise->rho, rng);
        m.bits += 32 * m.dim;
        break;
      }
      case EngineVariant::kDscDnes: {
        const auto q = cfg.dsc->quantizer();
        const double r = cfg.dsc->scale(k);
        for (std::size_t j = 0; j < m.dim; ++j) out[j] = y[j] / r;
        if (cfg.dsc->overflow == OverflowPolicy::kSaturate) {
          m.saturated += saturate_in_place(out, q);
        }
        auto rng = substream(trial_seed, i, k);
        try {
          m.bits += quantize_into(out, q, rng, out);
        } catch (const RangeError& e) {
          throw NumericFault(fmt::format("dsc-dnes: player {} scaled estimate "
                                         "overflows at iteration {}: {}",
                                         i, k, e.what()),
                             k);
        }
        for (double& v : out) v *= r;
        break;
      }
    }
  }
  return m;
}

void apply_update(NetworkState& states, const Messages& messages, std::uint64_t k,
                  const EngineConfig& cfg, bool own_exact) {
  const auto& game = *cfg.game;
  const auto& topo = *cfg.topology;
  const std::size_t n = game.dim();
  const bool constant = cfg.constant_eta.has_value();
  const double x_step = constant ? *cfg.constant_eta : cfg.schedule.product(k);
  const double mix = constant ? 1.0 : cfg.schedule.beta(k);

  std::vector<double> g(n);
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto& s = states[i];
    game.pseudo_gradient(i, s.x, s.y, g);
    const auto& box = game.constraint(i);
    const auto own = messages.block(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double x_next = std::clamp(s.x[j] - x_step * g[j], box.lo()[j], box.hi()[j]);
      const double self = own_exact ? s.y[j] : own[j];
      double consensus = 0.0;
      for (const Neighbor& nb : topo.neighbors(i)) {
        consensus += nb.weight * (messages.block(nb.node)[j] - self);
      }
      s.y[j] += mix * consensus + (x_next - s.x[j]);
      s.x[j] = x_next;
    }
  }
}

namespace {

void check_finite(const NetworkState& states, std::uint64_t k) {
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < states[i].x.size(); ++j) {
      if (!std::isfinite(states[i].x[j]) || !std::isfinite(states[i].y[j])) {
        throw NumericFault(fmt::format("non-finite state for player {} after "
                                       "iteration {}",
                                       i, k),
                           k);
      }
    }
  }
}

StepReport finish(NetworkState& states, const Messages& m, std::uint64_t k,
                  const EngineConfig& cfg, bool own_exact) {
  apply_update(states, m, k, cfg, own_exact);
  check_finite(states, k);
  return {m.bits, m.saturated};
}

}  // namespace

StepReport cpdnes_step(NetworkState& states, std::uint64_t k, const EngineConfig& cfg,
                       std::uint64_t trial_seed) {
  return finish(states, broadcast(states, k, cfg, trial_seed), k, cfg, false);
}

StepReport conventional_step(NetworkState& states, std::uint64_t k,
                             const EngineConfig& cfg) {
  return finish(states, broadcast(states, k, cfg, 0), k, cfg, false);
}

StepReport npdnes_step(NetworkState& states, std::uint64_t k, const EngineConfig& cfg,
                       std::uint64_t trial_seed) {
  return finish(states, broadcast(states, k, cfg, trial_seed), k, cfg, true);
}

StepReport dscdnes_step(NetworkState& states, std::uint64_t k, const EngineConfig& cfg,
                        std::uint64_t trial_seed) {
  return finish(states, broadcast(states, k, cfg, trial_seed), k, cfg, false);
}

StepReport step(NetworkState& states, std::uint64_t k, const EngineConfig& cfg,
                std::uint64_t trial_seed) {
  switch (cfg.variant) {
    case EngineVariant::kCpDnes:
      return cpdnes_step(states, k, cfg, trial_seed);
    case EngineVariant::kConventional:
      return conventional_step(states, k, cfg);
    case EngineVariant::kNpDnes:
      return npdnes_step(states, k, cfg, trial_seed);
    case EngineVariant::kDscDnes:
      return dscdnes_step(states, k, cfg, trial_seed);
  }
  throw ConfigError("engine", "unhandled variant");
}

namespace {

struct Observer {
  const EngineConfig& cfg;
  const RunOptions& options;
  RunRecord& rec;

  void observe(const NetworkState& states) {
    const auto& game = *cfg.game;
    const std::size_t n = game.dim();
    const double players = static_cast<double>(states.size());

    std::vector<double> mx(n, 0.0), my(n, 0.0);
    for (const auto& s : states) {
      for (std::size_t j = 0; j < n; ++j) {
        mx[j] += s.x[j];
        my[j] += s.y[j];
      }
    }
    double residual = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      mx[j] /= players;
      my[j] /= players;
      residual = std::max(residual, std::abs(my[j] - mx[j]));
    }
    rec.mean_residual.push_back(residual);
    rec.max_mean_residual = std::max(rec.max_mean_residual, residual);

    double disagreement = 0.0;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double d = states[i].y[j] - mx[j];
        disagreement += d * d;
      }
      game.pseudo_gradient(i, states[i].x, states[i].y, g);
      double sq = 0.0;
      for (double v : g) sq += v * v;
      rec.max_gradient_norm = std::max(rec.max_gradient_norm, std::sqrt(sq));
    }
    rec.disagreement.push_back(disagreement);

    if (options.reference) {
      const auto& ref = *options.reference;
      double sq = 0.0;
      for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const double d = states[i].x[j] - ref[i * n + j];
          sq += d * d;
        }
      }
      rec.sq_error.push_back(sq);
      rec.error_norm.push_back(std::sqrt(sq));
    }
    if (options.record_profiles) {
      DecisionProfile p(states.size(), n);
      for (std::size_t i = 0; i < states.size(); ++i) {
        std::copy(states[i].x.begin(), states[i].x.end(), p.block(i).begin());
      }
      rec.profiles.push_back(std::move(p));
    }
  }
};

}  // namespace

RunRecord run(const EngineConfig& cfg, std::uint64_t seed, const RunOptions& options) {
  cfg.validate();
  if (options.reference &&
      options.reference->size() != cfg.game->players() * cfg.game->dim()) {
    throw StructuralError("run: reference profile has the wrong size");
  }
  RunRecord rec;
  rec.seed = seed;
  rec.iterations = cfg.iterations;
  const std::size_t len = cfg.iterations + 1;
  rec.bits_cum.reserve(len);
  rec.mean_residual.reserve(len);
  rec.disagreement.reserve(len);
  if (options.reference) {
    rec.sq_error.reserve(len);
    rec.error_norm.reserve(len);
  }

  NetworkState states = initial_state(cfg);
  Observer obs{cfg, options, rec};
  obs.observe(states);
  rec.bits_cum.push_back(0);

  for (std::uint64_t k = 0; k < cfg.iterations; ++k) {
    StepReport r;
    try {
      r = step(states, k, cfg, seed);
    } catch (const RangeError& e) {
      throw NumericFault(fmt::format("{} at iteration {}: {}", cfg.name, k, e.what()), k);
    } catch (const NumericFault& e) {
      throw NumericFault(fmt::format("{}: {}", cfg.name, e.what()), e.iteration());
    }
    rec.bits_cum.push_back(rec.bits_cum.back() + r.bits);
    rec.saturated += r.saturated;
    obs.observe(states);
  }
  rec.final_state = std::move(states);
  return rec;
}

}  // namespace cpdnes
