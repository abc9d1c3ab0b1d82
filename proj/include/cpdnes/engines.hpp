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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpdnes/compress.hpp"
#include "cpdnes/game.hpp"
#include "cpdnes/network.hpp"
#include "cpdnes/schedule.hpp"

namespace cpdnes {

enum class EngineVariant {
  kCpDnes,        // compressed estimates, diminishing (alpha beta, beta)
  kConventional,  // uncompressed dynamic average consensus
  kNpDnes,        // Gaussian-perturbed estimates with variance rho^k
  kDscDnes,       // dynamically scaled compression r_k C(y / r_k)
};

std::string_view to_string(EngineVariant v);
EngineVariant parse_engine_variant(std::string_view tag);

enum class InitRule {
  kMidpoint,           // centre of each player's box
  kLocalBestResponse,  // x_i solving P[x_i - eta g_i(x_i, x_i)] = x_i
  kExplicit,
};

struct InitialProfile {
  InitRule rule = InitRule::kMidpoint;
  std::vector<double> values;  // used by kExplicit
};

struct NoiseParams {
  double rho = 0.91;
};

enum class OverflowPolicy { kError, kSaturate };

struct DscParams {
  double r_base = 0.87;
  std::uint32_t bits = 8;
  double ymax = 90.0;
  OverflowPolicy overflow = OverflowPolicy::kError;

  // Grid spacing giving exactly `bits` bits over [0, ymax).
  QuantizerParams quantizer() const;
  double scale(std::uint64_t k) const;
};

struct EngineConfig {
  std::string name;
  EngineVariant variant = EngineVariant::kCpDnes;
  std::shared_ptr<const AggregativeGame> game;
  std::shared_ptr<const Topology> topology;
  StepSchedule schedule;
  std::shared_ptr<const Compressor> compressor;  // kCpDnes only
  std::optional<double> constant_eta;            // kConventional, pure form
  std::optional<NoiseParams> noise;              // kNpDnes only
  std::optional<DscParams> dsc;                  // kDscDnes only
  std::uint64_t iterations = 5000;
  InitialProfile init;

  void validate() const;
};

struct PlayerState {
  std::vector<double> x;
  std::vector<double> y;  // local estimate of the aggregate

  bool operator==(const PlayerState&) const = default;
};

using NetworkState = std::vector<PlayerState>;

// Initial decisions per cfg.init, with y_{i,0} = x_{i,0}.
NetworkState initial_state(const EngineConfig& cfg);
std::vector<double> local_best_response(const AggregativeGame& game, std::size_t i);

// What every player broadcasts in one round, one block of dim per player.
struct Messages {
  std::size_t dim = 0;
  std::vector<double> values;
  std::uint64_t bits = 0;       // total charged this round
  std::size_t saturated = 0;    // coordinates clamped under kSaturate

  std::span<const double> block(std::size_t i) const {
    return std::span<const double>(values).subspan(i * dim, dim);
  }
};

// Computes the round-k broadcast for cfg.variant. Draws come from
// substream(trial_seed, player, k), one draw per player shared by all
// receiving neighbours.
Messages broadcast(const NetworkState& states, std::uint64_t k,
                   const EngineConfig& cfg, std::uint64_t trial_seed);

// Applies
//   x_i <- P[x_i - a_k g_i(x_i, y_i)]
//   y_i <- y_i + b_k sum_j w_ij (q_j - q_i) + x_i^+ - x_i
// with (a_k, b_k) = (alpha_k beta_k, beta_k), or (eta, 1) in the constant
// conventional mode. When own_exact is set the own term q_i is replaced by
// the exact y_i (receivers only see perturbed neighbour values).
void apply_update(NetworkState& states, const Messages& messages, std::uint64_t k,
                  const EngineConfig& cfg, bool own_exact = false);

struct StepReport {
  std::uint64_t bits = 0;
  std::size_t saturated = 0;
};

StepReport cpdnes_step(NetworkState& states, std::uint64_t k, const EngineConfig& cfg,
                       std::uint64_t trial_seed);
StepReport conventional_step(NetworkState& states, std::uint64_t k,
                             const EngineConfig& cfg);
StepReport npdnes_step(NetworkState& states, std::uint64_t k, const EngineConfig& cfg,
                       std::uint64_t trial_seed);
StepReport dscdnes_step(NetworkState& states, std::uint64_t k, const EngineConfig& cfg,
                        std::uint64_t trial_seed);
// Dispatches on cfg.variant.
StepReport step(NetworkState& states, std::uint64_t k, const EngineConfig& cfg,
                std::uint64_t trial_seed);

// Noise added to one broadcast estimate at round k (variance rho^k).
void perturb_message(std::span<double> y, std::uint64_t k, double rho, SplitMix64& rng);

struct RunOptions {
  std::optional<std::vector<double>> reference;  // x* for the error metrics
  bool record_profiles = false;
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::uint64_t iterations = 0;
  // Indexed by k = 0..T. Error series are empty without a reference.
  std::vector<double> sq_error;
  std::vector<double> error_norm;
  std::vector<std::uint64_t> bits_cum;
  std::vector<double> mean_residual;  // ||mean(y_k) - mean(x_k)||_inf
  std::vector<double> disagreement;   // ||y_k - 1 (x) mean(x_k)||^2
  std::vector<DecisionProfile> profiles;
  double max_mean_residual = 0.0;
  double max_gradient_norm = 0.0;
  std::size_t saturated = 0;
  NetworkState final_state;

  bool operator==(const RunRecord&) const = default;
};

// T synchronous rounds. Deterministic in (cfg, seed).
RunRecord run(const EngineConfig& cfg, std::uint64_t seed, const RunOptions& options = {});

}  // namespace cpdnes
