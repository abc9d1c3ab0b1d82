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

#include "cpdnes/compress.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "cpdnes/error.hpp"

namespace cpdnes {

namespace {

// One stochastic rounding of v onto the grid step * Z.
double stochastic_round(double v, double step, SplitMix64& rng) {
  const double scaled = v / step;
  const double l = std::floor(scaled);
  const double p_up = scaled - l;
  return (rng.uniform() < p_up ? l + 1.0 : l) * step;
}

}  // namespace

QuantizerParams QuantizerParams::ForRange(double theta, double ymax) {
  QuantizerParams p{theta, bits_for(theta, ymax), ymax};
  p.validate();
  return p;
}

double QuantizerParams::range() const { return std::ldexp(theta, static_cast<int>(bits)); }

double QuantizerParams::lowest_level() const {
  return -std::ldexp(theta, static_cast<int>(bits) - 1);
}

double QuantizerParams::highest_level() const { return range() - theta; }

void QuantizerParams::validate() const {
  if (!(theta > 0.0)) throw ConfigError("compressor.theta", "must be positive");
  if (bits < 1) throw ConfigError("compressor.bits", "must be at least 1");
  if (!(ymax > 0.0)) throw ConfigError("compressor.ymax", "must be positive");
  if (range() < ymax) {
    throw ConfigError("compressor",
                      fmt::format("2^b * theta = {} is below ymax = {}",
                                  range(), ymax));
  }
}

std::uint32_t bits_for(double theta, double ymax) {
  if (!(theta > 0.0) || !(ymax > 0.0)) {
    throw ConfigError("compressor", "theta and ymax must be positive");
  }
  // Smallest b >= 1 with 2^b >= ymax / theta, exact at powers of two.
  std::uint32_t b = 1;
  while (std::ldexp(theta, static_cast<int>(b)) < ymax) ++b;
  return b;
}

std::uint64_t quantize_into(std::span<const double> x, const QuantizerParams& params,
                            SplitMix64& rng, std::span<double> out) {
  const double limit = params.range();
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(std::abs(x[j]) < limit)) {
      throw RangeError(fmt::format("quantizer input {} at coordinate {} is not "
                                   "representable (|x| must be < 2^{} * {} = {})",
                                   x[j], j, params.bits, params.theta, limit),
                       j);
    }
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    out[j] = stochastic_round(x[j], params.theta, rng);
  }
  return x.size() * params.bits;
}

Compressed quantize(std::span<const double> x, const QuantizerParams& params,
                    SplitMix64& rng) {
  Compressed c;
  c.values.resize(x.size());
  c.bits = quantize_into(x, params, rng, c.values);
  return c;
}

std::size_t saturate_in_place(std::span<double> x, const QuantizerParams& params) {
  const double lo = params.lowest_level();
  const double hi = params.highest_level();
  std::size_t clamped = 0;
  for (double& v : x) {
    if (v < lo || v > hi) {
      v = std::clamp(v, lo, hi);
      ++clamped;
    }
  }
  return clamped;
}

Compressed identity_compress(std::span<const double> x) {
  return Compressed{std::vector<double>(x.begin(), x.end()), 32 * x.size()};
}

std::uint64_t relative_bits(std::size_t n, double phi) {
  // Coordinates lie in [-||x||, ||x||]; the grid covers that span with
  // sqrt(n / phi) + 2 points.
  const double points = std::ceil(std::sqrt(static_cast<double>(n) / phi)) + 2.0;
  const auto per_scalar = static_cast<std::uint64_t>(std::ceil(std::log2(points)));
  return 32 + n * per_scalar;
}

Compressed relative_compress(std::span<const double> x, double phi, SplitMix64& rng) {
  if (!(phi > 0.0)) throw ConfigError("compressor.phi", "must be positive");
  Compressed c;
  c.values.assign(x.size(), 0.0);
  c.bits = relative_bits(x.size(), phi);
  double sq = 0.0;
  for (double v : x) sq += v * v;
  const double norm = std::sqrt(sq);
  if (norm == 0.0) return c;
  const double step = 2.0 * norm * std::sqrt(phi / static_cast<double>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) {
    c.values[j] = stochastic_round(x[j], step, rng);
  }
  return c;
}

StochasticQuantizer::StochasticQuantizer(QuantizerParams params) : params_(params) {
  params_.validate();
}

std::string StochasticQuantizer::describe() const {
  return fmt::format("stochastic-quantizer(theta={}, b={}, ymax={})", params_.theta,
                     params_.bits, params_.ymax);
}

CompressionStats StochasticQuantizer::stats() const {
  return {params_.theta * params_.theta / 4.0, 0.0, params_.bits};
}

std::uint64_t StochasticQuantizer::compress(std::span<const double> in,
                                            std::span<double> out,
                                            SplitMix64& rng) const {
  return quantize_into(in, params_, rng, out);
}

std::uint64_t IdentityCompressor::compress(std::span<const double> in,
                                           std::span<double> out,
                                           SplitMix64&) const {
  std::copy(in.begin(), in.end(), out.begin());
  return 32 * in.size();
}

RelativeCompressor::RelativeCompressor(double phi) : phi_(phi) {
  if (!(phi_ > 0.0)) throw ConfigError("compressor.phi", "must be positive");
}

std::string RelativeCompressor::describe() const {
  return fmt::format("relative(phi={})", phi_);
}

CompressionStats RelativeCompressor::stats() const {
  return {0.0, phi_, relative_bits(1, phi_)};
}

std::uint64_t RelativeCompressor::compress(std::span<const double> in,
                                           std::span<double> out,
                                           SplitMix64& rng) const {
  auto c = relative_compress(in, phi_, rng);
  std::copy(c.values.begin(), c.values.end(), out.begin());
  return c.bits;
}

}  // namespace cpdnes
