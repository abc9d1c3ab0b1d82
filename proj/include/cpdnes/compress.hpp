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
#include <vector>

#include "cpdnes/random.hpp"

namespace cpdnes {

// Dithered quantizer onto the grid theta * Z using b bits per scalar.
struct QuantizerParams {
  double theta = 1.0;
  std::uint32_t bits = 1;
  double ymax = 1.0;  // asserted magnitude bound on inputs

  // bits derived from (theta, ymax) with bits_for.
  static QuantizerParams ForRange(double theta, double ymax);

  // Largest magnitude accepted: 2^b * theta.
  double range() const;
  // Representable levels run from -2^(b-1) theta to (2^b - 1) theta.
  double lowest_level() const;
  double highest_level() const;

  void validate() const;
};

struct CompressionStats {
  double sigma_sq_bound = 0.0;   // absolute bound on E||C(x) - x||^2
  double relative_bound = 0.0;   // phi for relative-error compressors, else 0
  std::uint64_t bits_per_scalar = 0;
};

struct Compressed {
  std::vector<double> values;
  std::uint64_t bits = 0;
};

// b = ceil(log2(ymax / theta)), at least 1.
std::uint32_t bits_for(double theta, double ymax);

// Element-wise stochastic rounding: with l = floor(x / theta) the output is
// l theta with probability 1 + l - x / theta, else (l + 1) theta.
// Throws RangeError when some |x_j| >= 2^b theta.
Compressed quantize(std::span<const double> x, const QuantizerParams& params,
                    SplitMix64& rng);
std::uint64_t quantize_into(std::span<const double> x, const QuantizerParams& params,
                            SplitMix64& rng, std::span<double> out);

// Clamps each coordinate into the representable levels of params.
// Returns how many coordinates were clamped.
std::size_t saturate_in_place(std::span<double> x, const QuantizerParams& params);

// Full-precision transmission charged at 32 bits per scalar.
Compressed identity_compress(std::span<const double> x);

// Unbiased with E||C(x) - x||^2 <= phi ||x||^2: stochastic rounding on a grid
// of spacing 2 ||x|| sqrt(phi / n), plus a 32-bit norm header.
Compressed relative_compress(std::span<const double> x, double phi, SplitMix64& rng);
std::uint64_t relative_bits(std::size_t n, double phi);

enum class CompressorKind { kStochasticQuantizer, kIdentity, kRelative };

class Compressor {
 public:
  virtual ~Compressor() = default;

  virtual CompressorKind kind() const = 0;
  virtual std::string describe() const = 0;
  virtual CompressionStats stats() const = 0;
  // Writes C(in) to out, returns transmitted bits.
  virtual std::uint64_t compress(std::span<const double> in, std::span<double> out,
                                 SplitMix64& rng) const = 0;
  virtual std::optional<QuantizerParams> quantizer() const { return std::nullopt; }
};

class StochasticQuantizer final : public Compressor {
 public:
  explicit StochasticQuantizer(QuantizerParams params);

  CompressorKind kind() const override { return CompressorKind::kStochasticQuantizer; }
  std::string describe() const override;
  CompressionStats stats() const override;
  std::uint64_t compress(std::span<const double> in, std::span<double> out,
                         SplitMix64& rng) const override;
  std::optional<QuantizerParams> quantizer() const override { return params_; }

 private:
  QuantizerParams params_;
};

class IdentityCompressor final : public Compressor {
 public:
  CompressorKind kind() const override { return CompressorKind::kIdentity; }
  std::string describe() const override { return "identity"; }
  CompressionStats stats() const override { return {0.0, 0.0, 32}; }
  std::uint64_t compress(std::span<const double> in, std::span<double> out,
                         SplitMix64& rng) const override;
};

class RelativeCompressor final : public Compressor {
 public:
  explicit RelativeCompressor(double phi);

  CompressorKind kind() const override { return CompressorKind::kRelative; }
  std::string describe() const override;
  CompressionStats stats() const override;
  std::uint64_t compress(std::span<const double> in, std::span<double> out,
                         SplitMix64& rng) const override;

 private:
  double phi_;
};

}  // namespace cpdnes
