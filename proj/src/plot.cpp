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

#include "cpdnes/plot.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "cpdnes/error.hpp"

namespace cpdnes {

namespace {

constexpr std::array<const char*, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const std::vector<double>& pick(const AggregateSeries& s, Metric m) {
  return m == Metric::kMse ? s.mse_mean : s.norm_mean;
}

}  // namespace

std::string render_svg(std::span<const AggregateSeries> series, const PlotOptions& options) {
  if (options.width < 200 || options.height < 150) {
    throw StructuralError("plot area too small");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t kmax = 1;
  for (const auto& s : series) {
    const auto& v = pick(s, options.metric);
    kmax = std::max(kmax, v.size() > 0 ? v.size() - 1 : 0);
    for (double x : v) {
      if (std::isfinite(x) && x > 0.0) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    }
  }
  if (!(lo < hi)) {
    lo = 1e-3;
    hi = 1.0;
  }
  const double dlo = std::floor(std::log10(lo));
  const double dhi = std::ceil(std::log10(hi));

  const double left = 70, right = 150, top = 36, bottom = 48;
  const double pw = options.width - left - right;
  const double ph = options.height - top - bottom;
  auto sx = [&](double k) { return left + pw * k / static_cast<double>(kmax); };
  auto sy = [&](double v) { return top + ph * (dhi - std::log10(v)) / (dhi - dlo); };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      options.width, options.height);
  if (!options.title.empty()) {
    out += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\">{}</text>\n",
                       left + pw / 2, escape(options.title));
  }
  out += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
      left, top, pw, ph);
  for (double d = dlo; d <= dhi; d += 1.0) {
    const double y = sy(std::pow(10.0, d));
    out += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">1e{}</text>\n",
        left, y, left + pw, y, left - 6, y + 4, static_cast<int>(d));
  }
  for (int i = 0; i <= 5; ++i) {
    const double k = static_cast<double>(kmax) * i / 5.0;
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.0f}</text>\n",
                       sx(k), top + ph + 18, k);
  }
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">k</text>\n",
                     left + pw / 2, top + ph + 38);

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& v = pick(series[i], options.metric);
    const char* color = kPalette[i % kPalette.size()];
    std::string points;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!std::isfinite(v[k]) || v[k] <= 0.0) continue;
      points += fmt::format("{:.1f},{:.1f} ", sx(static_cast<double>(k)), sy(v[k]));
    }
    out += fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>\n", color,
        points);
    const double ly = top + 14 + 18 * static_cast<double>(i);
    out += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"{3}\" "
        "stroke-width=\"2\"/>\n<text x=\"{4:.1f}\" y=\"{5:.1f}\">{6}</text>\n",
        left + pw + 10, ly, left + pw + 30, color, left + pw + 36, ly + 4,
        escape(series[i].variant));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace cpdnes
