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

#include <span>
#include <string>

#include "cpdnes/config.hpp"
#include "cpdnes/harness.hpp"

namespace cpdnes {

struct PlotOptions {
  Metric metric = Metric::kMse;
  int width = 720;
  int height = 440;
  std::string title;
};

// Static SVG line chart of one metric against k, log-scaled on y. Non-positive
// and non-finite samples are skipped.
std::string render_svg(std::span<const AggregateSeries> series,
                       const PlotOptions& options = {});

}  // namespace cpdnes
