// Copyright 2026 The rsloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSLOC__CONFIG_HPP_
#define RSLOC__CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "rsloc/experiments.hpp"

namespace rsloc
{

enum class RunMode { sweep, trajectory };

struct ColorScale
{
  double min;
  double max;
};

/// Heat-map metric names accepted by render_heatmap.
inline constexpr std::array<const char *, 4> kHeatmapMetrics = {
  "center_error", "bbox_area_error", "yaw_error", "point_count"};

/// Default color-scale bounds for a metric. Throws ValidationError for unknown names.
ColorScale default_scale(const std::string & metric);

struct RunConfig
{
  RunMode mode;
  std::variant<SweepConfig, TrajectoryConfig> experiment;
  std::optional<std::filesystem::path> output_dir;
  std::uint64_t seed{0};
  std::map<std::string, ColorScale> scales;  // one entry per heat-map metric

  const SweepConfig & sweep() const {return std::get<SweepConfig>(experiment);}
  const TrajectoryConfig & trajectory() const {return std::get<TrajectoryConfig>(experiment);}
};

/// Parses and validates an INI-style config (`key = value`, `[section]`).
///
/// Every problem found is reported in one ValidationError: unknown keys and
/// sections by name, missing required keys collectively, and invalid values by
/// `section.key`. Throws IoError if the file cannot be read.
RunConfig parse_config(const std::filesystem::path & path);

/// Same as parse_config, reading from an in-memory string. `origin` labels messages.
RunConfig parse_config_string(const std::string & text, const std::string & origin = "<string>");

}  // namespace rsloc

#endif  // RSLOC__CONFIG_HPP_
