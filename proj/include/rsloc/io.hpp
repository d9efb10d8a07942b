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

#ifndef RSLOC__IO_HPP_
#define RSLOC__IO_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rsloc/config.hpp"
#include "rsloc/experiments.hpp"
#include "rsloc/lidar_sim.hpp"

namespace rsloc
{

inline constexpr const char * kGridCsvHeader =
  "distance_m,yaw_deg,center_error_m,bbox_area_error_m2,yaw_error_deg,off_by_90,point_count,status";
inline constexpr const char * kBaselineCsvHeader = "position_m,error_m";
inline constexpr const char * kTrajectoryCsvHeader =
  "position_m,error_m,yaw_error_deg,off_by_90,off_by_90_suspect,point_count,status";
inline constexpr const char * kSummaryCsvHeader =
  "range_min_m,range_max_m,ok_count,failed_count,mae_m,p25_m,p50_m,p75_m,status";
inline constexpr const char * kComparisonCsvHeader =
  "position_m,roadside_error_m,status,matched,baseline_position_m,baseline_error_m";

using Rgb = std::array<std::uint8_t, 3>;
inline constexpr Rgb kRampLow = {13, 8, 135};
inline constexpr Rgb kRampHigh = {240, 249, 33};
/// Color of cells whose status is not ok; never produced by the ramp.
inline constexpr Rgb kFailedCellColor = {255, 0, 255};

/// Shortest decimal text that parses back to exactly `value`; empty for NaN.
std::string format_number(double value);

/// One row per cell, distance-major then yaw ascending. Metric fields of
/// failed cells are left empty.
void write_grid_csv(const ErrorGrid & grid, const std::filesystem::path & path);
ErrorGrid read_grid_csv(const std::filesystem::path & path);

/// Ramp color for `value` (clamped to the scale).
Rgb ramp_color(double value, ColorScale scale);

/// Plain PPM (P3): one pixel per cell, yaw along x, distance along y.
/// Throws ValidationError for unknown metrics or a non-positive scale span.
void render_heatmap(
  const ErrorGrid & grid, const std::string & metric, const std::filesystem::path & path,
  ColorScale scale);

/// Baseline error trace sorted by position. Duplicate positions and malformed
/// rows raise ValidationError naming the line.
std::vector<BaselineSample> read_baseline_csv(const std::filesystem::path & path);

void write_trajectory_csv(
  std::span<const TrajectorySample> trace, const std::filesystem::path & path);
void write_summary_csv(std::span<const RangeSummary> rows, const std::filesystem::path & path);
void write_comparison_csv(
  std::span<const ComparisonRow> rows, const std::filesystem::path & path);
/// Debug dump of a cloud as `x,y,z,surface_tag` (tag -1 when unknown).
void write_cloud_csv(const PointCloud & cloud, const std::filesystem::path & path);

}  // namespace rsloc

#endif  // RSLOC__IO_HPP_
