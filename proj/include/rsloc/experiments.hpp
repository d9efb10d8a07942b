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

#ifndef RSLOC__EXPERIMENTS_HPP_
#define RSLOC__EXPERIMENTS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rsloc/boxfit.hpp"
#include "rsloc/core.hpp"
#include "rsloc/lidar_sim.hpp"

namespace rsloc
{

enum class CellStatus { ok, too_few_points, fit_failed };

std::string_view to_string(CellStatus status);
/// Inverse of to_string; throws ValidationError on unknown names.
CellStatus cell_status_from_string(std::string_view name);

/// Heat-map sweep: the vehicle is placed at each distance along +x from the
/// sensor and rotated in place through a full turn.
struct SweepConfig
{
  double distance_min{3.0};
  double distance_max{40.0};
  double distance_step{0.5};
  double yaw_step_deg{2.0};
  LidarSpec lidar{LidarSpec::vlp16()};
  VehicleDims vehicle{4.89, 1.90, 1.72};
  bool correction_enabled{false};
  LShapeConfig lshape{};
  double z_threshold{0.05};
  double off_by_90_tolerance_deg{15.0};
  std::uint64_t seed{0};

  void validate() const;
  std::vector<double> distances() const;
  std::vector<double> yaws_deg() const;
};

/// Metrics of one (distance, yaw) cell. Error fields are NaN unless status is ok.
struct CellMetrics
{
  double distance{0.0};
  double yaw_deg{0.0};
  double center_error{0.0};
  double bbox_area_error{0.0};
  double yaw_error_deg{0.0};
  bool off_by_90{false};
  std::size_t point_count{0};
  CellStatus status{CellStatus::ok};

  bool ok() const {return status == CellStatus::ok;}
};

class ErrorGrid
{
public:
  ErrorGrid(std::vector<double> distances, std::vector<double> yaws_deg);

  std::size_t rows() const {return distances_.size();}
  std::size_t cols() const {return yaws_deg_.size();}
  const std::vector<double> & distances() const {return distances_;}
  const std::vector<double> & yaws_deg() const {return yaws_deg_;}

  CellMetrics & at(std::size_t row, std::size_t col) {return cells_.at(row * cols() + col);}
  const CellMetrics & at(std::size_t row, std::size_t col) const
  {
    return cells_.at(row * cols() + col);
  }
  /// Cells in distance-major order.
  const std::vector<CellMetrics> & cells() const {return cells_;}

  std::optional<SweepConfig> config;

private:
  std::vector<double> distances_;
  std::vector<double> yaws_deg_;
  std::vector<CellMetrics> cells_;
};

/// Simulates, filters, fits and scores a single cell.
CellMetrics evaluate_cell(const SweepConfig & config, double distance_m, double yaw_deg,
  std::uint64_t seed);

/// Runs every cell of the sweep. `workers` = 0 picks the hardware concurrency.
/// Per-cell seeds depend only on (config.seed, row, col), so the result does not
/// depend on scheduling.
ErrorGrid run_sweep(const SweepConfig & config, unsigned workers = 0);

/// Straight road: the vehicle drives along `road_heading_deg` through
/// `road_origin`; the sensor stands `lidar_offset` meters to the left of the
/// road (negative = right) at the origin's longitudinal position.
struct TrajectoryConfig
{
  Vec2 road_origin{};
  double road_heading_deg{0.0};
  double range_min{-50.0};
  double range_max{50.0};
  double sample_step{0.5};
  double lidar_offset{4.0};
  LidarSpec lidar{LidarSpec::vlp16()};  // mount x, y and yaw are derived from the road
  VehicleDims vehicle{4.89, 1.90, 1.72};
  std::vector<Box3> occluders;
  double background_epsilon{0.1};
  LShapeConfig lshape{};
  double off_by_90_tolerance_deg{15.0};
  std::uint64_t seed{0};

  void validate() const;
  std::vector<double> positions() const;
  Vec2 sensor_xy() const;
  LidarSpec placed_lidar() const;
  SceneModel scene(std::optional<double> vehicle_position) const;
};

struct TrajectorySample
{
  double position{0.0};
  double error{0.0};          // NaN unless ok
  double yaw_error_deg{0.0};  // NaN unless ok
  bool off_by_90{false};
  bool off_by_90_suspect{false};
  std::size_t point_count{0};
  CellStatus status{CellStatus::ok};

  bool ok() const {return status == CellStatus::ok;}
};

/// Drives the vehicle along the road and localizes it at every sample with
/// background subtraction and size correction.
std::vector<TrajectorySample> run_trajectory(const TrajectoryConfig & config, unsigned workers = 0);

/// Externally produced error trace (e.g. the self-localization baseline).
struct BaselineSample
{
  double position;
  double error;
};

struct ErrorStats
{
  double mae;
  double p25;
  double p50;
  double p75;
};

struct PositionRange
{
  double min;
  double max;
};

struct RangeSummary
{
  PositionRange range;
  std::size_t ok_count{0};
  std::size_t failed_count{0};
  std::optional<ErrorStats> stats;  // nullopt: no ok sample in range
};

/// Linear-interpolation percentile (rank h = (n - 1) p) of unsorted values.
double percentile(std::vector<double> values, double p);

/// Mean absolute error and quartiles of the ok samples inside each inclusive range.
std::vector<RangeSummary> summarize(
  std::span<const TrajectorySample> trace, std::span<const PositionRange> ranges);
std::vector<RangeSummary> summarize(
  std::span<const BaselineSample> trace, std::span<const PositionRange> ranges);

struct ComparisonRow
{
  double position;
  double roadside_error;  // NaN unless the roadside sample is ok
  CellStatus status;
  bool matched;
  double baseline_position;  // NaN when unmatched
  double baseline_error;     // NaN when unmatched
};

/// Nearest-position join; a baseline sample matches when it lies within
/// sample_step / 2 of the trace position (lower position wins ties).
/// Throws ValidationError if the position ranges do not overlap.
std::vector<ComparisonRow> compare_with_baseline(
  std::span<const TrajectorySample> trace, std::span<const BaselineSample> baseline,
  double sample_step);

/// Largest R such that, for every candidate radius r <= R, the `quantile` of
/// errors over samples with |position| <= r stays below `threshold`. Failed
/// samples count as unbounded error. Candidate radii are the sample |positions|.
double effective_range(
  std::span<const TrajectorySample> trace, double threshold = 0.3, double quantile = 0.75);

/// Seed for cell (row, col) derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t row, std::uint64_t col);

}  // namespace rsloc

#endif  // RSLOC__EXPERIMENTS_HPP_
