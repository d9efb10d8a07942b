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

#include "rsloc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>

#include "rsloc/perception.hpp"

namespace rsloc
{
namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template<typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn && fn)
{
  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
              failure = std::current_exception();
            }
          }
        }
      });
  }
  pool.clear();
  if (failure) {
    std::rethrow_exception(failure);
  }
}

std::vector<double> arithmetic_grid(double lo, double hi, double step)
{
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    if (v > hi + 1e-9 * std::max(1.0, std::abs(hi))) {
      break;
    }
    out.push_back(v);
  }
  return out;
}

struct FitOutcome
{
  CellStatus status;
  std::optional<Obb2D> box;
};

FitOutcome fit_points(const std::vector<Vec2> & footprint, const LShapeConfig & cfg)
{
  if (footprint.size() < cfg.min_points) {
    return {CellStatus::too_few_points, std::nullopt};
  }
  try {
    return {CellStatus::ok, lshape_fit(footprint, cfg)};
  } catch (const DegenerateInputError &) {
    return {CellStatus::fit_failed, std::nullopt};
  }
}

struct Sample
{
  double position;
  double error;
  bool ok;
};

std::vector<RangeSummary> summarize_samples(
  const std::vector<Sample> & samples, std::span<const PositionRange> ranges)
{
  std::vector<RangeSummary> out;
  for (const auto & range : ranges) {
    RangeSummary summary;
    summary.range = range;
    std::vector<double> errors;
    for (const auto & s : samples) {
      if (s.position < range.min || s.position > range.max) {
        continue;
      }
      if (s.ok) {
        errors.push_back(std::abs(s.error));
      } else {
        ++summary.failed_count;
      }
    }
    summary.ok_count = errors.size();
    if (!errors.empty()) {
      // sort first so the sum does not depend on input order
      std::sort(errors.begin(), errors.end());
      double sum = 0.0;
      for (double e : errors) {
        sum += e;
      }
      summary.stats = ErrorStats{
        sum / static_cast<double>(errors.size()), percentile(errors, 0.25),
        percentile(errors, 0.50), percentile(errors, 0.75)};
    }
    out.push_back(summary);
  }
  return out;
}

}  // namespace

std::string_view to_string(CellStatus status)
{
  switch (status) {
    case CellStatus::ok: return "ok";
    case CellStatus::too_few_points: return "too_few_points";
    case CellStatus::fit_failed: return "fit_failed";
  }
  return "unknown";
}

CellStatus cell_status_from_string(std::string_view name)
{
  if (name == "ok") {return CellStatus::ok;}
  if (name == "too_few_points") {return CellStatus::too_few_points;}
  if (name == "fit_failed") {return CellStatus::fit_failed;}
  throw ValidationError("unknown status '" + std::string(name) + "'");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t row, std::uint64_t col)
{
  // splitmix64 finalizer over the combined key
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (row * 0x100000001B3ULL + col + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void SweepConfig::validate() const
{
  if (!(distance_min >= 0.0)) {
    throw ValidationError("distance_min must be >= 0");
  }
  if (!(distance_step > 0.0)) {
    throw ValidationError("distance_step must be > 0");
  }
  if (!(distance_max >= distance_min)) {
    throw ValidationError("distance_max must be >= distance_min");
  }
  if (!(yaw_step_deg > 0.0)) {
    throw ValidationError("yaw_step must be > 0");
  }
  const double turns = 360.0 / yaw_step_deg;
  if (std::abs(turns - std::round(turns)) > 1e-9 * turns) {
    throw ValidationError("yaw_step must divide 360 evenly");
  }
  if (!(z_threshold >= 0.0)) {
    throw ValidationError("z_threshold must be >= 0");
  }
  lshape.validate();
}

std::vector<double> SweepConfig::distances() const
{
  return arithmetic_grid(distance_min, distance_max, distance_step);
}

std::vector<double> SweepConfig::yaws_deg() const
{
  const auto n = static_cast<std::size_t>(std::llround(360.0 / yaw_step_deg));
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = static_cast<double>(j) * yaw_step_deg;
  }
  return out;
}

ErrorGrid::ErrorGrid(std::vector<double> distances, std::vector<double> yaws_deg)
: distances_(std::move(distances)), yaws_deg_(std::move(yaws_deg)),
  cells_(distances_.size() * yaws_deg_.size())
{
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) {
      auto & c = at(i, j);
      c.distance = distances_[i];
      c.yaw_deg = yaws_deg_[j];
    }
  }
}

CellMetrics evaluate_cell(
  const SweepConfig & config, double distance_m, double yaw_deg, std::uint64_t seed)
{
  const Point3 & mount = config.lidar.mount().position;
  const Pose2D truth(mount.x + distance_m, mount.y, yaw_deg);
  const SceneModel scene(VehiclePlacement{config.vehicle, truth}, {});

  CellMetrics m;
  m.distance = distance_m;
  m.yaw_deg = yaw_deg;

  const PointCloud frame = cast_frame(config.lidar, scene, seed);
  const auto footprint = project_to_plane(filter_ground(frame, config.z_threshold));
  m.point_count = footprint.size();

  const auto fit = fit_points(footprint, config.lshape);
  m.status = fit.status;
  if (!fit.box) {
    m.center_error = m.bbox_area_error = m.yaw_error_deg = kNaN;
    return m;
  }

  Vec2 estimate = fit.box->center();
  if (config.correction_enabled) {
    estimate = size_correct(*fit.box, config.vehicle, {mount.x, mount.y}).center;
  }
  const auto yaw = yaw_error_mod90(fit.box->yaw_deg(), truth.yaw_deg(),
      config.off_by_90_tolerance_deg);
  m.center_error = distance(estimate, truth.position());
  m.bbox_area_error = std::abs(fit.box->area() - config.vehicle.footprint_area());
  m.yaw_error_deg = yaw.error_deg;
  m.off_by_90 = yaw.off_by_90;
  return m;
}

ErrorGrid run_sweep(const SweepConfig & config, unsigned workers)
{
  config.validate();
  ErrorGrid grid(config.distances(), config.yaws_deg());
  grid.config = config;
  const std::size_t cols = grid.cols();
  parallel_for(grid.rows() * cols, workers, [&](std::size_t k) {
      const std::size_t i = k / cols;
      const std::size_t j = k % cols;
      grid.at(i, j) = evaluate_cell(
        config, grid.distances()[i], grid.yaws_deg()[j], derive_seed(config.seed, i, j));
    });
  return grid;
}

void TrajectoryConfig::validate() const
{
  if (!(sample_step > 0.0)) {
    throw ValidationError("sample_step must be > 0");
  }
  if (!(range_max >= range_min)) {
    throw ValidationError("range_max must be >= range_min");
  }
  if (!(background_epsilon > 0.0)) {
    throw ValidationError("background_epsilon must be > 0");
  }
  if (!std::isfinite(road_heading_deg) || !std::isfinite(lidar_offset)) {
    throw ValidationError("road heading and lidar_offset must be finite");
  }
  lshape.validate();
}

std::vector<double> TrajectoryConfig::positions() const
{
  return arithmetic_grid(range_min, range_max, sample_step);
}

Vec2 TrajectoryConfig::sensor_xy() const
{
  const double h = deg_to_rad(road_heading_deg);
  const Vec2 left{-std::sin(h), std::cos(h)};
  return road_origin + left * lidar_offset;
}

LidarSpec TrajectoryConfig::placed_lidar() const
{
  const Vec2 xy = sensor_xy();
  return lidar.with_mount({{xy.x, xy.y, lidar.mount().position.z}, road_heading_deg});
}

SceneModel TrajectoryConfig::scene(std::optional<double> vehicle_position) const
{
  std::optional<VehiclePlacement> placement;
  if (vehicle_position) {
    const double h = deg_to_rad(road_heading_deg);
    const Vec2 at = road_origin + Vec2{std::cos(h), std::sin(h)} * *vehicle_position;
    placement = VehiclePlacement{vehicle, Pose2D(at.x, at.y, road_heading_deg)};
  }
  return SceneModel(std::move(placement), occluders);
}

std::vector<TrajectorySample> run_trajectory(const TrajectoryConfig & config, unsigned workers)
{
  config.validate();
  const LidarSpec spec = config.placed_lidar();
  const Vec2 sensor = config.sensor_xy();
  const ReferenceFrame reference(cast_frame(spec, config.scene(std::nullopt),
    derive_seed(config.seed, 0, 0)));

  const auto positions = config.positions();
  std::vector<TrajectorySample> out(positions.size());
  parallel_for(positions.size(), workers, [&](std::size_t k) {
      TrajectorySample s;
      s.position = positions[k];
      const SceneModel scene = config.scene(positions[k]);
      const Vec2 truth = scene.vehicle()->pose.position();
      const PointCloud frame = cast_frame(spec, scene, derive_seed(config.seed, 1, k));
      const auto footprint =
      project_to_plane(filter_background(frame, reference, config.background_epsilon));
      s.point_count = footprint.size();

      const auto fit = fit_points(footprint, config.lshape);
      s.status = fit.status;
      if (!fit.box) {
        s.error = s.yaw_error_deg = kNaN;
        out[k] = s;
        return;
      }
      const auto corrected = size_correct(*fit.box, config.vehicle, sensor);
      const auto yaw = yaw_error_mod90(corrected.yaw_deg, config.road_heading_deg,
        config.off_by_90_tolerance_deg);
      s.error = distance(corrected.center, truth);
      s.yaw_error_deg = yaw.error_deg;
      s.off_by_90 = yaw.off_by_90;
      s.off_by_90_suspect = corrected.off_by_90_suspect;
      out[k] = s;
    });
  return out;
}

double percentile(std::vector<double> values, double p)
{
  if (values.empty()) {
    throw ValidationError("percentile of an empty set");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("percentile rank must be in [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0 || lo + 1 >= values.size()) {
    return values[lo];
  }
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::vector<RangeSummary> summarize(
  std::span<const TrajectorySample> trace, std::span<const PositionRange> ranges)
{
  std::vector<Sample> samples;
  samples.reserve(trace.size());
  for (const auto & s : trace) {
    samples.push_back({s.position, s.error, s.ok()});
  }
  return summarize_samples(samples, ranges);
}

std::vector<RangeSummary> summarize(
  std::span<const BaselineSample> trace, std::span<const PositionRange> ranges)
{
  std::vector<Sample> samples;
  samples.reserve(trace.size());
  for (const auto & s : trace) {
    samples.push_back({s.position, s.error, true});
  }
  return summarize_samples(samples, ranges);
}

std::vector<ComparisonRow> compare_with_baseline(
  std::span<const TrajectorySample> trace, std::span<const BaselineSample> baseline,
  double sample_step)
{
  if (!(sample_step > 0.0)) {
    throw ValidationError("compare_with_baseline: sample_step must be > 0");
  }
  if (trace.empty() || baseline.empty()) {
    throw ValidationError("compare_with_baseline: empty trace");
  }
  std::vector<BaselineSample> sorted(baseline.begin(), baseline.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto & a, const auto & b) {
      return a.position < b.position;
    });
  const auto [tmin, tmax] = std::minmax_element(trace.begin(), trace.end(),
      [](const auto & a, const auto & b) {return a.position < b.position;});
  const double half = 0.5 * sample_step;
  if (sorted.back().position < tmin->position - half ||
    sorted.front().position > tmax->position + half)
  {
    throw ValidationError("compare_with_baseline: baseline and trace positions do not overlap");
  }

  std::vector<ComparisonRow> rows;
  rows.reserve(trace.size());
  for (const auto & s : trace) {
    ComparisonRow row{s.position, s.ok() ? s.error : kNaN, s.status, false, kNaN, kNaN};
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), s.position,
        [](const BaselineSample & b, double pos) {return b.position < pos;});
    const BaselineSample * best = nullptr;
    if (it != sorted.begin()) {
      best = &*std::prev(it);
    }
    if (it != sorted.end() &&
      (best == nullptr || std::abs(it->position - s.position) < std::abs(best->position - s.position)))
    {
      best = &*it;
    }
    if (best != nullptr && std::abs(best->position - s.position) <= half) {
      row.matched = true;
      row.baseline_position = best->position;
      row.baseline_error = best->error;
    }
    rows.push_back(row);
  }
  return rows;
}

double effective_range(std::span<const TrajectorySample> trace, double threshold, double quantile)
{
  std::vector<std::pair<double, double>> by_radius;
  by_radius.reserve(trace.size());
  for (const auto & s : trace) {
    const double err = s.ok() ? s.error : std::numeric_limits<double>::infinity();
    by_radius.emplace_back(std::abs(s.position), err);
  }
  std::sort(by_radius.begin(), by_radius.end());

  double reach = 0.0;
  std::vector<double> errors;
  for (std::size_t i = 0; i < by_radius.size(); ++i) {
    errors.push_back(by_radius[i].second);
    // evaluate once all samples at this radius are in
    if (i + 1 < by_radius.size() && by_radius[i + 1].first == by_radius[i].first) {
      continue;
    }
    if (!(percentile(errors, quantile) < threshold)) {
      break;
    }
    reach = by_radius[i].first;
  }
  return reach;
}

}  // namespace rsloc
