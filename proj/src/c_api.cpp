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

#include "rsloc/rsloc.h"

#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "rsloc/boxfit.hpp"
#include "rsloc/config.hpp"
#include "rsloc/experiments.hpp"
#include "rsloc/io.hpp"

struct rsloc_config
{
  rsloc::RunConfig value;
  std::string output_dir;
};

struct rsloc_grid
{
  rsloc::ErrorGrid value;
};

struct rsloc_trace
{
  std::vector<rsloc::TrajectorySample> samples;
  double sample_step;
};

struct rsloc_baseline
{
  std::vector<rsloc::BaselineSample> samples;
};

namespace
{

thread_local std::string g_last_error;

rsloc_status fail(rsloc_status code, std::string message)
{
  g_last_error = std::move(message);
  return code;
}

// Runs `fn`, translating exceptions into status codes.
template<typename Fn>
rsloc_status guarded(Fn && fn)
{
  try {
    fn();
    return RSLOC_OK;
  } catch (const rsloc::IoError & e) {
    return fail(RSLOC_ERR_IO, e.what());
  } catch (const rsloc::DegenerateInputError & e) {
    return fail(RSLOC_ERR_DEGENERATE, e.what());
  } catch (const rsloc::TooFewPointsError & e) {
    return fail(RSLOC_ERR_TOO_FEW_POINTS, e.what());
  } catch (const rsloc::ValidationError & e) {
    return fail(RSLOC_ERR_VALIDATION, e.what());
  } catch (const std::bad_alloc &) {
    return fail(RSLOC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception & e) {
    return fail(RSLOC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RSLOC_ERR_INTERNAL, "unknown error");
  }
}

#define RSLOC_REQUIRE(ptr) \
  do { \
    if ((ptr) == nullptr) { \
      return fail(RSLOC_ERR_NULL_ARGUMENT, #ptr " must not be NULL"); \
    } \
  } while (0)

rsloc_cell_status to_c(rsloc::CellStatus s)
{
  switch (s) {
    case rsloc::CellStatus::ok: return RSLOC_CELL_OK;
    case rsloc::CellStatus::too_few_points: return RSLOC_CELL_TOO_FEW_POINTS;
    case rsloc::CellStatus::fit_failed: return RSLOC_CELL_FIT_FAILED;
  }
  return RSLOC_CELL_FIT_FAILED;
}

rsloc_obb to_c(const rsloc::Obb2D & box)
{
  rsloc_obb out{};
  for (std::size_t i = 0; i < 4; ++i) {
    out.corners[i] = {box.corners()[i].x, box.corners()[i].y};
  }
  out.center = {box.center().x, box.center().y};
  out.yaw_deg = box.yaw_deg();
  out.long_edge = box.long_edge();
  out.short_edge = box.short_edge();
  return out;
}

std::vector<rsloc::PositionRange> to_ranges(const rsloc_range * ranges, std::size_t count)
{
  std::vector<rsloc::PositionRange> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({ranges[i].min, ranges[i].max});
  }
  return out;
}

void fill_summaries(const std::vector<rsloc::RangeSummary> & in, rsloc_range_summary * out)
{
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto & s = in[i];
    out[i] = rsloc_range_summary{{s.range.min, s.range.max}, s.ok_count, s.failed_count,
      s.stats ? 1 : 0, s.stats ? s.stats->mae : nan, s.stats ? s.stats->p25 : nan,
      s.stats ? s.stats->p50 : nan, s.stats ? s.stats->p75 : nan};
  }
}

rsloc_status store_config(rsloc::RunConfig cfg, rsloc_config ** out)
{
  auto * handle = new rsloc_config{std::move(cfg), {}};
  if (handle->value.output_dir) {
    handle->output_dir = handle->value.output_dir->string();
  }
  *out = handle;
  return RSLOC_OK;
}

}  // namespace

extern "C" {

const char * rsloc_version(void) {return "1.0.0";}

const char * rsloc_last_error(void) {return g_last_error.c_str();}

rsloc_status rsloc_config_load(const char * path, rsloc_config ** out)
{
  RSLOC_REQUIRE(path);
  RSLOC_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {store_config(rsloc::parse_config(path), out);});
}

rsloc_status rsloc_config_parse(const char * text, rsloc_config ** out)
{
  RSLOC_REQUIRE(text);
  RSLOC_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {store_config(rsloc::parse_config_string(text), out);});
}

void rsloc_config_free(rsloc_config * config) {delete config;}

rsloc_mode rsloc_config_mode(const rsloc_config * config)
{
  return config != nullptr && config->value.mode == rsloc::RunMode::trajectory ?
         RSLOC_MODE_TRAJECTORY : RSLOC_MODE_SWEEP;
}

const char * rsloc_config_output_dir(const rsloc_config * config)
{
  if (config == nullptr || !config->value.output_dir) {
    return nullptr;
  }
  return config->output_dir.c_str();
}

rsloc_status rsloc_config_scale(
  const rsloc_config * config, const char * metric, double * min, double * max)
{
  RSLOC_REQUIRE(config);
  RSLOC_REQUIRE(metric);
  RSLOC_REQUIRE(min);
  RSLOC_REQUIRE(max);
  const auto it = config->value.scales.find(metric);
  if (it == config->value.scales.end()) {
    return fail(RSLOC_ERR_VALIDATION, std::string("unknown heat-map metric '") + metric + "'");
  }
  *min = it->second.min;
  *max = it->second.max;
  return RSLOC_OK;
}

rsloc_status rsloc_config_set_correction(rsloc_config * config, int enabled)
{
  RSLOC_REQUIRE(config);
  if (config->value.mode != rsloc::RunMode::sweep) {
    return fail(RSLOC_ERR_VALIDATION, "correction can only be toggled on sweep configs");
  }
  std::get<rsloc::SweepConfig>(config->value.experiment).correction_enabled = enabled != 0;
  return RSLOC_OK;
}

rsloc_status rsloc_run_sweep(const rsloc_config * config, unsigned workers, rsloc_grid ** out)
{
  RSLOC_REQUIRE(config);
  RSLOC_REQUIRE(out);
  *out = nullptr;
  if (config->value.mode != rsloc::RunMode::sweep) {
    return fail(RSLOC_ERR_VALIDATION, "config mode is not 'sweep'");
  }
  return guarded([&] {
      *out = new rsloc_grid{rsloc::run_sweep(config->value.sweep(), workers)};
    });
}

rsloc_status rsloc_grid_read_csv(const char * path, rsloc_grid ** out)
{
  RSLOC_REQUIRE(path);
  RSLOC_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {*out = new rsloc_grid{rsloc::read_grid_csv(path)};});
}

rsloc_status rsloc_grid_write_csv(const rsloc_grid * grid, const char * path)
{
  RSLOC_REQUIRE(grid);
  RSLOC_REQUIRE(path);
  return guarded([&] {rsloc::write_grid_csv(grid->value, path);});
}

rsloc_status rsloc_grid_render(
  const rsloc_grid * grid, const char * metric, double scale_min, double scale_max,
  const char * path)
{
  RSLOC_REQUIRE(grid);
  RSLOC_REQUIRE(metric);
  RSLOC_REQUIRE(path);
  return guarded([&] {
      rsloc::render_heatmap(grid->value, metric, path, {scale_min, scale_max});
    });
}

size_t rsloc_grid_rows(const rsloc_grid * grid) {return grid ? grid->value.rows() : 0;}
size_t rsloc_grid_cols(const rsloc_grid * grid) {return grid ? grid->value.cols() : 0;}

rsloc_status rsloc_grid_cell(const rsloc_grid * grid, size_t row, size_t col, rsloc_cell * out)
{
  RSLOC_REQUIRE(grid);
  RSLOC_REQUIRE(out);
  if (row >= grid->value.rows() || col >= grid->value.cols()) {
    return fail(RSLOC_ERR_OUT_OF_RANGE, "grid cell index out of range");
  }
  const auto & c = grid->value.at(row, col);
  *out = rsloc_cell{c.distance, c.yaw_deg, c.center_error, c.bbox_area_error, c.yaw_error_deg,
    c.off_by_90 ? 1 : 0, c.point_count, to_c(c.status)};
  return RSLOC_OK;
}

void rsloc_grid_free(rsloc_grid * grid) {delete grid;}

rsloc_status rsloc_run_trajectory(const rsloc_config * config, unsigned workers, rsloc_trace ** out)
{
  RSLOC_REQUIRE(config);
  RSLOC_REQUIRE(out);
  *out = nullptr;
  if (config->value.mode != rsloc::RunMode::trajectory) {
    return fail(RSLOC_ERR_VALIDATION, "config mode is not 'trajectory'");
  }
  return guarded([&] {
      const auto & tc = config->value.trajectory();
      *out = new rsloc_trace{rsloc::run_trajectory(tc, workers), tc.sample_step};
    });
}

size_t rsloc_trace_size(const rsloc_trace * trace) {return trace ? trace->samples.size() : 0;}

rsloc_status rsloc_trace_sample(
  const rsloc_trace * trace, size_t index, rsloc_trajectory_sample * out)
{
  RSLOC_REQUIRE(trace);
  RSLOC_REQUIRE(out);
  if (index >= trace->samples.size()) {
    return fail(RSLOC_ERR_OUT_OF_RANGE, "trace index out of range");
  }
  const auto & s = trace->samples[index];
  *out = rsloc_trajectory_sample{s.position, s.error, s.yaw_error_deg, s.off_by_90 ? 1 : 0,
    s.off_by_90_suspect ? 1 : 0, s.point_count, to_c(s.status)};
  return RSLOC_OK;
}

rsloc_status rsloc_trace_write_csv(const rsloc_trace * trace, const char * path)
{
  RSLOC_REQUIRE(trace);
  RSLOC_REQUIRE(path);
  return guarded([&] {rsloc::write_trajectory_csv(trace->samples, path);});
}

rsloc_status rsloc_trace_summarize(
  const rsloc_trace * trace, const rsloc_range * ranges, size_t count, rsloc_range_summary * out)
{
  RSLOC_REQUIRE(trace);
  RSLOC_REQUIRE(ranges);
  RSLOC_REQUIRE(out);
  return guarded([&] {
      fill_summaries(rsloc::summarize(trace->samples, to_ranges(ranges, count)), out);
    });
}

rsloc_status rsloc_trace_write_summary_csv(
  const rsloc_trace * trace, const rsloc_range * ranges, size_t count, const char * path)
{
  RSLOC_REQUIRE(trace);
  RSLOC_REQUIRE(ranges);
  RSLOC_REQUIRE(path);
  return guarded([&] {
      rsloc::write_summary_csv(rsloc::summarize(trace->samples, to_ranges(ranges, count)), path);
    });
}

rsloc_status rsloc_trace_effective_range(
  const rsloc_trace * trace, double threshold, double quantile, double * out)
{
  RSLOC_REQUIRE(trace);
  RSLOC_REQUIRE(out);
  return guarded([&] {*out = rsloc::effective_range(trace->samples, threshold, quantile);});
}

void rsloc_trace_free(rsloc_trace * trace) {delete trace;}

rsloc_status rsloc_baseline_read_csv(const char * path, rsloc_baseline ** out)
{
  RSLOC_REQUIRE(path);
  RSLOC_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {*out = new rsloc_baseline{rsloc::read_baseline_csv(path)};});
}

size_t rsloc_baseline_size(const rsloc_baseline * baseline)
{
  return baseline ? baseline->samples.size() : 0;
}

rsloc_status rsloc_baseline_summarize(
  const rsloc_baseline * baseline, const rsloc_range * ranges, size_t count,
  rsloc_range_summary * out)
{
  RSLOC_REQUIRE(baseline);
  RSLOC_REQUIRE(ranges);
  RSLOC_REQUIRE(out);
  return guarded([&] {
      fill_summaries(rsloc::summarize(baseline->samples, to_ranges(ranges, count)), out);
    });
}

rsloc_status rsloc_baseline_write_summary_csv(
  const rsloc_baseline * baseline, const rsloc_range * ranges, size_t count, const char * path)
{
  RSLOC_REQUIRE(baseline);
  RSLOC_REQUIRE(ranges);
  RSLOC_REQUIRE(path);
  return guarded([&] {
      rsloc::write_summary_csv(rsloc::summarize(baseline->samples, to_ranges(ranges, count)), path);
    });
}

rsloc_status rsloc_write_comparison_csv(
  const rsloc_trace * trace, const rsloc_baseline * baseline, const char * path)
{
  RSLOC_REQUIRE(trace);
  RSLOC_REQUIRE(baseline);
  RSLOC_REQUIRE(path);
  return guarded([&] {
      rsloc::write_comparison_csv(
        rsloc::compare_with_baseline(trace->samples, baseline->samples, trace->sample_step), path);
    });
}

void rsloc_baseline_free(rsloc_baseline * baseline) {delete baseline;}

rsloc_status rsloc_lshape_fit(
  const rsloc_vec2 * points, size_t count, const rsloc_lshape_config * config, rsloc_obb * out)
{
  RSLOC_REQUIRE(out);
  if (count > 0) {
    RSLOC_REQUIRE(points);
  }
  return guarded([&] {
      rsloc::LShapeConfig cfg;
      if (config != nullptr) {
        cfg = {config->angle_step_deg, config->min_dist_clamp, config->min_points};
      }
      std::vector<rsloc::Vec2> pts;
      pts.reserve(count);
      for (size_t i = 0; i < count; ++i) {
        pts.push_back({points[i].x, points[i].y});
      }
      *out = to_c(rsloc::lshape_fit(pts, cfg));
    });
}

rsloc_status rsloc_size_correct(
  const rsloc_obb * box, double vehicle_length, double vehicle_width, rsloc_vec2 sensor,
  rsloc_corrected * out)
{
  RSLOC_REQUIRE(box);
  RSLOC_REQUIRE(out);
  return guarded([&] {
      std::array<rsloc::Vec2, 4> corners{};
      for (std::size_t i = 0; i < 4; ++i) {
        corners[i] = {box->corners[i].x, box->corners[i].y};
      }
      const auto obb = rsloc::Obb2D::from_corners(corners);
      // vertical extent plays no part in the footprint correction
      const rsloc::VehicleDims dims(vehicle_length, vehicle_width, 1.0);
      const auto c = rsloc::size_correct(obb, dims, {sensor.x, sensor.y});
      *out = rsloc_corrected{{c.center.x, c.center.y}, c.yaw_deg,
        {c.alignment_point.x, c.alignment_point.y}, c.off_by_90_suspect ? 1 : 0};
    });
}

}  // extern "C"
