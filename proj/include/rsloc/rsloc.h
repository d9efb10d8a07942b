/*
 * Copyright 2026 The rsloc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of the roadside LiDAR localization library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function (NULL is accepted). Every fallible call returns an
 * rsloc_status; on failure rsloc_last_error() holds a message for the calling
 * thread until its next failing call.
 */

#ifndef RSLOC_RSLOC_H_
#define RSLOC_RSLOC_H_

#include <stddef.h>

#if defined(_WIN32)
#  if defined(RSLOC_BUILDING_LIBRARY)
#    define RSLOC_API __declspec(dllexport)
#  else
#    define RSLOC_API __declspec(dllimport)
#  endif
#else
#  define RSLOC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rsloc_status
{
  RSLOC_OK = 0,
  RSLOC_ERR_VALIDATION = 1,      /* bad configuration or argument value */
  RSLOC_ERR_IO = 2,              /* file could not be read or written */
  RSLOC_ERR_DEGENERATE = 3,      /* collinear points, zero-length edge */
  RSLOC_ERR_TOO_FEW_POINTS = 4,
  RSLOC_ERR_NULL_ARGUMENT = 5,
  RSLOC_ERR_OUT_OF_RANGE = 6,    /* index past the end */
  RSLOC_ERR_INTERNAL = 7
} rsloc_status;

typedef enum rsloc_mode
{
  RSLOC_MODE_SWEEP = 0,
  RSLOC_MODE_TRAJECTORY = 1
} rsloc_mode;

typedef enum rsloc_cell_status
{
  RSLOC_CELL_OK = 0,
  RSLOC_CELL_TOO_FEW_POINTS = 1,
  RSLOC_CELL_FIT_FAILED = 2
} rsloc_cell_status;

typedef struct rsloc_config rsloc_config;
typedef struct rsloc_grid rsloc_grid;
typedef struct rsloc_trace rsloc_trace;
typedef struct rsloc_baseline rsloc_baseline;

typedef struct rsloc_vec2
{
  double x;
  double y;
} rsloc_vec2;

/* Error fields are NaN when status != RSLOC_CELL_OK. */
typedef struct rsloc_cell
{
  double distance_m;
  double yaw_deg;
  double center_error_m;
  double bbox_area_error_m2;
  double yaw_error_deg;
  int off_by_90;
  size_t point_count;
  rsloc_cell_status status;
} rsloc_cell;

typedef struct rsloc_trajectory_sample
{
  double position_m;
  double error_m;
  double yaw_error_deg;
  int off_by_90;
  int off_by_90_suspect;
  size_t point_count;
  rsloc_cell_status status;
} rsloc_trajectory_sample;

typedef struct rsloc_range
{
  double min;
  double max;
} rsloc_range;

/* has_stats == 0 marks a range without any ok sample; the statistics are NaN then. */
typedef struct rsloc_range_summary
{
  rsloc_range range;
  size_t ok_count;
  size_t failed_count;
  int has_stats;
  double mae;
  double p25;
  double p50;
  double p75;
} rsloc_range_summary;

typedef struct rsloc_lshape_config
{
  double angle_step_deg;
  double min_dist_clamp;
  size_t min_points;
} rsloc_lshape_config;

/* Corners counter-clockwise; yaw of the long edge in [0, 180). */
typedef struct rsloc_obb
{
  rsloc_vec2 corners[4];
  rsloc_vec2 center;
  double yaw_deg;
  double long_edge;
  double short_edge;
} rsloc_obb;

typedef struct rsloc_corrected
{
  rsloc_vec2 center;
  double yaw_deg;
  rsloc_vec2 alignment_point;
  int off_by_90_suspect;
} rsloc_corrected;

RSLOC_API const char * rsloc_version(void);
RSLOC_API const char * rsloc_last_error(void);

/* ---- configuration ---- */
RSLOC_API rsloc_status rsloc_config_load(const char * path, rsloc_config ** out);
RSLOC_API rsloc_status rsloc_config_parse(const char * text, rsloc_config ** out);
RSLOC_API void rsloc_config_free(rsloc_config * config);
RSLOC_API rsloc_mode rsloc_config_mode(const rsloc_config * config);
/* NULL when the config does not name an output directory. */
RSLOC_API const char * rsloc_config_output_dir(const rsloc_config * config);
RSLOC_API rsloc_status rsloc_config_scale(
  const rsloc_config * config, const char * metric, double * min, double * max);
/* Sweep mode only. */
RSLOC_API rsloc_status rsloc_config_set_correction(rsloc_config * config, int enabled);

/* ---- heat-map sweep ---- */
/* workers == 0 uses every hardware thread. */
RSLOC_API rsloc_status rsloc_run_sweep(
  const rsloc_config * config, unsigned workers, rsloc_grid ** out);
RSLOC_API rsloc_status rsloc_grid_read_csv(const char * path, rsloc_grid ** out);
RSLOC_API rsloc_status rsloc_grid_write_csv(const rsloc_grid * grid, const char * path);
RSLOC_API rsloc_status rsloc_grid_render(
  const rsloc_grid * grid, const char * metric, double scale_min, double scale_max,
  const char * path);
RSLOC_API size_t rsloc_grid_rows(const rsloc_grid * grid);
RSLOC_API size_t rsloc_grid_cols(const rsloc_grid * grid);
RSLOC_API rsloc_status rsloc_grid_cell(
  const rsloc_grid * grid, size_t row, size_t col, rsloc_cell * out);
RSLOC_API void rsloc_grid_free(rsloc_grid * grid);

/* ---- trajectory ---- */
RSLOC_API rsloc_status rsloc_run_trajectory(
  const rsloc_config * config, unsigned workers, rsloc_trace ** out);
RSLOC_API size_t rsloc_trace_size(const rsloc_trace * trace);
RSLOC_API rsloc_status rsloc_trace_sample(
  const rsloc_trace * trace, size_t index, rsloc_trajectory_sample * out);
RSLOC_API rsloc_status rsloc_trace_write_csv(const rsloc_trace * trace, const char * path);
/* `out` must hold `count` entries. */
RSLOC_API rsloc_status rsloc_trace_summarize(
  const rsloc_trace * trace, const rsloc_range * ranges, size_t count,
  rsloc_range_summary * out);
RSLOC_API rsloc_status rsloc_trace_write_summary_csv(
  const rsloc_trace * trace, const rsloc_range * ranges, size_t count, const char * path);
RSLOC_API rsloc_status rsloc_trace_effective_range(
  const rsloc_trace * trace, double threshold, double quantile, double * out);
RSLOC_API void rsloc_trace_free(rsloc_trace * trace);

/* ---- external baseline ---- */
RSLOC_API rsloc_status rsloc_baseline_read_csv(const char * path, rsloc_baseline ** out);
RSLOC_API size_t rsloc_baseline_size(const rsloc_baseline * baseline);
RSLOC_API rsloc_status rsloc_baseline_summarize(
  const rsloc_baseline * baseline, const rsloc_range * ranges, size_t count,
  rsloc_range_summary * out);
RSLOC_API rsloc_status rsloc_baseline_write_summary_csv(
  const rsloc_baseline * baseline, const rsloc_range * ranges, size_t count, const char * path);
/* Joins on the trace's sample step; fails if the position ranges are disjoint. */
RSLOC_API rsloc_status rsloc_write_comparison_csv(
  const rsloc_trace * trace, const rsloc_baseline * baseline, const char * path);
RSLOC_API void rsloc_baseline_free(rsloc_baseline * baseline);

/* ---- box fitting ---- */
/* config may be NULL for defaults (1 degree, 0.01 m clamp, 3 points). */
RSLOC_API rsloc_status rsloc_lshape_fit(
  const rsloc_vec2 * points, size_t count, const rsloc_lshape_config * config, rsloc_obb * out);
RSLOC_API rsloc_status rsloc_size_correct(
  const rsloc_obb * box, double vehicle_length, double vehicle_width, rsloc_vec2 sensor,
  rsloc_corrected * out);

#ifdef __cplusplus
}
#endif

#endif  /* RSLOC_RSLOC_H_ */
