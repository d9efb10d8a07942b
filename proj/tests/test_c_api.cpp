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


// Exercises the shared library through its C header only.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "rsloc/rsloc.h"

namespace
{

namespace fs = std::filesystem;

const char * const kSmallSweep =
  "mode = sweep\nseed = 4\n[lidar]\nazimuth_step = 1.0\n"
  "[sweep]\ndistance_min = 6\ndistance_max = 12\ndistance_step = 6\nyaw_step = 45\n";

const char * const kSmallTrajectory =
  "mode = trajectory\nseed = 4\n[lidar]\nazimuth_step = 0.5\n"
  "[trajectory]\nrange_min = -6\nrange_max = 6\nsample_step = 3\n";

rsloc_config * parse(const char * text)
{
  rsloc_config * cfg = nullptr;
  EXPECT_EQ(rsloc_config_parse(text, &cfg), RSLOC_OK) << rsloc_last_error();
  return cfg;
}

}  // namespace

TEST(CApi, version_and_null_arguments)
{
  EXPECT_STREQ(rsloc_version(), "1.0.0");
  rsloc_config * cfg = nullptr;
  EXPECT_EQ(rsloc_config_parse(nullptr, &cfg), RSLOC_ERR_NULL_ARGUMENT);
  EXPECT_NE(std::string(rsloc_last_error()).find("text"), std::string::npos);
  EXPECT_EQ(rsloc_config_load("x.conf", nullptr), RSLOC_ERR_NULL_ARGUMENT);
  EXPECT_EQ(rsloc_run_sweep(nullptr, 1, nullptr), RSLOC_ERR_NULL_ARGUMENT);
  EXPECT_EQ(rsloc_grid_rows(nullptr), 0u);
  EXPECT_EQ(rsloc_trace_size(nullptr), 0u);
  rsloc_config_free(nullptr);
  rsloc_grid_free(nullptr);
  rsloc_trace_free(nullptr);
  rsloc_baseline_free(nullptr);
}

TEST(CApi, config_errors_map_to_status)
{
  rsloc_config * cfg = nullptr;
  EXPECT_EQ(rsloc_config_parse("mode = sweep\n[sweep]\ndistance_step = 0\n", &cfg),
    RSLOC_ERR_VALIDATION);
  EXPECT_EQ(cfg, nullptr);
  EXPECT_NE(std::string(rsloc_last_error()).find("sweep.distance_step"), std::string::npos);
  EXPECT_EQ(rsloc_config_load("/nonexistent/rsloc.conf", &cfg), RSLOC_ERR_IO);
}

TEST(CApi, config_accessors)
{
  rsloc_config * cfg = parse(kSmallSweep);
  ASSERT_NE(cfg, nullptr);
  EXPECT_EQ(rsloc_config_mode(cfg), RSLOC_MODE_SWEEP);
  EXPECT_EQ(rsloc_config_output_dir(cfg), nullptr);
  double lo = -1.0;
  double hi = -1.0;
  EXPECT_EQ(rsloc_config_scale(cfg, "yaw_error", &lo, &hi), RSLOC_OK);
  EXPECT_DOUBLE_EQ(lo, 0.0);
  EXPECT_DOUBLE_EQ(hi, 45.0);
  EXPECT_EQ(rsloc_config_scale(cfg, "speed", &lo, &hi), RSLOC_ERR_VALIDATION);
  EXPECT_EQ(rsloc_config_set_correction(cfg, 1), RSLOC_OK);
  rsloc_trace * trace = nullptr;
  EXPECT_EQ(rsloc_run_trajectory(cfg, 1, &trace), RSLOC_ERR_VALIDATION);
  rsloc_config_free(cfg);

  cfg = parse(kSmallTrajectory);
  EXPECT_EQ(rsloc_config_mode(cfg), RSLOC_MODE_TRAJECTORY);
  EXPECT_EQ(rsloc_config_set_correction(cfg, 1), RSLOC_ERR_VALIDATION);
  rsloc_config_free(cfg);
}

TEST(CApi, sweep_grid_round_trip)
{
  rsloc_config * cfg = parse(kSmallSweep);
  rsloc_grid * grid = nullptr;
  ASSERT_EQ(rsloc_run_sweep(cfg, 2, &grid), RSLOC_OK) << rsloc_last_error();
  ASSERT_EQ(rsloc_grid_rows(grid), 2u);
  ASSERT_EQ(rsloc_grid_cols(grid), 8u);
  rsloc_cell cell{};
  ASSERT_EQ(rsloc_grid_cell(grid, 1, 3, &cell), RSLOC_OK);
  EXPECT_DOUBLE_EQ(cell.distance_m, 12.0);
  EXPECT_DOUBLE_EQ(cell.yaw_deg, 135.0);
  EXPECT_EQ(cell.status, RSLOC_CELL_OK);
  EXPECT_GT(cell.point_count, 0u);
  EXPECT_EQ(rsloc_grid_cell(grid, 2, 0, &cell), RSLOC_ERR_OUT_OF_RANGE);

  const auto dir = fs::temp_directory_path() / "rsloc_capi_grid";
  fs::create_directories(dir);
  const auto csv = (dir / "grid.csv").string();
  ASSERT_EQ(rsloc_grid_write_csv(grid, csv.c_str()), RSLOC_OK);
  rsloc_grid * back = nullptr;
  ASSERT_EQ(rsloc_grid_read_csv(csv.c_str(), &back), RSLOC_OK) << rsloc_last_error();
  for (size_t i = 0; i < 2; ++i) {
    for (size_t j = 0; j < 8; ++j) {
      rsloc_cell a{};
      rsloc_cell b{};
      rsloc_grid_cell(grid, i, j, &a);
      rsloc_grid_cell(back, i, j, &b);
      EXPECT_EQ(a.status, b.status);
      EXPECT_EQ(a.point_count, b.point_count);
      if (a.status == RSLOC_CELL_OK) {
        EXPECT_EQ(a.center_error_m, b.center_error_m);
      } else {
        EXPECT_TRUE(std::isnan(b.center_error_m));
      }
    }
  }
  const auto ppm = (dir / "c.ppm").string();
  EXPECT_EQ(rsloc_grid_render(back, "center_error", 0.0, 1.0, ppm.c_str()), RSLOC_OK);
  EXPECT_TRUE(fs::exists(ppm));
  EXPECT_EQ(rsloc_grid_render(back, "center_error", 1.0, 0.0, ppm.c_str()), RSLOC_ERR_VALIDATION);
  EXPECT_EQ(rsloc_grid_write_csv(grid, "/nonexistent/dir/g.csv"), RSLOC_ERR_IO);
  rsloc_grid_free(back);
  rsloc_grid_free(grid);
  rsloc_config_free(cfg);
  fs::remove_all(dir);
}

TEST(CApi, trajectory_summary_and_baseline)
{
  rsloc_config * cfg = parse(kSmallTrajectory);
  rsloc_trace * trace = nullptr;
  ASSERT_EQ(rsloc_run_trajectory(cfg, 1, &trace), RSLOC_OK) << rsloc_last_error();
  ASSERT_EQ(rsloc_trace_size(trace), 5u);
  rsloc_trajectory_sample s{};
  ASSERT_EQ(rsloc_trace_sample(trace, 4, &s), RSLOC_OK);
  EXPECT_DOUBLE_EQ(s.position_m, 6.0);
  EXPECT_EQ(s.status, RSLOC_CELL_OK);
  EXPECT_LT(s.error_m, 0.05);
  EXPECT_EQ(rsloc_trace_sample(trace, 5, &s), RSLOC_ERR_OUT_OF_RANGE);

  const rsloc_range ranges[] = {{-3.0, 3.0}, {20.0, 30.0}};
  rsloc_range_summary sums[2];
  ASSERT_EQ(rsloc_trace_summarize(trace, ranges, 2, sums), RSLOC_OK);
  EXPECT_EQ(sums[0].ok_count, 3u);
  EXPECT_EQ(sums[0].has_stats, 1);
  EXPECT_LE(sums[0].p25, sums[0].p50);
  EXPECT_LE(sums[0].p50, sums[0].p75);
  EXPECT_EQ(sums[1].has_stats, 0);
  EXPECT_TRUE(std::isnan(sums[1].mae));
  double reach = -1.0;
  ASSERT_EQ(rsloc_trace_effective_range(trace, 0.3, 0.75, &reach), RSLOC_OK);
  EXPECT_DOUBLE_EQ(reach, 6.0);

  const auto dir = fs::temp_directory_path() / "rsloc_capi_trace";
  fs::create_directories(dir);
  const auto base_path = (dir / "base.csv").string();
  {
    std::FILE * f = std::fopen(base_path.c_str(), "w");
    ASSERT_NE(f, nullptr);
    std::fputs("position_m,error_m\n-3,0.2\n0,0.1\n3,0.3\n", f);
    std::fclose(f);
  }
  rsloc_baseline * base = nullptr;
  ASSERT_EQ(rsloc_baseline_read_csv(base_path.c_str(), &base), RSLOC_OK);
  EXPECT_EQ(rsloc_baseline_size(base), 3u);
  ASSERT_EQ(rsloc_baseline_summarize(base, ranges, 1, sums), RSLOC_OK);
  EXPECT_NEAR(sums[0].mae, 0.2, 1e-12);
  const auto cmp = (dir / "cmp.csv").string();
  EXPECT_EQ(rsloc_write_comparison_csv(trace, base, cmp.c_str()), RSLOC_OK) << rsloc_last_error();
  EXPECT_TRUE(fs::exists(cmp));
  EXPECT_EQ(rsloc_baseline_read_csv((dir / "none.csv").string().c_str(), &base), RSLOC_ERR_IO);
  EXPECT_EQ(base, nullptr);

  rsloc_trace_free(trace);
  rsloc_config_free(cfg);
  fs::remove_all(dir);
}

TEST(CApi, box_fit_and_correction)
{
  // dense L: 4 m face along x, 2 m face along y, corner at (10, 5)
  std::vector<rsloc_vec2> pts;
  for (int k = 0; k <= 40; ++k) {
    pts.push_back({10.0 + 0.1 * k, 5.0});
  }
  for (int k = 1; k <= 20; ++k) {
    pts.push_back({10.0, 5.0 + 0.1 * k});
  }
  rsloc_obb box{};
  ASSERT_EQ(rsloc_lshape_fit(pts.data(), pts.size(), nullptr, &box), RSLOC_OK);
  EXPECT_NEAR(box.yaw_deg, 0.0, 1e-9);
  EXPECT_NEAR(box.long_edge, 4.0, 1e-9);
  EXPECT_NEAR(box.short_edge, 2.0, 1e-9);

  rsloc_corrected corr{};
  ASSERT_EQ(rsloc_size_correct(&box, 4.89, 1.9, rsloc_vec2{0.0, 0.0}, &corr), RSLOC_OK);
  EXPECT_NEAR(corr.alignment_point.x, 10.0, 1e-9);
  EXPECT_NEAR(corr.alignment_point.y, 5.0, 1e-9);
  EXPECT_NEAR(corr.center.x, 10.0 + 4.89 / 2.0, 1e-9);
  EXPECT_NEAR(corr.center.y, 5.0 + 1.9 / 2.0, 1e-9);
  EXPECT_EQ(corr.off_by_90_suspect, 0);

  EXPECT_EQ(rsloc_lshape_fit(pts.data(), 2, nullptr, &box), RSLOC_ERR_TOO_FEW_POINTS);
  const rsloc_vec2 line[] = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  EXPECT_EQ(rsloc_lshape_fit(line, 4, nullptr, &box), RSLOC_ERR_DEGENERATE);
  const rsloc_lshape_config bad{0.0, 0.01, 3};
  EXPECT_EQ(rsloc_lshape_fit(pts.data(), pts.size(), &bad, &box), RSLOC_ERR_VALIDATION);
  EXPECT_EQ(rsloc_lshape_fit(nullptr, 3, nullptr, &box), RSLOC_ERR_NULL_ARGUMENT);
}
