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


#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "rsloc/config.hpp"
#include "rsloc/io.hpp"

namespace rsloc
{
namespace
{

namespace fs = std::filesystem;

const fs::path kSourceDir = RSLOC_SOURCE_DIR;

class TempDir : public ::testing::Test
{
protected:
  void SetUp() override
  {
    const auto * info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
      (std::string("rsloc_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override {fs::remove_all(dir_);}

  fs::path path(const std::string & name) const {return dir_ / name;}

  fs::path write(const std::string & name, const std::string & text) const
  {
    std::ofstream(path(name)) << text;
    return path(name);
  }

private:
  fs::path dir_;
};

std::vector<std::string> read_lines(const fs::path & p)
{
  std::ifstream in(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    lines.push_back(line);
  }
  return lines;
}

std::string validation_message(const std::string & text)
{
  try {
    parse_config_string(text, "test.conf");
  } catch (const ValidationError & e) {
    return e.what();
  }
  return {};
}

const std::string kMinimalSweep =
  "mode = sweep\n[sweep]\ndistance_min = 3\ndistance_max = 5\ndistance_step = 1\nyaw_step = 90\n";

ErrorGrid two_by_two()
{
  ErrorGrid g({3.0, 3.5}, {0.0, 90.0});
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      auto & c = g.at(i, j);
      c.distance = g.distances()[i];
      c.yaw_deg = g.yaws_deg()[j];
      c.center_error = 0.1 + 0.2 * static_cast<double>(i) + 0.01 * static_cast<double>(j);
      c.bbox_area_error = 1.0 / 3.0;
      c.yaw_error_deg = 0.7;
      c.off_by_90 = j == 1;
      c.point_count = 100 + i * 10 + j;
    }
  }
  return g;
}

}  // namespace

TEST(Config, bundled_pilot)
{
  const auto cfg = parse_config(kSourceDir / "configs" / "pilot_vlp16.conf");
  ASSERT_EQ(cfg.mode, RunMode::sweep);
  const auto & s = cfg.sweep();
  EXPECT_EQ(s.distances().size(), 75u);
  EXPECT_DOUBLE_EQ(s.distances().front(), 3.0);
  EXPECT_DOUBLE_EQ(s.distances().back(), 40.0);
  EXPECT_DOUBLE_EQ(s.distance_step, 0.5);
  EXPECT_DOUBLE_EQ(s.yaw_step_deg, 2.0);
  EXPECT_EQ(s.lidar.elevation_angles_deg().size(), 16u);
  EXPECT_DOUBLE_EQ(s.lidar.mount().position.z, 2.0);
  EXPECT_DOUBLE_EQ(s.lidar.azimuth_step_deg(), 0.2);
  EXPECT_DOUBLE_EQ(s.vehicle.length(), 4.89);
  EXPECT_FALSE(s.correction_enabled);
  EXPECT_EQ(s.seed, cfg.seed);
  ASSERT_TRUE(cfg.output_dir.has_value());
  EXPECT_EQ(cfg.scales.size(), kHeatmapMetrics.size());
  EXPECT_DOUBLE_EQ(cfg.scales.at("center_error").max, 1.0);
}

TEST(Config, every_bundled_file_parses)
{
  std::size_t count = 0;
  for (const auto & entry : fs::directory_iterator(kSourceDir / "configs")) {
    const auto name = entry.path().filename().string();
    SCOPED_TRACE(name);
    const auto cfg = parse_config(entry.path());
    ++count;
    if (name.starts_with("trajectory")) {
      ASSERT_EQ(cfg.mode, RunMode::trajectory);
      const auto & t = cfg.trajectory();
      EXPECT_EQ(t.positions().size(), 201u);
      EXPECT_EQ(t.lidar.elevation_angles_deg().size(), name.find("vlp32c") != std::string::npos ? 32u : 16u);
      EXPECT_EQ(t.occluders.size(), name.find("occluded") != std::string::npos ? 2u : 0u);
    } else {
      EXPECT_EQ(cfg.mode, RunMode::sweep);
    }
  }
  EXPECT_GE(count, 6u);
}

TEST(Config, zero_step_names_the_key)
{
  std::string text = kMinimalSweep;
  text.replace(text.find("distance_step = 1"), 17, "distance_step = 0");
  const auto msg = validation_message(text);
  EXPECT_NE(msg.find("sweep.distance_step"), std::string::npos) << msg;
  EXPECT_NE(msg.find("test.conf"), std::string::npos);
}

TEST(Config, unknown_keys_and_sections)
{
  auto msg = validation_message(kMinimalSweep + "[lidar]\nhieght = 2\n");
  EXPECT_NE(msg.find("unknown key 'lidar.hieght'"), std::string::npos) << msg;
  msg = validation_message("lidar_hieght = 2\n" + kMinimalSweep);
  EXPECT_NE(msg.find("unknown key 'lidar_hieght'"), std::string::npos) << msg;
  msg = validation_message(kMinimalSweep + "[camera]\nfov = 2\n");
  EXPECT_NE(msg.find("unknown section '[camera]'"), std::string::npos) << msg;
}

TEST(Config, missing_keys_reported_together)
{
  const auto msg = validation_message("mode = sweep\n[sweep]\ndistance_min = 3\n");
  EXPECT_NE(msg.find("missing required keys"), std::string::npos) << msg;
  for (const char * key : {"sweep.distance_max", "sweep.distance_step", "sweep.yaw_step"}) {
    EXPECT_NE(msg.find(key), std::string::npos) << key;
  }
  EXPECT_EQ(msg.find("sweep.distance_min"), std::string::npos);

  const auto none = validation_message("seed = 1\n");
  EXPECT_NE(none.find("mode"), std::string::npos);
}

TEST(Config, several_problems_in_one_message)
{
  const auto msg = validation_message(
    kMinimalSweep + "[vehicle]\nwidth = -1\n[boxfit]\nangle_step = 20\nmin_points = x\n");
  EXPECT_NE(msg.find("vehicle.width"), std::string::npos) << msg;
  EXPECT_NE(msg.find("boxfit.angle_step"), std::string::npos) << msg;
  EXPECT_NE(msg.find("boxfit.min_points"), std::string::npos) << msg;
}

TEST(Config, value_rules)
{
  EXPECT_NE(validation_message("mode = sideways\n").find("'mode'"), std::string::npos);
  std::string bad_yaw = kMinimalSweep;
  bad_yaw.replace(bad_yaw.find("yaw_step = 90"), 13, "yaw_step = 7");
  EXPECT_NE(validation_message(bad_yaw).find("sweep.yaw_step"), std::string::npos);
  EXPECT_NE(validation_message(kMinimalSweep + "[lidar]\nmodel = hdl64\n").find("lidar.model"),
    std::string::npos);
  EXPECT_NE(validation_message(kMinimalSweep + "[render]\nyaw_error_max = 0\n")
    .find("render.yaw_error_max"), std::string::npos);
  EXPECT_NE(validation_message(kMinimalSweep + "[occluder.a]\nx = 1\n").find("occluder.a"),
    std::string::npos);
  EXPECT_NE(validation_message(
      "mode = trajectory\n[trajectory]\nrange_min = -5\nrange_max = 5\nsample_step = 1\n"
      "[lidar]\nx = 3\n").find("lidar.x"), std::string::npos);

  const auto custom = parse_config_string(
    kMinimalSweep + "[lidar]\nmodel = custom\nelevation_angles = -10, 0, 10\n"
    "range_noise_sigma = 0.02\n");
  EXPECT_EQ(custom.sweep().lidar.elevation_angles_deg().size(), 3u);
  EXPECT_DOUBLE_EQ(custom.sweep().lidar.range_noise_sigma(), 0.02);
  EXPECT_NE(validation_message(kMinimalSweep + "[lidar]\nelevation_angles = 1, 0\n")
    .find("strictly increasing"), std::string::npos);
}

TEST(Config, trajectory_fields)
{
  const auto cfg = parse_config_string(
    "mode = trajectory\nseed = 9\n[trajectory]\nrange_min = -10\nrange_max = 10\n"
    "sample_step = 2\nlidar_offset = 6\nroad_heading = 90\n[perception]\n"
    "background_epsilon = 0.2\n[occluder.post]\nx = 1\ny = 2\nlength = 0.3\nwidth = 0.3\n"
    "height = 3\nz_min = 0.5\n");
  const auto & t = cfg.trajectory();
  EXPECT_EQ(t.positions().size(), 11u);
  EXPECT_DOUBLE_EQ(t.lidar_offset, 6.0);
  EXPECT_DOUBLE_EQ(t.road_heading_deg, 90.0);
  EXPECT_DOUBLE_EQ(t.background_epsilon, 0.2);
  EXPECT_EQ(t.seed, 9u);
  ASSERT_EQ(t.occluders.size(), 1u);
  EXPECT_DOUBLE_EQ(t.occluders[0].z_min, 0.5);
}

TEST(Config, missing_file_is_io_error)
{
  EXPECT_THROW(parse_config(kSourceDir / "configs" / "no_such.conf"), IoError);
}

TEST(FormatNumber, round_trips)
{
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  for (int k = 0; k < 20000; ++k) {
    const double v = k % 2 ? u(rng) : u(rng) * 1e-9;
    const auto text = format_number(v);
    ASSERT_EQ(std::stod(text), v) << text;
  }
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(3.0), "3");
  EXPECT_EQ(format_number(std::nan("")), "");
}

using GridCsv = TempDir;

TEST_F(GridCsv, layout_of_a_two_by_two_grid)
{
  auto g = two_by_two();
  g.at(1, 0).status = CellStatus::too_few_points;
  g.at(1, 0).point_count = 2;
  write_grid_csv(g, path("grid.csv"));
  const auto lines = read_lines(path("grid.csv"));
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], kGridCsvHeader);
  EXPECT_EQ(lines[1], "3,0,0.1,0.3333333333333333,0.7,0,100,ok");
  EXPECT_EQ(lines[2].substr(0, 5), "3,90,");
  EXPECT_EQ(lines[3], "3.5,0,,,,,2,too_few_points");
}

TEST_F(GridCsv, round_trip_is_lossless)
{
  std::mt19937_64 rng(89);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  ErrorGrid g({3.0, 3.5, 4.0}, {0.0, 2.0, 4.0, 6.0});
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      auto & c = g.at(i, j);
      c.distance = g.distances()[i];
      c.yaw_deg = g.yaws_deg()[j];
      c.center_error = u(rng);
      c.bbox_area_error = u(rng) - 1.5;
      c.yaw_error_deg = u(rng) * 30.0;
      c.off_by_90 = u(rng) > 2.0;
      c.point_count = static_cast<std::size_t>(u(rng) * 1000);
      if (i == 2 && j == 1) {
        c.status = CellStatus::fit_failed;
        c.center_error = c.bbox_area_error = c.yaw_error_deg = std::nan("");
        c.off_by_90 = false;
      }
    }
  }
  write_grid_csv(g, path("a.csv"));
  const auto back = read_grid_csv(path("a.csv"));
  ASSERT_EQ(back.rows(), g.rows());
  ASSERT_EQ(back.cols(), g.cols());
  for (std::size_t k = 0; k < g.cells().size(); ++k) {
    const auto & a = g.cells()[k];
    const auto & b = back.cells()[k];
    EXPECT_EQ(a.distance, b.distance);
    EXPECT_EQ(a.yaw_deg, b.yaw_deg);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.point_count, b.point_count);
    EXPECT_EQ(a.off_by_90, b.off_by_90);
    if (a.ok()) {
      EXPECT_EQ(a.center_error, b.center_error);
      EXPECT_EQ(a.bbox_area_error, b.bbox_area_error);
      EXPECT_EQ(a.yaw_error_deg, b.yaw_error_deg);
    } else {
      EXPECT_TRUE(std::isnan(b.center_error));
    }
  }
  write_grid_csv(back, path("b.csv"));
  EXPECT_EQ(read_lines(path("a.csv")), read_lines(path("b.csv")));
}

TEST_F(GridCsv, malformed_files)
{
  const std::string header = std::string(kGridCsvHeader) + "\n";
  EXPECT_THROW(read_grid_csv(path("missing.csv")), IoError);
  EXPECT_THROW(read_grid_csv(write("h.csv", "a,b\n3,0\n")), ValidationError);
  EXPECT_THROW(read_grid_csv(write("e.csv", header)), ValidationError);
  try {
    read_grid_csv(write("f.csv", header + "3,0,0.1,0.1,0.1,0,10,ok\n3,90,0.1,0.1\n"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError & e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(read_grid_csv(write("s.csv", header + "3,0,0.1,0.1,0.1,0,10,bogus\n")),
    ValidationError);
  // 3 cells cannot form a distance x yaw grid
  EXPECT_THROW(read_grid_csv(write("i.csv", header + "3,0,0.1,0.1,0.1,0,10,ok\n"
    "3,90,0.1,0.1,0.1,0,10,ok\n3.5,0,0.1,0.1,0.1,0,10,ok\n")), ValidationError);
}

TEST(RampColor, endpoints_and_clamping)
{
  const ColorScale s{0.0, 2.0};
  EXPECT_EQ(ramp_color(0.0, s), kRampLow);
  EXPECT_EQ(ramp_color(2.0, s), kRampHigh);
  EXPECT_EQ(ramp_color(-5.0, s), kRampLow);
  EXPECT_EQ(ramp_color(9.0, s), kRampHigh);
  const auto mid = ramp_color(1.0, s);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(mid[k], (kRampLow[k] + kRampHigh[k]) / 2.0, 0.5 + 1e-9);
  }
  for (double v = 0.0; v <= 2.0; v += 0.01) {
    EXPECT_NE(ramp_color(v, s), kFailedCellColor);
  }
}

using Heatmap = TempDir;

TEST_F(Heatmap, ppm_layout_and_colors)
{
  ErrorGrid g({3.0, 3.5, 4.0}, {0.0, 90.0});
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      g.at(i, j).center_error = 0.5;
    }
  }
  render_heatmap(g, "center_error", path("u.ppm"), {0.0, 1.0});
  auto lines = read_lines(path("u.ppm"));
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "P3");
  EXPECT_EQ(lines[1], "2 3");
  EXPECT_EQ(lines[2], "255");
  const auto px = ramp_color(0.5, {0.0, 1.0});
  std::ostringstream one;
  one << int{px[0]} << ' ' << int{px[1]} << ' ' << int{px[2]};
  for (std::size_t r = 3; r < 6; ++r) {
    EXPECT_EQ(lines[r], one.str() + " " + one.str());
  }

  g.at(0, 0).center_error = 0.0;
  g.at(0, 1).center_error = 1.0;
  g.at(2, 1).status = CellStatus::too_few_points;
  render_heatmap(g, "center_error", path("e.ppm"), {0.0, 1.0});
  lines = read_lines(path("e.ppm"));
  EXPECT_EQ(lines[3], "13 8 135 240 249 33");
  EXPECT_EQ(lines[5].substr(lines[5].size() - 9), "255 0 255");
}

TEST_F(Heatmap, rejects_bad_requests)
{
  const auto g = two_by_two();
  EXPECT_THROW(render_heatmap(g, "speed", path("x.ppm"), {0.0, 1.0}), ValidationError);
  EXPECT_THROW(render_heatmap(g, "yaw_error", path("x.ppm"), {1.0, 1.0}), ValidationError);
  EXPECT_THROW(render_heatmap(g, "yaw_error", path("no/such/dir/x.ppm"), {0.0, 1.0}), IoError);
  EXPECT_NO_THROW(render_heatmap(g, "point_count", path("p.ppm"), default_scale("point_count")));
}

using BaselineCsv = TempDir;

TEST_F(BaselineCsv, reads_and_sorts)
{
  const auto rows = read_baseline_csv(write("b.csv", "position_m,error_m\n1.5,0.2\n-1,0.4\n"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[0].position, -1.0);
  EXPECT_DOUBLE_EQ(rows[0].error, 0.4);
  EXPECT_DOUBLE_EQ(rows[1].position, 1.5);
}

TEST_F(BaselineCsv, errors_name_the_line)
{
  try {
    read_baseline_csv(write("b.csv", "position_m,error_m\n0,0.1\n0.5,abc\n"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError & e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("b.csv:3:"), std::string::npos) << msg;
    EXPECT_NE(msg.find("abc"), std::string::npos) << msg;
  }
  EXPECT_THROW(read_baseline_csv(write("d.csv", "position_m,error_m\n0,0.1\n0,0.2\n")),
    ValidationError);
  EXPECT_THROW(read_baseline_csv(write("h.csv", "pos,err\n0,0.1\n")), ValidationError);
  EXPECT_THROW(read_baseline_csv(path("nope.csv")), IoError);
}

TEST(ReferenceTrace, bundled_file_means)
{
  const auto rows = read_baseline_csv(kSourceDir / "data" / "ndt_reference_trace.csv");
  ASSERT_EQ(rows.size(), 201u);
  std::vector<TrajectorySample> as_trace;
  for (const auto & b : rows) {
    TrajectorySample s;
    s.position = b.position;
    s.error = b.error;
    as_trace.push_back(s);
  }
  const auto sums = summarize(as_trace, std::vector<PositionRange>{{-36, 36}, {-50, 50}});
  EXPECT_NEAR(sums[0].stats->mae, 0.1927, 5e-5);
  EXPECT_NEAR(sums[1].stats->mae, 0.1704, 5e-5);
}

using ResultCsv = TempDir;

TEST_F(ResultCsv, trajectory_summary_and_comparison_rows)
{
  TrajectorySample good;
  good.position = -0.5;
  good.error = 0.125;
  good.yaw_error_deg = 0.25;
  good.off_by_90_suspect = true;
  good.point_count = 321;
  TrajectorySample bad;
  bad.position = 0.0;
  bad.error = std::nan("");
  bad.status = CellStatus::too_few_points;
  const std::vector<TrajectorySample> trace = {good, bad};
  write_trajectory_csv(trace, path("t.csv"));
  auto lines = read_lines(path("t.csv"));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], kTrajectoryCsvHeader);
  EXPECT_EQ(lines[1], "-0.5,0.125,0.25,0,1,321,ok");
  EXPECT_EQ(lines[2], "0,,,,,0,too_few_points");

  write_summary_csv(summarize(trace, std::vector<PositionRange>{{-1, 1}, {5, 6}}),
    path("s.csv"));
  lines = read_lines(path("s.csv"));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[1], "-1,1,1,1,0.125,0.125,0.125,0.125,ok");
  EXPECT_EQ(lines[2], "5,6,0,0,,,,,empty");

  const std::vector<BaselineSample> base = {{-0.5, 0.25}};
  write_comparison_csv(compare_with_baseline(trace, base, 0.5), path("c.csv"));
  lines = read_lines(path("c.csv"));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[1], "-0.5,0.125,ok,1,-0.5,0.25");
  EXPECT_EQ(lines[2], "0,,too_few_points,0,,");
}

}  // namespace rsloc
