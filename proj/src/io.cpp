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

#include "rsloc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

namespace rsloc
{
namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_out(const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  return out;
}

void finish(std::ofstream & out, const std::filesystem::path & path)
{
  out.flush();
  if (!out) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

std::ifstream open_in(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  return in;
}

std::vector<std::string> split_csv(std::string line)
{
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return fields;
}

class LineError
{
public:
  LineError(const std::filesystem::path & path, std::size_t line)
  : prefix_(path.string() + ":" + std::to_string(line) + ": ") {}

  [[noreturn]] void raise(const std::string & message) const
  {
    throw ValidationError(prefix_ + message);
  }

private:
  std::string prefix_;
};

double parse_number(const std::string & text, const LineError & where, const char * field)
{
  double value = 0.0;
  const auto * end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    where.raise(std::string("field '") + field + "' is not a number: '" + text + "'");
  }
  return value;
}

double parse_optional_number(const std::string & text, const LineError & where, const char * field)
{
  return text.empty() ? kNaN : parse_number(text, where, field);
}

std::size_t parse_count(const std::string & text, const LineError & where, const char * field)
{
  std::size_t value = 0;
  const auto * end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    where.raise(std::string("field '") + field + "' is not a count: '" + text + "'");
  }
  return value;
}

double metric_value(const CellMetrics & cell, const std::string & metric)
{
  if (metric == "center_error") {return cell.center_error;}
  if (metric == "bbox_area_error") {return cell.bbox_area_error;}
  if (metric == "yaw_error") {return cell.yaw_error_deg;}
  if (metric == "point_count") {return static_cast<double>(cell.point_count);}
  throw ValidationError("unknown heat-map metric '" + metric + "'");
}

}  // namespace

std::string format_number(double value)
{
  if (std::isnan(value)) {
    return {};
  }
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

void write_grid_csv(const ErrorGrid & grid, const std::filesystem::path & path)
{
  auto out = open_out(path);
  out << kGridCsvHeader << '\n';
  for (const auto & c : grid.cells()) {
    out << format_number(c.distance) << ',' << format_number(c.yaw_deg) << ',';
    if (c.ok()) {
      out << format_number(c.center_error) << ',' << format_number(c.bbox_area_error) << ','
          << format_number(c.yaw_error_deg) << ',' << (c.off_by_90 ? 1 : 0) << ',';
    } else {
      out << ",,,,";
    }
    out << c.point_count << ',' << to_string(c.status) << '\n';
  }
  finish(out, path);
}

ErrorGrid read_grid_csv(const std::filesystem::path & path)
{
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split_csv(line) != split_csv(kGridCsvHeader)) {
    LineError(path, 1).raise(std::string("expected header '") + kGridCsvHeader + "'");
  }

  std::vector<CellMetrics> cells;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") {
      continue;
    }
    const LineError where(path, line_no);
    const auto f = split_csv(line);
    if (f.size() != 8) {
      where.raise("expected 8 fields, got " + std::to_string(f.size()));
    }
    CellMetrics c;
    c.distance = parse_number(f[0], where, "distance_m");
    c.yaw_deg = parse_number(f[1], where, "yaw_deg");
    c.center_error = parse_optional_number(f[2], where, "center_error_m");
    c.bbox_area_error = parse_optional_number(f[3], where, "bbox_area_error_m2");
    c.yaw_error_deg = parse_optional_number(f[4], where, "yaw_error_deg");
    if (f[5] == "1") {
      c.off_by_90 = true;
    } else if (f[5] == "0" || f[5].empty()) {
      c.off_by_90 = false;
    } else {
      where.raise("field 'off_by_90' must be 0 or 1");
    }
    c.point_count = parse_count(f[6], where, "point_count");
    try {
      c.status = cell_status_from_string(f[7]);
    } catch (const ValidationError & e) {
      where.raise(e.what());
    }
    cells.push_back(c);
  }
  if (cells.empty()) {
    throw ValidationError(path.string() + ": grid has no cells");
  }

  std::vector<double> distances;
  std::vector<double> yaws;
  for (const auto & c : cells) {
    if (distances.empty() || distances.back() != c.distance) {
      distances.push_back(c.distance);
    }
    if (distances.size() == 1) {
      yaws.push_back(c.yaw_deg);
    }
  }
  if (cells.size() != distances.size() * yaws.size()) {
    throw ValidationError(path.string() + ": grid is incomplete or not distance-major");
  }
  ErrorGrid grid(distances, yaws);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const std::size_t i = k / yaws.size();
    const std::size_t j = k % yaws.size();
    if (cells[k].distance != distances[i] || cells[k].yaw_deg != yaws[j]) {
      throw ValidationError(
              path.string() + ":" + std::to_string(k + 2) + ": row out of distance-major order");
    }
    grid.at(i, j) = cells[k];
  }
  return grid;
}

Rgb ramp_color(double value, ColorScale scale)
{
  const double t = std::clamp((value - scale.min) / (scale.max - scale.min), 0.0, 1.0);
  Rgb out{};
  for (std::size_t k = 0; k < 3; ++k) {
    const double lo = kRampLow[k];
    const double hi = kRampHigh[k];
    out[k] = static_cast<std::uint8_t>(std::lround(lo + t * (hi - lo)));
  }
  return out;
}

void render_heatmap(
  const ErrorGrid & grid, const std::string & metric, const std::filesystem::path & path,
  ColorScale scale)
{
  if (std::find(kHeatmapMetrics.begin(), kHeatmapMetrics.end(), metric) == kHeatmapMetrics.end()) {
    throw ValidationError("unknown heat-map metric '" + metric + "'");
  }
  if (!std::isfinite(scale.min) || !std::isfinite(scale.max) || !(scale.max > scale.min)) {
    throw ValidationError("heat-map scale span must be positive");
  }
  auto out = open_out(path);
  out << "P3\n" << grid.cols() << ' ' << grid.rows() << "\n255\n";
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      const auto & cell = grid.at(i, j);
      const Rgb px = cell.ok() ? ramp_color(metric_value(cell, metric), scale) : kFailedCellColor;
      out << (j == 0 ? "" : " ") << int{px[0]} << ' ' << int{px[1]} << ' ' << int{px[2]};
    }
    out << '\n';
  }
  finish(out, path);
}

std::vector<BaselineSample> read_baseline_csv(const std::filesystem::path & path)
{
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split_csv(line) != split_csv(kBaselineCsvHeader)) {
    LineError(path, 1).raise(std::string("expected header '") + kBaselineCsvHeader + "'");
  }
  std::vector<BaselineSample> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") {
      continue;
    }
    const LineError where(path, line_no);
    const auto f = split_csv(line);
    if (f.size() != 2) {
      where.raise("expected 2 fields, got " + std::to_string(f.size()));
    }
    const double pos = parse_number(f[0], where, "position_m");
    const double err = parse_number(f[1], where, "error_m");
    if (!std::isfinite(pos) || !std::isfinite(err)) {
      where.raise("values must be finite");
    }
    for (const auto & s : out) {
      if (s.position == pos) {
        where.raise("duplicate position " + f[0]);
      }
    }
    out.push_back({pos, err});
  }
  std::sort(out.begin(), out.end(), [](const auto & a, const auto & b) {
      return a.position < b.position;
    });
  return out;
}

void write_trajectory_csv(
  std::span<const TrajectorySample> trace, const std::filesystem::path & path)
{
  auto out = open_out(path);
  out << kTrajectoryCsvHeader << '\n';
  for (const auto & s : trace) {
    out << format_number(s.position) << ',';
    if (s.ok()) {
      out << format_number(s.error) << ',' << format_number(s.yaw_error_deg) << ','
          << (s.off_by_90 ? 1 : 0) << ',' << (s.off_by_90_suspect ? 1 : 0) << ',';
    } else {
      out << ",,,,";
    }
    out << s.point_count << ',' << to_string(s.status) << '\n';
  }
  finish(out, path);
}

void write_summary_csv(std::span<const RangeSummary> rows, const std::filesystem::path & path)
{
  auto out = open_out(path);
  out << kSummaryCsvHeader << '\n';
  for (const auto & r : rows) {
    out << format_number(r.range.min) << ',' << format_number(r.range.max) << ',' << r.ok_count
        << ',' << r.failed_count << ',';
    if (r.stats) {
      out << format_number(r.stats->mae) << ',' << format_number(r.stats->p25) << ','
          << format_number(r.stats->p50) << ',' << format_number(r.stats->p75) << ",ok\n";
    } else {
      out << ",,,,empty\n";
    }
  }
  finish(out, path);
}

void write_comparison_csv(std::span<const ComparisonRow> rows, const std::filesystem::path & path)
{
  auto out = open_out(path);
  out << kComparisonCsvHeader << '\n';
  for (const auto & r : rows) {
    out << format_number(r.position) << ',' << format_number(r.roadside_error) << ','
        << to_string(r.status) << ',' << (r.matched ? 1 : 0) << ','
        << format_number(r.baseline_position) << ',' << format_number(r.baseline_error) << '\n';
  }
  finish(out, path);
}

void write_cloud_csv(const PointCloud & cloud, const std::filesystem::path & path)
{
  auto out = open_out(path);
  out << "x,y,z,surface_tag\n";
  const bool tagged = cloud.has_tags();
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto & p = cloud.points[i];
    out << format_number(p.x) << ',' << format_number(p.y) << ',' << format_number(p.z) << ','
        << (tagged ? cloud.tags[i] : -1) << '\n';
  }
  finish(out, path);
}

}  // namespace rsloc
