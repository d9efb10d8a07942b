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

#include "rsloc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace rsloc
{
namespace
{

namespace pt = boost::property_tree;

const std::set<std::string> kRootKeys = {"mode", "seed", "output_dir"};
const std::set<std::string> kLidarKeys = {
  "model", "elevation_angles", "azimuth_step", "max_range", "height", "x", "y", "yaw",
  "range_noise_sigma"};
const std::set<std::string> kVehicleKeys = {"length", "width", "height"};
const std::set<std::string> kBoxfitKeys = {"angle_step", "min_dist_clamp", "min_points"};
const std::set<std::string> kPerceptionKeys = {"z_threshold", "background_epsilon"};
const std::set<std::string> kEvaluationKeys = {"off_by_90_tolerance"};
const std::set<std::string> kSweepKeys = {
  "distance_min", "distance_max", "distance_step", "yaw_step", "correction"};
const std::set<std::string> kSweepRequired = {
  "distance_min", "distance_max", "distance_step", "yaw_step"};
const std::set<std::string> kTrajectoryKeys = {
  "range_min", "range_max", "sample_step", "lidar_offset", "road_x", "road_y", "road_heading"};
const std::set<std::string> kTrajectoryRequired = {"range_min", "range_max", "sample_step"};
const std::set<std::string> kOccluderKeys = {"x", "y", "length", "width", "height", "yaw", "z_min"};
const std::set<std::string> kOccluderRequired = {"x", "y", "length", "width", "height"};

std::set<std::string> render_keys()
{
  std::set<std::string> keys;
  for (const char * m : kHeatmapMetrics) {
    keys.insert(std::string(m) + "_min");
    keys.insert(std::string(m) + "_max");
  }
  return keys;
}

std::string trim(std::string s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Collects every diagnostic so the user sees all problems at once.
class Diagnostics
{
public:
  void add(std::string message) {messages_.push_back(std::move(message));}
  bool empty() const {return messages_.empty();}

  [[noreturn]] void raise(const std::string & origin) const
  {
    std::ostringstream out;
    out << origin << ": invalid configuration";
    for (const auto & m : messages_) {
      out << "\n  - " << m;
    }
    throw ValidationError(out.str());
  }

private:
  std::vector<std::string> messages_;
};

// View over one section with typed, self-reporting accessors.
class Section
{
public:
  Section(std::string name, const pt::ptree * tree, Diagnostics & diag)
  : name_(std::move(name)), tree_(tree), diag_(diag) {}

  std::string qualified(const std::string & key) const
  {
    return name_.empty() ? key : name_ + "." + key;
  }

  void check_keys(const std::set<std::string> & allowed) const
  {
    if (tree_ == nullptr) {
      return;
    }
    for (const auto & [key, child] : *tree_) {
      if (!child.empty()) {
        continue;  // nested sections are handled by the caller
      }
      if (!allowed.contains(key)) {
        diag_.add("unknown key '" + qualified(key) + "'");
      }
    }
  }

  void require(const std::set<std::string> & keys, std::vector<std::string> & missing) const
  {
    for (const auto & key : keys) {
      if (!raw(key)) {
        missing.push_back(qualified(key));
      }
    }
  }

  std::optional<std::string> raw(const std::string & key) const
  {
    if (tree_ == nullptr) {
      return std::nullopt;
    }
    const auto it = tree_->find(key);
    if (it == tree_->not_found() || !it->second.empty()) {
      return std::nullopt;
    }
    return trim(it->second.data());
  }

  double number(const std::string & key, double fallback) const
  {
    const auto text = raw(key);
    if (!text) {
      return fallback;
    }
    double value = 0.0;
    const auto * end = text->data() + text->size();
    const auto [ptr, ec] = std::from_chars(text->data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
      diag_.add("'" + qualified(key) + "' is not a finite number: '" + *text + "'");
      return fallback;
    }
    return value;
  }

  std::uint64_t integer(const std::string & key, std::uint64_t fallback) const
  {
    const auto text = raw(key);
    if (!text) {
      return fallback;
    }
    std::uint64_t value = 0;
    const auto * end = text->data() + text->size();
    const auto [ptr, ec] = std::from_chars(text->data(), end, value);
    if (ec != std::errc{} || ptr != end) {
      diag_.add("'" + qualified(key) + "' is not a non-negative integer: '" + *text + "'");
      return fallback;
    }
    return value;
  }

  bool boolean(const std::string & key, bool fallback) const
  {
    const auto text = raw(key);
    if (!text) {
      return fallback;
    }
    std::string v = *text;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) {return std::tolower(c);});
    if (v == "true" || v == "yes" || v == "on" || v == "1") {
      return true;
    }
    if (v == "false" || v == "no" || v == "off" || v == "0") {
      return false;
    }
    diag_.add("'" + qualified(key) + "' is not a boolean: '" + *text + "'");
    return fallback;
  }

  std::vector<double> number_list(const std::string & key) const
  {
    std::vector<double> out;
    const auto text = raw(key);
    if (!text) {
      return out;
    }
    std::stringstream ss(*text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      double value = 0.0;
      const auto * end = item.data() + item.size();
      const auto [ptr, ec] = std::from_chars(item.data(), end, value);
      if (item.empty() || ec != std::errc{} || ptr != end) {
        diag_.add("'" + qualified(key) + "' has a non-numeric entry: '" + item + "'");
        return {};
      }
      out.push_back(value);
    }
    return out;
  }

  // Records a failed invariant against a key.
  void invalid(const std::string & key, const std::string & why) const
  {
    diag_.add("'" + qualified(key) + "' " + why);
  }

private:
  std::string name_;
  const pt::ptree * tree_;
  Diagnostics & diag_;
};

const pt::ptree * find_section(const pt::ptree & root, const std::string & name)
{
  const auto it = root.find(name);
  if (it == root.not_found()) {
    return nullptr;
  }
  return &it->second;
}

std::optional<LidarSpec> build_lidar(const Section & s)
{
  const std::string model = s.raw("model").value_or("vlp16");
  std::vector<double> elevations;
  if (model == "vlp16") {
    elevations = LidarSpec::vlp16().elevation_angles_deg();
  } else if (model == "vlp32c") {
    elevations = LidarSpec::vlp32c().elevation_angles_deg();
  } else if (model == "vlp32c_uniform") {
    elevations = LidarSpec::vlp32c_uniform().elevation_angles_deg();
  } else if (model != "custom") {
    s.invalid("model", "must be one of vlp16, vlp32c, vlp32c_uniform, custom (got '" + model + "')");
    return std::nullopt;
  }
  if (s.raw("elevation_angles")) {
    elevations = s.number_list("elevation_angles");
  } else if (model == "custom") {
    s.invalid("elevation_angles", "is required when model = custom");
    return std::nullopt;
  }
  if (elevations.empty()) {
    return std::nullopt;
  }
  for (std::size_t i = 1; i < elevations.size(); ++i) {
    if (!(elevations[i] > elevations[i - 1])) {
      s.invalid("elevation_angles", "must be strictly increasing");
      return std::nullopt;
    }
  }

  const double step = s.number("azimuth_step", 0.2);
  const double range = s.number("max_range", 100.0);
  const double sigma = s.number("range_noise_sigma", 0.0);
  const double height = s.number("height", 2.0);
  bool ok = true;
  if (!(step > 0.0) || step > 10.0) {
    s.invalid("azimuth_step", "must be in (0, 10]");
    ok = false;
  }
  if (!(range > 0.0)) {
    s.invalid("max_range", "must be > 0");
    ok = false;
  }
  if (!(sigma >= 0.0)) {
    s.invalid("range_noise_sigma", "must be >= 0");
    ok = false;
  }
  if (!(height > 0.0)) {
    s.invalid("height", "must be > 0");
    ok = false;
  }
  if (!ok) {
    return std::nullopt;
  }
  const LidarMount mount{{s.number("x", 0.0), s.number("y", 0.0), height}, s.number("yaw", 0.0)};
  try {
    return LidarSpec(std::move(elevations), step, range, mount, sigma);
  } catch (const ValidationError & e) {
    s.invalid("elevation_angles", e.what());
    return std::nullopt;
  }
}

std::optional<VehicleDims> build_vehicle(const Section & s)
{
  const double length = s.number("length", 4.89);
  const double width = s.number("width", 1.90);
  const double height = s.number("height", 1.72);
  bool ok = true;
  if (!(width > 0.0)) {
    s.invalid("width", "must be > 0");
    ok = false;
  }
  if (!(length >= width)) {
    s.invalid("length", "must be >= width");
    ok = false;
  }
  if (!(height > 0.0)) {
    s.invalid("height", "must be > 0");
    ok = false;
  }
  if (!ok) {
    return std::nullopt;
  }
  return VehicleDims(length, width, height);
}

LShapeConfig build_lshape(const Section & s)
{
  LShapeConfig cfg;
  cfg.angle_step_deg = s.number("angle_step", cfg.angle_step_deg);
  cfg.min_dist_clamp = s.number("min_dist_clamp", cfg.min_dist_clamp);
  cfg.min_points = s.integer("min_points", cfg.min_points);
  if (!(cfg.angle_step_deg > 0.0) || cfg.angle_step_deg > 15.0) {
    s.invalid("angle_step", "must be in (0, 15]");
  }
  if (!(cfg.min_dist_clamp > 0.0)) {
    s.invalid("min_dist_clamp", "must be > 0");
  }
  if (cfg.min_points < 3) {
    s.invalid("min_points", "must be >= 3");
  }
  return cfg;
}

}  // namespace

ColorScale default_scale(const std::string & metric)
{
  if (metric == "center_error") {return {0.0, 1.0};}
  if (metric == "bbox_area_error") {return {0.0, 5.0};}
  if (metric == "yaw_error") {return {0.0, 45.0};}
  if (metric == "point_count") {return {0.0, 2000.0};}
  throw ValidationError("unknown heat-map metric '" + metric + "'");
}

RunConfig parse_config(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file '" + path.string() + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_string(buffer.str(), path.string());
}

RunConfig parse_config_string(const std::string & text, const std::string & origin)
{
  pt::ptree root;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, root);
  } catch (const pt::ini_parser_error & e) {
    throw ValidationError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  Diagnostics diag;
  std::vector<std::string> missing;

  const std::set<std::string> fixed_sections = {
    "lidar", "vehicle", "boxfit", "perception", "evaluation", "sweep", "trajectory", "render"};
  for (const auto & [name, child] : root) {
    if (child.empty()) {
      if (!kRootKeys.contains(name)) {
        diag.add("unknown key '" + name + "'");
      }
      continue;
    }
    if (!fixed_sections.contains(name) && !name.starts_with("occluder.")) {
      diag.add("unknown section '[" + name + "]'");
    }
  }

  const Section top("", &root, diag);
  const Section lidar("lidar", find_section(root, "lidar"), diag);
  const Section vehicle("vehicle", find_section(root, "vehicle"), diag);
  const Section boxfit("boxfit", find_section(root, "boxfit"), diag);
  const Section perception("perception", find_section(root, "perception"), diag);
  const Section evaluation("evaluation", find_section(root, "evaluation"), diag);
  const Section render("render", find_section(root, "render"), diag);
  lidar.check_keys(kLidarKeys);
  vehicle.check_keys(kVehicleKeys);
  boxfit.check_keys(kBoxfitKeys);
  perception.check_keys(kPerceptionKeys);
  evaluation.check_keys(kEvaluationKeys);
  render.check_keys(render_keys());

  RunConfig cfg{RunMode::sweep, SweepConfig{}, std::nullopt, 0, {}};
  const auto mode = top.raw("mode");
  if (!mode) {
    missing.push_back("mode");
  } else if (*mode == "sweep") {
    cfg.mode = RunMode::sweep;
  } else if (*mode == "trajectory") {
    cfg.mode = RunMode::trajectory;
  } else {
    top.invalid("mode", "must be 'sweep' or 'trajectory' (got '" + *mode + "')");
  }
  cfg.seed = top.integer("seed", 0);
  if (const auto out = top.raw("output_dir")) {
    cfg.output_dir = std::filesystem::path(*out);
  }

  const auto lidar_spec = build_lidar(lidar);
  const auto dims = build_vehicle(vehicle);
  const LShapeConfig lshape = build_lshape(boxfit);
  const double tolerance = evaluation.number("off_by_90_tolerance", 15.0);
  if (!(tolerance > 0.0) || tolerance > 45.0) {
    evaluation.invalid("off_by_90_tolerance", "must be in (0, 45]");
  }

  for (const char * metric : kHeatmapMetrics) {
    const std::string m(metric);
    ColorScale scale = default_scale(m);
    scale.min = render.number(m + "_min", scale.min);
    scale.max = render.number(m + "_max", scale.max);
    if (!(scale.max > scale.min)) {
      render.invalid(m + "_max", "must be greater than " + m + "_min");
    }
    cfg.scales[m] = scale;
  }

  const auto * sweep_tree = find_section(root, "sweep");
  const auto * traj_tree = find_section(root, "trajectory");
  const bool is_sweep = mode && *mode == "sweep";
  const bool is_traj = mode && *mode == "trajectory";

  if (is_sweep) {
    if (traj_tree != nullptr) {
      diag.add("section '[trajectory]' is not allowed when mode = sweep");
    }
    for (const auto & [name, child] : root) {
      if (name.starts_with("occluder.")) {
        diag.add("section '[" + name + "]' is not allowed when mode = sweep");
      }
    }
    if (perception.raw("background_epsilon")) {
      perception.invalid("background_epsilon", "is only used when mode = trajectory");
    }
    const Section sweep("sweep", sweep_tree, diag);
    sweep.check_keys(kSweepKeys);
    if (sweep_tree == nullptr) {
      missing.push_back("[sweep]");
    } else {
      sweep.require(kSweepRequired, missing);
    }
    SweepConfig sc;
    sc.distance_min = sweep.number("distance_min", sc.distance_min);
    sc.distance_max = sweep.number("distance_max", sc.distance_max);
    sc.distance_step = sweep.number("distance_step", sc.distance_step);
    sc.yaw_step_deg = sweep.number("yaw_step", sc.yaw_step_deg);
    sc.correction_enabled = sweep.boolean("correction", false);
    sc.z_threshold = perception.number("z_threshold", sc.z_threshold);
    sc.lshape = lshape;
    sc.off_by_90_tolerance_deg = tolerance;
    sc.seed = cfg.seed;
    if (!(sc.distance_min >= 0.0)) {
      sweep.invalid("distance_min", "must be >= 0");
    }
    if (!(sc.distance_step > 0.0)) {
      sweep.invalid("distance_step", "must be > 0");
    }
    if (!(sc.distance_max >= sc.distance_min)) {
      sweep.invalid("distance_max", "must be >= distance_min");
    }
    if (!(sc.yaw_step_deg > 0.0)) {
      sweep.invalid("yaw_step", "must be > 0");
    } else {
      const double turns = 360.0 / sc.yaw_step_deg;
      if (std::abs(turns - std::round(turns)) > 1e-9 * turns) {
        sweep.invalid("yaw_step", "must divide 360 evenly");
      }
    }
    if (!(sc.z_threshold >= 0.0)) {
      perception.invalid("z_threshold", "must be >= 0");
    }
    if (lidar_spec) {
      sc.lidar = *lidar_spec;
    }
    if (dims) {
      sc.vehicle = *dims;
    }
    cfg.experiment = std::move(sc);
  } else if (is_traj) {
    if (sweep_tree != nullptr) {
      diag.add("section '[sweep]' is not allowed when mode = trajectory");
    }
    if (perception.raw("z_threshold")) {
      perception.invalid("z_threshold", "is only used when mode = sweep");
    }
    for (const char * key : {"x", "y", "yaw"}) {
      if (lidar.raw(key)) {
        lidar.invalid(key, "is derived from the road when mode = trajectory; use "
          "trajectory.lidar_offset");
      }
    }
    const Section traj("trajectory", traj_tree, diag);
    traj.check_keys(kTrajectoryKeys);
    if (traj_tree == nullptr) {
      missing.push_back("[trajectory]");
    } else {
      traj.require(kTrajectoryRequired, missing);
    }
    TrajectoryConfig tc;
    tc.range_min = traj.number("range_min", tc.range_min);
    tc.range_max = traj.number("range_max", tc.range_max);
    tc.sample_step = traj.number("sample_step", tc.sample_step);
    tc.lidar_offset = traj.number("lidar_offset", tc.lidar_offset);
    tc.road_origin = {traj.number("road_x", 0.0), traj.number("road_y", 0.0)};
    tc.road_heading_deg = traj.number("road_heading", 0.0);
    tc.background_epsilon = perception.number("background_epsilon", tc.background_epsilon);
    tc.lshape = lshape;
    tc.off_by_90_tolerance_deg = tolerance;
    tc.seed = cfg.seed;
    if (!(tc.sample_step > 0.0)) {
      traj.invalid("sample_step", "must be > 0");
    }
    if (!(tc.range_max >= tc.range_min)) {
      traj.invalid("range_max", "must be >= range_min");
    }
    if (!(tc.background_epsilon > 0.0)) {
      perception.invalid("background_epsilon", "must be > 0");
    }
    for (const auto & [name, child] : root) {
      if (!name.starts_with("occluder.")) {
        continue;
      }
      const Section occ(name, &child, diag);
      occ.check_keys(kOccluderKeys);
      occ.require(kOccluderRequired, missing);
      Box3 box;
      box.center = {occ.number("x", 0.0), occ.number("y", 0.0)};
      box.length = occ.number("length", 1.0);
      box.width = occ.number("width", 1.0);
      box.height = occ.number("height", 1.0);
      box.yaw_deg = occ.number("yaw", 0.0);
      box.z_min = occ.number("z_min", 0.0);
      for (const auto & [key, value] :
        {std::pair{"length", box.length}, std::pair{"width", box.width},
          std::pair{"height", box.height}})
      {
        if (!(value > 0.0)) {
          occ.invalid(key, "must be > 0");
        }
      }
      tc.occluders.push_back(box);
    }
    if (lidar_spec) {
      tc.lidar = *lidar_spec;
    }
    if (dims) {
      tc.vehicle = *dims;
    }
    cfg.experiment = std::move(tc);
  }

  if (!missing.empty()) {
    std::string list;
    for (const auto & m : missing) {
      list += (list.empty() ? "" : ", ") + m;
    }
    diag.add("missing required keys: " + list);
  }
  if (!diag.empty()) {
    diag.raise(origin);
  }
  return cfg;
}

}  // namespace rsloc
