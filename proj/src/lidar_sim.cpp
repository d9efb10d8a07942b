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

#include "rsloc/lidar_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace rsloc
{
namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

// Manufacturer vertical angle table for the 32-channel puck, sorted ascending.
constexpr std::array<double, 32> kVlp32cElevations = {
  -25.0, -15.639, -11.31, -8.843, -7.254, -6.148, -5.333, -4.667,
  -4.0, -3.667, -3.333, -3.0, -2.667, -2.333, -2.0, -1.667,
  -1.333, -1.0, -0.667, -0.333, 0.0, 0.333, 0.667, 1.0,
  1.333, 1.667, 2.333, 3.333, 4.667, 7.0, 10.333, 15.0};

// Box prepared for repeated ray tests.
struct PreparedBox
{
  Box3 box;
  SurfaceTag tag;
  double cos_yaw;
  double sin_yaw;
  double half_length;
  double half_width;
  // Horizontal azimuth window (radians) outside which no ray can reach the box.
  bool always_test;
  double center_azimuth;
  double half_angle;
};

PreparedBox prepare(const Box3 & box, SurfaceTag tag, const Point3 & origin)
{
  PreparedBox p{};
  p.box = box;
  p.tag = tag;
  p.cos_yaw = std::cos(deg_to_rad(box.yaw_deg));
  p.sin_yaw = std::sin(deg_to_rad(box.yaw_deg));
  p.half_length = 0.5 * box.length;
  p.half_width = 0.5 * box.width;
  const double radius = std::hypot(p.half_length, p.half_width);
  const double dx = box.center.x - origin.x;
  const double dy = box.center.y - origin.y;
  const double dist = std::hypot(dx, dy);
  p.always_test = dist <= radius * (1.0 + 1e-9) + 1e-9;
  if (!p.always_test) {
    p.center_azimuth = std::atan2(dy, dx);
    p.half_angle = std::asin(radius / dist) + 1e-9;
  }
  return p;
}

bool azimuth_may_hit(const PreparedBox & p, double azimuth_rad)
{
  if (p.always_test) {
    return true;
  }
  const double diff = std::remainder(azimuth_rad - p.center_azimuth, 2.0 * std::numbers::pi);
  return std::abs(diff) <= p.half_angle;
}

// Slab clip of one axis. Returns false if the ray misses the slab entirely.
bool clip_slab(double origin, double dir, double lo, double hi, double & t_enter, double & t_exit)
{
  if (dir == 0.0) {
    return origin >= lo && origin <= hi;
  }
  double t0 = (lo - origin) / dir;
  double t1 = (hi - origin) / dir;
  if (t0 > t1) {
    std::swap(t0, t1);
  }
  t_enter = std::max(t_enter, t0);
  t_exit = std::min(t_exit, t1);
  return t_enter <= t_exit;
}

// Entry distance of the ray into the box, or +inf. Rays starting inside the box
// are treated as misses.
double intersect_box(const PreparedBox & p, const Point3 & o, const Point3 & d)
{
  const double rx = o.x - p.box.center.x;
  const double ry = o.y - p.box.center.y;
  const double lox = p.cos_yaw * rx + p.sin_yaw * ry;
  const double loy = -p.sin_yaw * rx + p.cos_yaw * ry;
  const double ldx = p.cos_yaw * d.x + p.sin_yaw * d.y;
  const double ldy = -p.sin_yaw * d.x + p.cos_yaw * d.y;

  double t_enter = -kInf;
  double t_exit = kInf;
  if (!clip_slab(lox, ldx, -p.half_length, p.half_length, t_enter, t_exit) ||
    !clip_slab(loy, ldy, -p.half_width, p.half_width, t_enter, t_exit) ||
    !clip_slab(o.z, d.z, p.box.z_min, p.box.z_min + p.box.height, t_enter, t_exit))
  {
    return kInf;
  }
  if (t_enter <= 0.0) {
    return kInf;
  }
  return t_enter;
}

std::vector<PreparedBox> prepare_scene(const SceneModel & scene, const Point3 & origin)
{
  std::vector<PreparedBox> boxes;
  boxes.reserve(scene.occluders().size() + 1);
  if (scene.vehicle()) {
    boxes.push_back(prepare(scene.vehicle()->box(), kVehicleTag, origin));
  }
  for (std::size_t i = 0; i < scene.occluders().size(); ++i) {
    boxes.push_back(prepare(scene.occluders()[i], occluder_tag(i), origin));
  }
  return boxes;
}

std::optional<RayHit> nearest_hit(
  const std::vector<const PreparedBox *> & candidates, bool ground, const Point3 & o,
  const Point3 & d, double max_range)
{
  double best = kInf;
  SurfaceTag tag = kGroundTag;
  if (ground && d.z < 0.0 && o.z > 0.0) {
    best = -o.z / d.z;
  }
  for (const auto * box : candidates) {
    const double t = intersect_box(*box, o, d);
    if (t < best) {
      best = t;
      tag = box->tag;
    }
  }
  if (best > max_range) {
    return std::nullopt;
  }
  return RayHit{best, tag};
}

}  // namespace

LidarSpec::LidarSpec(
  std::vector<double> elevation_angles_deg, double azimuth_step_deg, double max_range,
  LidarMount mount, double range_noise_sigma)
: elevation_angles_deg_(std::move(elevation_angles_deg)),
  azimuth_step_deg_(azimuth_step_deg),
  max_range_(max_range),
  mount_(mount),
  range_noise_sigma_(range_noise_sigma)
{
  if (elevation_angles_deg_.empty()) {
    throw ValidationError("LidarSpec: elevation_angles must not be empty");
  }
  for (std::size_t i = 0; i < elevation_angles_deg_.size(); ++i) {
    const double e = elevation_angles_deg_[i];
    if (!std::isfinite(e) || e <= -90.0 || e >= 90.0) {
      throw ValidationError("LidarSpec: elevation_angles must lie in (-90, 90)");
    }
    if (i > 0 && !(e > elevation_angles_deg_[i - 1])) {
      throw ValidationError("LidarSpec: elevation_angles must be strictly increasing");
    }
  }
  if (!(azimuth_step_deg_ > 0.0) || azimuth_step_deg_ > 10.0) {
    throw ValidationError("LidarSpec: azimuth_step must be in (0, 10]");
  }
  if (!(max_range_ > 0.0) || !std::isfinite(max_range_)) {
    throw ValidationError("LidarSpec: max_range must be positive");
  }
  if (!(range_noise_sigma_ >= 0.0) || !std::isfinite(range_noise_sigma_)) {
    throw ValidationError("LidarSpec: range_noise_sigma must be >= 0");
  }
  if (!std::isfinite(mount_.position.x) || !std::isfinite(mount_.position.y) ||
    !std::isfinite(mount_.position.z) || !std::isfinite(mount_.yaw_deg))
  {
    throw ValidationError("LidarSpec: mount pose must be finite");
  }
}

LidarSpec LidarSpec::vlp16(LidarMount mount)
{
  std::vector<double> elevations;
  for (int i = 0; i < 16; ++i) {
    elevations.push_back(-15.0 + 2.0 * i);
  }
  return LidarSpec(std::move(elevations), 0.2, 100.0, mount);
}

LidarSpec LidarSpec::vlp32c(LidarMount mount)
{
  return LidarSpec({kVlp32cElevations.begin(), kVlp32cElevations.end()}, 0.2, 100.0, mount);
}

LidarSpec LidarSpec::vlp32c_uniform(LidarMount mount)
{
  std::vector<double> elevations;
  for (int i = 0; i < 32; ++i) {
    elevations.push_back(-25.0 + 40.0 * i / 31.0);
  }
  return LidarSpec(std::move(elevations), 0.2, 100.0, mount);
}

std::size_t LidarSpec::azimuth_count() const
{
  const auto n = static_cast<std::size_t>(std::floor(360.0 / azimuth_step_deg_ + 1e-9));
  // keep strictly below 360 so the first and last column never coincide
  return (static_cast<double>(n) * azimuth_step_deg_ >= 360.0 - 1e-9) ? n : n + 1;
}

LidarSpec LidarSpec::with_mount(LidarMount mount) const
{
  return LidarSpec(elevation_angles_deg_, azimuth_step_deg_, max_range_, mount, range_noise_sigma_);
}

LidarSpec LidarSpec::with_azimuth_step(double step_deg) const
{
  return LidarSpec(elevation_angles_deg_, step_deg, max_range_, mount_, range_noise_sigma_);
}

LidarSpec LidarSpec::with_max_range(double max_range) const
{
  return LidarSpec(elevation_angles_deg_, azimuth_step_deg_, max_range, mount_, range_noise_sigma_);
}

LidarSpec LidarSpec::with_noise(double sigma) const
{
  return LidarSpec(elevation_angles_deg_, azimuth_step_deg_, max_range_, mount_, sigma);
}

bool Box3::contains(const Point3 & p, double margin) const
{
  const double c = std::cos(deg_to_rad(yaw_deg));
  const double s = std::sin(deg_to_rad(yaw_deg));
  const double rx = p.x - center.x;
  const double ry = p.y - center.y;
  const double lx = c * rx + s * ry;
  const double ly = -s * rx + c * ry;
  return std::abs(lx) <= 0.5 * length + margin && std::abs(ly) <= 0.5 * width + margin &&
         p.z >= z_min - margin && p.z <= z_min + height + margin;
}

std::array<Vec2, 4> Box3::footprint() const
{
  const double c = std::cos(deg_to_rad(yaw_deg));
  const double s = std::sin(deg_to_rad(yaw_deg));
  const Vec2 along{c * 0.5 * length, s * 0.5 * length};
  const Vec2 across{-s * 0.5 * width, c * 0.5 * width};
  return {center - along - across, center + along - across, center + along + across,
    center - along + across};
}

Box3 VehiclePlacement::box() const
{
  return Box3{pose.position(), pose.yaw_deg(), dims.length(), dims.width(), dims.height(), 0.0};
}

SceneModel::SceneModel(
  std::optional<VehiclePlacement> vehicle, std::vector<Box3> occluders, bool ground_plane)
: vehicle_(std::move(vehicle)), occluders_(std::move(occluders)), ground_plane_(ground_plane)
{
  for (const auto & box : occluders_) {
    if (!(box.length > 0.0) || !(box.width > 0.0) || !(box.height > 0.0)) {
      throw ValidationError("SceneModel: occluder dimensions must be positive");
    }
    if (!std::isfinite(box.center.x) || !std::isfinite(box.center.y) ||
      !std::isfinite(box.yaw_deg) || !std::isfinite(box.z_min))
    {
      throw ValidationError("SceneModel: occluder pose must be finite");
    }
  }
}

SceneModel SceneModel::without_vehicle() const
{
  return SceneModel(std::nullopt, occluders_, ground_plane_);
}

Point3 beam_direction(double elevation_deg, double azimuth_deg)
{
  const double el = deg_to_rad(elevation_deg);
  const double az = deg_to_rad(azimuth_deg);
  return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

std::optional<RayHit> intersect_scene(
  const SceneModel & scene, const Point3 & origin, const Point3 & direction, double max_range)
{
  const auto boxes = prepare_scene(scene, origin);
  std::vector<const PreparedBox *> all;
  for (const auto & b : boxes) {
    all.push_back(&b);
  }
  return nearest_hit(all, scene.ground_plane(), origin, direction, max_range);
}

PointCloud cast_frame(const LidarSpec & spec, const SceneModel & scene, std::uint64_t seed)
{
  const Point3 origin = spec.mount().position;
  const auto boxes = prepare_scene(scene, origin);

  // Boxes wholly beyond max_range can never be hit.
  std::vector<const PreparedBox *> in_range;
  for (const auto & b : boxes) {
    const double dist = std::hypot(b.box.center.x - origin.x, b.box.center.y - origin.y);
    if (dist - std::hypot(b.half_length, b.half_width) <= spec.max_range()) {
      in_range.push_back(&b);
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double sigma = spec.range_noise_sigma();

  PointCloud cloud;
  cloud.frame_id = "lidar";
  const std::size_t columns = spec.azimuth_count();
  std::vector<const PreparedBox *> candidates;
  candidates.reserve(in_range.size());

  for (std::size_t col = 0; col < columns; ++col) {
    const double azimuth_deg =
      spec.mount().yaw_deg + static_cast<double>(col) * spec.azimuth_step_deg();
    const double azimuth_rad = deg_to_rad(azimuth_deg);
    candidates.clear();
    for (const auto * b : in_range) {
      if (azimuth_may_hit(*b, azimuth_rad)) {
        candidates.push_back(b);
      }
    }
    for (const double elevation : spec.elevation_angles_deg()) {
      const Point3 dir = beam_direction(elevation, azimuth_deg);
      const auto hit = nearest_hit(candidates, scene.ground_plane(), origin, dir, spec.max_range());
      if (!hit) {
        continue;
      }
      double range = hit->range;
      if (sigma > 0.0) {
        range += sigma * noise(rng);
        if (!(range > 0.0) || range > spec.max_range()) {
          continue;
        }
      }
      cloud.points.push_back(
        {origin.x + range * dir.x, origin.y + range * dir.y, origin.z + range * dir.z});
      cloud.tags.push_back(hit->tag);
    }
  }
  return cloud;
}

std::size_t vehicle_point_count(const PointCloud & cloud)
{
  return static_cast<std::size_t>(std::count(cloud.tags.begin(), cloud.tags.end(), kVehicleTag));
}

}  // namespace rsloc
