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

#ifndef RSLOC__LIDAR_SIM_HPP_
#define RSLOC__LIDAR_SIM_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsloc/core.hpp"

namespace rsloc
{

/// Identifies the surface a simulated return came from.
/// 0 is the ground plane, 1 the vehicle, 2 + i occluder i.
using SurfaceTag = std::int32_t;
constexpr SurfaceTag kGroundTag = 0;
constexpr SurfaceTag kVehicleTag = 1;
constexpr SurfaceTag occluder_tag(std::size_t index) {return 2 + static_cast<SurfaceTag>(index);}

struct LidarMount
{
  Point3 position{0.0, 0.0, 2.0};
  double yaw_deg{0.0};
};

/// Spinning multi-channel LiDAR: one ray per (channel, azimuth step).
class LidarSpec
{
public:
  LidarSpec(
    std::vector<double> elevation_angles_deg, double azimuth_step_deg, double max_range,
    LidarMount mount, double range_noise_sigma = 0.0);

  /// 16 channels, -15 to +15 degrees in 2 degree steps.
  static LidarSpec vlp16(LidarMount mount = {});
  /// 32 channels using the manufacturer's non-uniform table (-25 to +15 degrees).
  static LidarSpec vlp32c(LidarMount mount = {});
  /// 32 channels spread uniformly over -25 to +15 degrees.
  static LidarSpec vlp32c_uniform(LidarMount mount = {});

  const std::vector<double> & elevation_angles_deg() const {return elevation_angles_deg_;}
  double azimuth_step_deg() const {return azimuth_step_deg_;}
  double max_range() const {return max_range_;}
  const LidarMount & mount() const {return mount_;}
  double range_noise_sigma() const {return range_noise_sigma_;}
  std::size_t azimuth_count() const;

  LidarSpec with_mount(LidarMount mount) const;
  LidarSpec with_azimuth_step(double step_deg) const;
  LidarSpec with_max_range(double max_range) const;
  LidarSpec with_noise(double sigma) const;

private:
  std::vector<double> elevation_angles_deg_;
  double azimuth_step_deg_;
  double max_range_;
  LidarMount mount_;
  double range_noise_sigma_;
};

/// Yawed box. The footprint is centered on `center`; the box spans z_min .. z_min + height.
/// `length` runs along the yaw direction.
struct Box3
{
  Vec2 center{};
  double yaw_deg{0.0};
  double length{1.0};
  double width{1.0};
  double height{1.0};
  double z_min{0.0};

  bool contains(const Point3 & p, double margin = 0.0) const;
  std::array<Vec2, 4> footprint() const;
};

struct VehiclePlacement
{
  VehicleDims dims;
  Pose2D pose;

  Box3 box() const;
};

class SceneModel
{
public:
  SceneModel(
    std::optional<VehiclePlacement> vehicle, std::vector<Box3> occluders,
    bool ground_plane = true);

  const std::optional<VehiclePlacement> & vehicle() const {return vehicle_;}
  const std::vector<Box3> & occluders() const {return occluders_;}
  bool ground_plane() const {return ground_plane_;}

  /// Same scene with the vehicle removed (what a reference frame sees).
  SceneModel without_vehicle() const;

private:
  std::optional<VehiclePlacement> vehicle_;
  std::vector<Box3> occluders_;
  bool ground_plane_;
};

/// Raw returns. `tags` is either empty (unknown provenance) or parallel to `points`.
struct PointCloud
{
  std::vector<Point3> points;
  std::vector<SurfaceTag> tags;
  std::string frame_id;

  std::size_t size() const {return points.size();}
  bool empty() const {return points.empty();}
  bool has_tags() const {return !tags.empty() && tags.size() == points.size();}
};

struct RayHit
{
  double range;
  SurfaceTag tag;
};

/// Nearest surface hit along a unit-direction ray within max_range, if any.
std::optional<RayHit> intersect_scene(
  const SceneModel & scene, const Point3 & origin, const Point3 & direction, double max_range);

/// Unit direction of the beam for the given channel elevation and azimuth
/// (azimuth measured in the world frame, counter-clockwise from +x).
Point3 beam_direction(double elevation_deg, double azimuth_deg);

/// Ray-casts one full revolution. Each (channel, azimuth) ray returns its first
/// hit within max_range; with noise enabled the range is perturbed by a zero-mean
/// Gaussian drawn from a generator seeded with `seed`.
PointCloud cast_frame(const LidarSpec & spec, const SceneModel & scene, std::uint64_t seed);

/// Number of returns whose first hit was the vehicle.
std::size_t vehicle_point_count(const PointCloud & cloud);

}  // namespace rsloc

#endif  // RSLOC__LIDAR_SIM_HPP_
