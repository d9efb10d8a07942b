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

#include "rsloc/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rsloc
{
namespace
{
constexpr double kRectTolerance = 1e-9;

double fold_180(double deg)
{
  double folded = std::fmod(deg, 180.0);
  if (folded < 0.0) {
    folded += 180.0;
  }
  // fmod of a tiny negative value can land exactly on 180 after the shift
  return folded >= 180.0 ? 0.0 : folded;
}
}  // namespace

double normalize_yaw(double angle_deg)
{
  if (!std::isfinite(angle_deg)) {
    throw ValidationError("normalize_yaw: angle must be finite");
  }
  double out = std::fmod(angle_deg, 360.0);
  if (out < 0.0) {
    out += 360.0;
  }
  return out >= 360.0 ? 0.0 : out;
}

Pose2D::Pose2D(double x, double y, double yaw_deg)
: x_(x), y_(y), yaw_deg_(normalize_yaw(yaw_deg))
{
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw ValidationError("Pose2D: position must be finite");
  }
}

VehicleDims::VehicleDims(double length, double width, double height)
: length_(length), width_(width), height_(height)
{
  if (!(width > 0.0) || !(width <= length) || !std::isfinite(length)) {
    throw ValidationError("VehicleDims: require 0 < width <= length");
  }
  if (!(height > 0.0) || !std::isfinite(height)) {
    throw ValidationError("VehicleDims: require height > 0");
  }
}

Obb2D Obb2D::from_corners(const std::array<Vec2, 4> & corners)
{
  for (const auto & c : corners) {
    if (!std::isfinite(c.x) || !std::isfinite(c.y)) {
      throw DegenerateInputError("Obb2D: non-finite corner");
    }
  }

  std::array<Vec2, 4> ordered = corners;
  double twice_area = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    twice_area += cross(ordered[i], ordered[(i + 1) % 4]);
  }
  if (twice_area < 0.0) {
    std::swap(ordered[1], ordered[3]);
  }

  std::array<Vec2, 4> edges{};
  std::array<double, 4> lengths{};
  for (std::size_t i = 0; i < 4; ++i) {
    edges[i] = ordered[(i + 1) % 4] - ordered[i];
    lengths[i] = norm(edges[i]);
    if (!(lengths[i] > kRectTolerance)) {
      throw DegenerateInputError("Obb2D: zero-length edge");
    }
  }
  for (std::size_t i = 0; i < 2; ++i) {
    if (std::abs(lengths[i] - lengths[i + 2]) > kRectTolerance ||
      norm(edges[i] + edges[i + 2]) > kRectTolerance)
    {
      throw DegenerateInputError("Obb2D: opposite edges differ");
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const auto & a = edges[i];
    const auto & b = edges[(i + 1) % 4];
    const double cos_angle = dot(a, b) / (lengths[i] * lengths[(i + 1) % 4]);
    if (std::abs(cos_angle) > kRectTolerance) {
      throw DegenerateInputError("Obb2D: adjacent edges are not orthogonal");
    }
  }

  Obb2D box;
  box.corners_ = ordered;
  box.center_ = (ordered[0] + ordered[1] + ordered[2] + ordered[3]) / 4.0;
  const double edge_a = 0.5 * (lengths[0] + lengths[2]);
  const double edge_b = 0.5 * (lengths[1] + lengths[3]);
  const Vec2 long_dir = edge_a >= edge_b ? edges[0] : edges[1];
  box.long_edge_ = std::max(edge_a, edge_b);
  box.short_edge_ = std::min(edge_a, edge_b);
  box.yaw_deg_ = fold_180(rad_to_deg(std::atan2(long_dir.y, long_dir.x)));
  return box;
}

YawError yaw_error_mod90(double estimated_deg, double truth_deg, double tolerance_deg)
{
  if (!std::isfinite(estimated_deg) || !std::isfinite(truth_deg)) {
    throw ValidationError("yaw_error_mod90: angles must be finite");
  }
  const double diff = normalize_yaw(estimated_deg - truth_deg);
  const double quarter_turns = std::round(diff / 90.0);
  const double residual = std::abs(diff - 90.0 * quarter_turns);
  const bool odd = static_cast<long>(quarter_turns) % 2 == 1;
  return {residual, odd && residual < tolerance_deg};
}

}  // namespace rsloc
