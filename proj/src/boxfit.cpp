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

#include "rsloc/boxfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace rsloc
{
namespace
{

constexpr double kCollinearTolerance = 1e-9;

struct Extents
{
  double min1, max1, min2, max2;
};

Extents project_extents(std::span<const Vec2> points, double c, double s)
{
  Extents e{
    std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
    std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto & p : points) {
    const double a = p.x * c + p.y * s;
    const double b = -p.x * s + p.y * c;
    e.min1 = std::min(e.min1, a);
    e.max1 = std::max(e.max1, a);
    e.min2 = std::min(e.min2, b);
    e.max2 = std::max(e.max2, b);
  }
  return e;
}

double score_at(std::span<const Vec2> points, double c, double s, double clamp)
{
  const Extents e = project_extents(points, c, s);
  double score = 0.0;
  for (const auto & p : points) {
    const double a = p.x * c + p.y * s;
    const double b = -p.x * s + p.y * c;
    const double d1 = std::min(e.max1 - a, a - e.min1);
    const double d2 = std::min(e.max2 - b, b - e.min2);
    score += 1.0 / std::max(std::min(d1, d2), clamp);
  }
  return score;
}

bool collinear(std::span<const Vec2> points)
{
  const Vec2 origin = points.front();
  Vec2 far = origin;
  double far_dist = 0.0;
  for (const auto & p : points) {
    const double d = distance(p, origin);
    if (d > far_dist) {
      far_dist = d;
      far = p;
    }
  }
  if (far_dist <= kCollinearTolerance) {
    return true;
  }
  const Vec2 dir = (far - origin) / far_dist;
  return std::all_of(points.begin(), points.end(), [&](const Vec2 & p) {
      return std::abs(cross(dir, p - origin)) <= kCollinearTolerance;
    });
}

}  // namespace

void LShapeConfig::validate() const
{
  if (!(angle_step_deg > 0.0) || angle_step_deg > 15.0) {
    throw ValidationError("LShapeConfig: angle_step must be in (0, 15]");
  }
  if (!(min_dist_clamp > 0.0)) {
    throw ValidationError("LShapeConfig: min_dist_clamp must be > 0");
  }
  if (min_points < 3) {
    throw ValidationError("LShapeConfig: min_points must be >= 3");
  }
}

double closeness_score(std::span<const Vec2> points, double theta_deg, double min_dist_clamp)
{
  if (points.empty()) {
    return 0.0;
  }
  const double t = deg_to_rad(theta_deg);
  return score_at(points, std::cos(t), std::sin(t), min_dist_clamp);
}

Obb2D lshape_fit(std::span<const Vec2> points, const LShapeConfig & config)
{
  config.validate();
  if (points.size() < config.min_points) {
    throw TooFewPointsError(
            "lshape_fit: " + std::to_string(points.size()) + " points, need at least " +
            std::to_string(config.min_points));
  }
  if (collinear(points)) {
    throw DegenerateInputError("lshape_fit: points are collinear");
  }

  double best_score = -1.0;
  double best_theta = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double theta = static_cast<double>(k) * config.angle_step_deg;
    if (theta >= 90.0) {
      break;
    }
    const double t = deg_to_rad(theta);
    const double score = score_at(points, std::cos(t), std::sin(t), config.min_dist_clamp);
    if (score > best_score) {
      best_score = score;
      best_theta = theta;
    }
  }

  const double t = deg_to_rad(best_theta);
  const double c = std::cos(t);
  const double s = std::sin(t);
  const Extents e = project_extents(points, c, s);
  const auto corner = [c, s](double a, double b) {
      return Vec2{a * c - b * s, a * s + b * c};
    };
  return Obb2D::from_corners(
    {corner(e.min1, e.min2), corner(e.max1, e.min2), corner(e.max1, e.max2),
      corner(e.min1, e.max2)});
}

CorrectedEstimate size_correct(const Obb2D & box, const VehicleDims & dims, Vec2 sensor_xy)
{
  const auto & corners = box.corners();
  std::size_t nearest = 0;
  double nearest_dist = distance(corners[0], sensor_xy);
  for (std::size_t i = 1; i < 4; ++i) {
    const double d = distance(corners[i], sensor_xy);
    if (d < nearest_dist) {
      nearest_dist = d;
      nearest = i;
    }
  }

  const Vec2 anchor = corners[nearest];
  const Vec2 left = corners[(nearest + 3) % 4];
  const Vec2 right = corners[(nearest + 1) % 4];
  const double left_len = distance(left, anchor);
  const double right_len = distance(right, anchor);
  if (!(left_len > 0.0) || !(right_len > 0.0)) {
    throw DegenerateInputError("size_correct: fitted box has a zero-length edge");
  }
  const Vec2 l_dir = (left - anchor) / left_len;
  const Vec2 r_dir = (right - anchor) / right_len;

  Vec2 center;
  if (left_len < right_len) {
    center = anchor + (l_dir * dims.width() + r_dir * dims.length()) / 2.0;
  } else {
    center = anchor + (r_dir * dims.width() + l_dir * dims.length()) / 2.0;
  }

  const bool suspect =
    std::abs(box.long_edge() - dims.width()) < std::abs(box.long_edge() - dims.length());
  return {center, box.yaw_deg(), anchor, suspect};
}

}  // namespace rsloc
