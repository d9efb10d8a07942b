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

#ifndef RSLOC__CORE_HPP_
#define RSLOC__CORE_HPP_

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rsloc
{

/// Base class for every error thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A value violated a documented invariant (bad config, bad argument).
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error
{
public:
  using Error::Error;
};

/// Geometric input has no well-defined answer (collinear points, zero-length edge).
class DegenerateInputError : public Error
{
public:
  using Error::Error;
};

/// Too few points to attempt a fit.
class TooFewPointsError : public Error
{
public:
  using Error::Error;
};

constexpr double deg_to_rad(double deg) {return deg * std::numbers::pi / 180.0;}
constexpr double rad_to_deg(double rad) {return rad * 180.0 / std::numbers::pi;}

struct Vec2
{
  double x{0.0};
  double y{0.0};

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) {return {a.x + b.x, a.y + b.y};}
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) {return {a.x - b.x, a.y - b.y};}
  friend constexpr Vec2 operator*(Vec2 a, double s) {return {a.x * s, a.y * s};}
  friend constexpr Vec2 operator*(double s, Vec2 a) {return {a.x * s, a.y * s};}
  friend constexpr Vec2 operator/(Vec2 a, double s) {return {a.x / s, a.y / s};}
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) {return a.x * b.x + a.y * b.y;}
inline double cross(Vec2 a, Vec2 b) {return a.x * b.y - a.y * b.x;}
inline double norm(Vec2 a) {return std::hypot(a.x, a.y);}
inline double distance(Vec2 a, Vec2 b) {return norm(a - b);}

/// World-frame point, meters. z up, ground plane at z = 0.
struct Point3
{
  double x{0.0};
  double y{0.0};
  double z{0.0};

  friend constexpr bool operator==(const Point3 &, const Point3 &) = default;
};

/// Maps any finite angle in degrees into [0, 360).
double normalize_yaw(double angle_deg);

/// Vehicle position and heading. The heading is kept in [0, 360).
class Pose2D
{
public:
  Pose2D() = default;
  Pose2D(double x, double y, double yaw_deg);

  double x() const {return x_;}
  double y() const {return y_;}
  Vec2 position() const {return {x_, y_};}
  double yaw_deg() const {return yaw_deg_;}

private:
  double x_{0.0};
  double y_{0.0};
  double yaw_deg_{0.0};
};

/// Physical vehicle size. `length` is the long footprint edge, `width` the short one.
class VehicleDims
{
public:
  VehicleDims(double length, double width, double height);

  double length() const {return length_;}
  double width() const {return width_;}
  double height() const {return height_;}
  double footprint_area() const {return length_ * width_;}

private:
  double length_;
  double width_;
  double height_;
};

/// Oriented 2D rectangle.
///
/// Corners are stored counter-clockwise. `yaw_deg` is the direction of the long
/// edge folded into [0, 180), so front and back are indistinguishable.
class Obb2D
{
public:
  /// Builds a rectangle from four corners in cyclic order (either winding).
  /// Clockwise input is reversed so the stored order is counter-clockwise,
  /// keeping the first corner in place. Throws DegenerateInputError for
  /// zero-length edges or corners that do not form a rectangle.
  static Obb2D from_corners(const std::array<Vec2, 4> & corners);

  const std::array<Vec2, 4> & corners() const {return corners_;}
  Vec2 center() const {return center_;}
  double yaw_deg() const {return yaw_deg_;}
  double long_edge() const {return long_edge_;}
  double short_edge() const {return short_edge_;}
  double area() const {return long_edge_ * short_edge_;}

private:
  Obb2D() = default;

  std::array<Vec2, 4> corners_{};
  Vec2 center_{};
  double yaw_deg_{0.0};
  double long_edge_{0.0};
  double short_edge_{0.0};
};

struct YawError
{
  double error_deg;  // in [0, 45]
  bool off_by_90;
};

/// Heading error modulo quarter turns.
///
/// The raw difference is folded onto the nearest multiple of 90 degrees; the
/// residual is the error. `off_by_90` is set when the nearest multiple is an odd
/// multiple of 90 and the residual is below `tolerance_deg`.
YawError yaw_error_mod90(double estimated_deg, double truth_deg, double tolerance_deg = 15.0);

}  // namespace rsloc

#endif  // RSLOC__CORE_HPP_
