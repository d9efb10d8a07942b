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

#ifndef RSLOC__BOXFIT_HPP_
#define RSLOC__BOXFIT_HPP_

#include <cstddef>
#include <span>

#include "rsloc/core.hpp"

namespace rsloc
{

struct LShapeConfig
{
  double angle_step_deg{1.0};   // search granularity over [0, 90)
  double min_dist_clamp{0.01};  // floor of the closeness denominator, meters
  std::size_t min_points{3};

  void validate() const;
};

/// Closeness score of the rectangle oriented at `theta_deg`.
///
/// Each point contributes 1 / max(d, clamp), where d is its distance to the
/// nearest of the four extreme edges along (cos t, sin t) and (-sin t, cos t).
double closeness_score(std::span<const Vec2> points, double theta_deg, double min_dist_clamp);

/// L-shape rectangle fit.
///
/// Tries every theta in {0, step, 2 step, ...} below 90 degrees and keeps the
/// highest closeness score (smaller theta wins ties). The rectangle is spanned
/// by the projection extrema at that angle.
///
/// Throws TooFewPointsError below `config.min_points`, DegenerateInputError if
/// the points are collinear within 1e-9 m.
Obb2D lshape_fit(std::span<const Vec2> points, const LShapeConfig & config = {});

struct CorrectedEstimate
{
  Vec2 center;
  double yaw_deg;        // copied from the fitted box, [0, 180)
  Vec2 alignment_point;  // fitted corner nearest the sensor
  bool off_by_90_suspect;
};

/// Re-centers a fitted box using the known vehicle footprint.
///
/// The corner P nearest the sensor is trusted. From P the shorter fitted edge
/// is extended to the vehicle width and the longer one to the vehicle length;
/// the center of that rectangle is the corrected position. Only the center is
/// changed. On a nearest-corner tie the first corner in the stored
/// counter-clockwise order wins.
CorrectedEstimate size_correct(const Obb2D & box, const VehicleDims & dims, Vec2 sensor_xy);

}  // namespace rsloc

#endif  // RSLOC__BOXFIT_HPP_
