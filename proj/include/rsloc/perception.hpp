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

#ifndef RSLOC__PERCEPTION_HPP_
#define RSLOC__PERCEPTION_HPP_

#include <memory>
#include <optional>
#include <vector>

#include "rsloc/core.hpp"
#include "rsloc/lidar_sim.hpp"

namespace rsloc
{

/// Vehicle-free frame recorded once, indexed for exact nearest-neighbor lookup.
/// Immutable after construction; concurrent queries are safe.
class ReferenceFrame
{
public:
  explicit ReferenceFrame(PointCloud cloud);
  ~ReferenceFrame();
  ReferenceFrame(ReferenceFrame &&) noexcept;
  ReferenceFrame & operator=(ReferenceFrame &&) noexcept;

  const PointCloud & cloud() const {return cloud_;}
  bool empty() const {return cloud_.empty();}

  /// Squared distance to the closest reference point; nullopt when empty.
  std::optional<double> nearest_squared_distance(const Point3 & query) const;

private:
  struct Index;
  PointCloud cloud_;
  std::unique_ptr<Index> index_;
};

/// Keeps the points of `current` whose nearest reference point is farther than
/// `epsilon`. Order and tags are preserved. An empty reference keeps everything
/// and logs a warning.
PointCloud filter_background(
  const PointCloud & current, const ReferenceFrame & reference, double epsilon);

/// Keeps points strictly above `z_threshold`.
PointCloud filter_ground(const PointCloud & cloud, double z_threshold);

std::vector<Vec2> project_to_plane(const PointCloud & cloud);

}  // namespace rsloc

#endif  // RSLOC__PERCEPTION_HPP_
