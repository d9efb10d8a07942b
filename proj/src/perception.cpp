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

#include "rsloc/perception.hpp"

#include <cmath>
#include <iostream>
#include <iterator>
#include <utility>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

namespace rsloc
{
namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

struct ReferenceFrame::Index
{
  using BPoint = bg::model::point<double, 3, bg::cs::cartesian>;
  bgi::rtree<BPoint, bgi::rstar<16>> tree;
};

ReferenceFrame::ReferenceFrame(PointCloud cloud)
: cloud_(std::move(cloud)), index_(std::make_unique<Index>())
{
  std::vector<Index::BPoint> pts;
  pts.reserve(cloud_.points.size());
  for (const auto & p : cloud_.points) {
    pts.emplace_back(p.x, p.y, p.z);
  }
  // packing constructor
  index_->tree = decltype(index_->tree)(pts.begin(), pts.end());
}

ReferenceFrame::~ReferenceFrame() = default;
ReferenceFrame::ReferenceFrame(ReferenceFrame &&) noexcept = default;
ReferenceFrame & ReferenceFrame::operator=(ReferenceFrame &&) noexcept = default;

std::optional<double> ReferenceFrame::nearest_squared_distance(const Point3 & query) const
{
  if (empty()) {
    return std::nullopt;
  }
  std::vector<Index::BPoint> hit;
  hit.reserve(1);
  index_->tree.query(bgi::nearest(Index::BPoint(query.x, query.y, query.z), 1),
    std::back_inserter(hit));
  const double dx = hit.front().get<0>() - query.x;
  const double dy = hit.front().get<1>() - query.y;
  const double dz = hit.front().get<2>() - query.z;
  return dx * dx + dy * dy + dz * dz;
}

PointCloud filter_background(
  const PointCloud & current, const ReferenceFrame & reference, double epsilon)
{
  if (!(epsilon > 0.0)) {
    throw ValidationError("filter_background: epsilon must be > 0");
  }
  if (reference.empty()) {
    std::clog << "rsloc: warning: empty reference frame, every point treated as foreground\n";
    return current;
  }
  const bool tagged = current.has_tags();
  const double eps2 = epsilon * epsilon;
  PointCloud out;
  out.frame_id = current.frame_id;
  for (std::size_t i = 0; i < current.points.size(); ++i) {
    const auto d2 = reference.nearest_squared_distance(current.points[i]);
    if (*d2 > eps2) {
      out.points.push_back(current.points[i]);
      if (tagged) {
        out.tags.push_back(current.tags[i]);
      }
    }
  }
  return out;
}

PointCloud filter_ground(const PointCloud & cloud, double z_threshold)
{
  if (!(z_threshold >= 0.0)) {
    throw ValidationError("filter_ground: z_threshold must be >= 0");
  }
  const bool tagged = cloud.has_tags();
  PointCloud out;
  out.frame_id = cloud.frame_id;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    if (cloud.points[i].z > z_threshold) {
      out.points.push_back(cloud.points[i]);
      if (tagged) {
        out.tags.push_back(cloud.tags[i]);
      }
    }
  }
  return out;
}

std::vector<Vec2> project_to_plane(const PointCloud & cloud)
{
  std::vector<Vec2> out;
  out.reserve(cloud.points.size());
  for (const auto & p : cloud.points) {
    out.push_back({p.x, p.y});
  }
  return out;
}

}  // namespace rsloc
