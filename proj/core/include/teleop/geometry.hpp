// Copyright 2026 The teleop Authors
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

#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "teleop/pose.hpp"

namespace teleop {

using Vec2 = Eigen::Vector2d;
using Polygon2 = std::vector<Vec2>;

// 2D polygon utilities. Polygons are vertex loops without a repeated
// closing vertex.

double signed_area(std::span<const Vec2> polygon);
double polygon_area(std::span<const Vec2> polygon);
Vec2 polygon_centroid(std::span<const Vec2> polygon);

/// Crossing-number test; points exactly on an edge may go either way.
bool point_in_polygon(const Vec2& p, std::span<const Vec2> polygon);

/// True when no two non-adjacent edges touch and no vertex repeats.
bool is_simple(std::span<const Vec2> polygon);

/// Drops repeated vertices and vertices lying on the segment between
/// their neighbours.
Polygon2 remove_collinear(std::span<const Vec2> polygon, double eps = 1e-12);

/// Andrew's monotone chain, counter-clockwise, collinear points dropped.
Polygon2 convex_hull(std::vector<Vec2> points);

/// Intersection of two convex counter-clockwise polygons.
Polygon2 clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip);

/// Signed distance from `p` to the boundary of a convex CCW polygon,
/// positive inside.
double convex_inset_distance(const Vec2& p, std::span<const Vec2> convex);

double cross2(const Vec2& a, const Vec2& b);

/// Box described by its center pose and half extents along body axes.
struct OrientedBox {
  Pose pose;
  Eigen::Vector3d half_extents;

  std::array<Eigen::Vector3d, 8> corners() const;
  /// Convex hull of the corners projected onto the world xy-plane.
  Polygon2 footprint() const;
  double min_z() const;
  double max_z() const;
};

/// Smallest translation distance that separates two boxes (separating-axis
/// theorem over the 15 candidate axes). Zero when they do not overlap.
double box_overlap_depth(const OrientedBox& a, const OrientedBox& b);

/// Depth of the deepest corner below the plane normal.p = offset, zero when
/// every corner is on or above it.
double box_plane_penetration(const OrientedBox& box, const Eigen::Vector3d& normal, double offset);

}  // namespace teleop
