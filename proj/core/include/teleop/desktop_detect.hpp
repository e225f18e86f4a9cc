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

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "teleop/geometry.hpp"
#include "teleop/point_cloud.hpp"
#include "teleop/scene.hpp"

namespace teleop {

/// A plane normal.p = offset with the indices of the cloud points that
/// support it. Normals are canonicalized to point up (+z).
struct PlaneModel {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double offset = 0.0;
  std::vector<std::size_t> inlier_indices;

  double distance(const Eigen::Vector3d& p) const { return normal.dot(p) - offset; }
};

struct DesktopDetectParams {
  double dist_threshold = 0.01;
  std::size_t min_inliers = 500;
  std::size_t max_planes = 4;
  int ransac_iterations = 1000;
  double cluster_radius = 0.05;
  double cell = 0.02;
  std::uint64_t seed = 0;
};

/// Iterative RANSAC: fit the best plane among the remaining points, remove
/// its inliers, repeat until no plane reaches `min_inliers` or `max_planes`
/// were found. Result is ordered by descending inlier count.
std::vector<PlaneModel> segment_planes(const PointCloud& cloud, double dist_threshold, std::size_t min_inliers,
                                       std::size_t max_planes, std::mt19937_64& rng, int iterations = 1000);

/// Euclidean clustering of the plane's inliers; returns the sorted indices
/// of the largest cluster. Equal-size clusters are broken by the lowest
/// point index they contain.
std::vector<std::size_t> remove_scatter(const PlaneModel& plane, const PointCloud& cloud, double cluster_radius);

/// Outer contour of the occupancy grid of the projected points, in plane
/// coordinates, counter-clockwise. Throws GeometryError("degenerate
/// surface") for fewer than three or collinear points.
Polygon2 extract_boundary(const PointCloud& cloud, std::span<const std::size_t> indices, const PlaneModel& plane,
                          double cell);

/// Ear-clipping triangulation of a simple polygon.
DesktopMesh make_mesh(std::span<const Vec2> boundary, const Eigen::Vector3d& normal, double offset);
DesktopMesh make_mesh(std::span<const Vec2> boundary, const PlaneModel& plane);

/// Whole pipeline on the largest plane. Throws GeometryError("no plane
/// found") when segmentation finds nothing.
DesktopMesh detect_desktop(const PointCloud& cloud, const DesktopDetectParams& params = {});

}  // namespace teleop
