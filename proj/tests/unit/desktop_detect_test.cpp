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

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "synthetic.hpp"
#include "teleop/desktop_detect.hpp"
#include "teleop/error.hpp"
#include "teleop/point_cloud.hpp"

namespace teleop {
namespace {

double angle_deg(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return std::acos(std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0)) * 180.0 / M_PI;
}

double mesh_area(const DesktopMesh& mesh) {
  double area = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec2 a = mesh.boundary[t[0]], b = mesh.boundary[t[1]], c = mesh.boundary[t[2]];
    area += 0.5 * std::abs(cross2(b - a, c - a));
  }
  return area;
}

TEST(DesktopDetect, RecoversHorizontalTabletop) {
  const auto table = synth::make_tabletop({});
  const DesktopMesh mesh = detect_desktop(table.cloud);
  EXPECT_LT(angle_deg(mesh.normal, table.normal), 1.0);
  EXPECT_NEAR(mesh.offset, table.offset, 0.005);
  EXPECT_NEAR(mesh.triangulated_area(), table.area, 0.05 * table.area);
  EXPECT_NEAR(polygon_area(mesh.boundary), table.area, 0.05 * table.area);
}

TEST(DesktopDetect, RecoversTiltedTabletopWithFloor) {
  synth::TabletopParams cfg;
  cfg.normal = Eigen::Vector3d(0.05, -0.08, 1.0);
  cfg.offset = 0.6;
  cfg.floor = true;
  cfg.seed = 9;
  const auto table = synth::make_tabletop(cfg);
  const DesktopMesh mesh = detect_desktop(table.cloud);
  EXPECT_LT(angle_deg(mesh.normal, table.normal), 1.0);
  EXPECT_NEAR(mesh.offset, table.offset, 0.005);
  EXPECT_NEAR(mesh.triangulated_area(), table.area, 0.05 * table.area);
}

TEST(DesktopDetect, ConcaveTableKeepsItsNotch) {
  synth::TabletopParams cfg;
  cfg.l_shape = true;
  cfg.seed = 4;
  const auto table = synth::make_tabletop(cfg);
  const DesktopMesh mesh = detect_desktop(table.cloud);
  EXPECT_NEAR(polygon_area(mesh.boundary), table.area, 0.05 * table.area);
  EXPECT_LT(polygon_area(mesh.boundary), 0.9 * polygon_area(convex_hull(mesh.boundary)));
  EXPECT_FALSE(mesh.covers(-0.45, 0.3));
  EXPECT_TRUE(mesh.covers(0.45, 0.3));
  EXPECT_TRUE(mesh.covers(-0.45, -0.3));
}

TEST(DesktopDetect, DeterministicForSeed) {
  synth::TabletopParams cfg;
  cfg.points = 10000;
  const auto table = synth::make_tabletop(cfg);
  DesktopDetectParams p;
  p.seed = 42;
  const DesktopMesh a = detect_desktop(table.cloud, p);
  const DesktopMesh b = detect_desktop(table.cloud, p);
  EXPECT_EQ(a.boundary, b.boundary);
  EXPECT_EQ(a.normal, b.normal);
}

TEST(DesktopDetect, NoPlaneFound) {
  std::mt19937_64 rng(1);
  PointCloud cloud;
  for (int i = 0; i < 300; ++i) cloud.points.emplace_back(Eigen::Vector3d::Random());
  EXPECT_THROW(
      {
        try {
          detect_desktop(cloud);
        } catch (const GeometryError& e) {
          EXPECT_STREQ(e.what(), "no plane found");
          throw;
        }
      },
      GeometryError);
}

TEST(DesktopDetect, CollinearInliersAreDegenerate) {
  PointCloud cloud;
  for (int i = 0; i < 1000; ++i) cloud.points.emplace_back(i * 0.001, 0.0, 0.75);
  PlaneModel plane;
  plane.offset = 0.75;
  std::vector<std::size_t> idx(cloud.size());
  std::iota(idx.begin(), idx.end(), 0);
  EXPECT_THROW(
      {
        try {
          extract_boundary(cloud, idx, plane, 0.02);
        } catch (const GeometryError& e) {
          EXPECT_STREQ(e.what(), "degenerate surface");
          throw;
        }
      },
      GeometryError);
}

TEST(SegmentPlanes, FindsBothPlanesLargestFirst) {
  synth::TabletopParams cfg;
  cfg.floor = true;
  cfg.outlier_fraction = 0.05;
  cfg.points = 20000;
  const auto table = synth::make_tabletop(cfg);
  std::mt19937_64 rng(0);
  const auto planes = segment_planes(table.cloud, 0.01, 500, 4, rng);
  ASSERT_GE(planes.size(), 2u);
  EXPECT_GE(planes[0].inlier_indices.size(), planes[1].inlier_indices.size());
  EXPECT_NEAR(planes[0].offset, 0.75, 0.005);
  EXPECT_NEAR(planes[1].offset, 0.0, 0.005);
  for (const auto& p : planes) EXPECT_GT(p.normal.z(), 0.0);
}

// Connected components by O(n^2) breadth-first search.
std::vector<std::size_t> largest_cluster_oracle(const PointCloud& cloud, const std::vector<std::size_t>& idx,
                                                const PlaneModel& plane, double radius) {
  const std::size_t n = idx.size();
  std::vector<int> label(n, -1);
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    const int id = static_cast<int>(clusters.size());
    clusters.emplace_back();
    std::vector<std::size_t> stack{s};
    label[s] = id;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      clusters[id].push_back(idx[a]);
      for (std::size_t b = 0; b < n; ++b) {
        if (label[b] >= 0) continue;
        Eigen::Vector3d d = cloud.points[idx[a]] - cloud.points[idx[b]];
        d -= d.dot(plane.normal) * plane.normal;
        if (d.norm() <= radius) {
          label[b] = id;
          stack.push_back(b);
        }
      }
    }
  }
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  std::stable_sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return clusters.front();
}

TEST(RemoveScatter, MatchesBruteForceClustering) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    PointCloud cloud;
    // A few blobs of different sizes on the plane plus scattered points.
    for (int blob = 0; blob < 4; ++blob) {
      const Eigen::Vector3d c(test::uniform(rng, -1, 1), test::uniform(rng, -1, 1), 0.0);
      const int count = 40 + blob * 37 + static_cast<int>(seed);
      for (int i = 0; i < count; ++i) {
        cloud.points.emplace_back(c + Eigen::Vector3d(test::uniform(rng, -0.1, 0.1), test::uniform(rng, -0.1, 0.1),
                                                      test::uniform(rng, -0.005, 0.005)));
      }
    }
    for (int i = 0; i < 60; ++i) {
      cloud.points.emplace_back(test::uniform(rng, -1.5, 1.5), test::uniform(rng, -1.5, 1.5), 0.0);
    }
    PlaneModel plane;
    plane.inlier_indices.resize(cloud.size());
    std::iota(plane.inlier_indices.begin(), plane.inlier_indices.end(), 0);
    const auto kept = remove_scatter(plane, cloud, 0.05);
    EXPECT_EQ(kept, largest_cluster_oracle(cloud, plane.inlier_indices, plane, 0.05)) << "seed " << seed;
  }
}

TEST(Boundary, GridRectangleArea) {
  PointCloud cloud;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 60; ++j) cloud.points.emplace_back(i * 0.005, j * 0.005, 0.0);
  }
  std::vector<std::size_t> idx(cloud.size());
  std::iota(idx.begin(), idx.end(), 0);
  const Polygon2 b = extract_boundary(cloud, idx, PlaneModel{}, 0.02);
  EXPECT_TRUE(is_simple(b));
  EXPECT_GT(signed_area(b), 0.0);
  // Union of the occupied cells of a grid anchored at the minimum corner.
  int nx = 0, ny = 0;
  for (const auto& p : cloud.points) {
    nx = std::max(nx, static_cast<int>(std::floor(p.x() / 0.02)) + 1);
    ny = std::max(ny, static_cast<int>(std::floor(p.y() / 0.02)) + 1);
  }
  EXPECT_NEAR(polygon_area(b), nx * ny * 0.02 * 0.02, 1e-12);
  EXPECT_EQ(b.size(), 4u);
}

TEST(Triangulation, AreaEqualsPolygonArea) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Polygon2 poly = test::random_star(rng, 3 + trial % 30);
    const DesktopMesh mesh = make_mesh(poly, Eigen::Vector3d::UnitZ(), 0.0);
    EXPECT_EQ(mesh.triangles.size(), mesh.boundary.size() - 2);
    EXPECT_NEAR(mesh_area(mesh), polygon_area(poly), 1e-12);
  }
}

TEST(Triangulation, AcceptsClockwiseInput) {
  Polygon2 cw = test::rectangle(0, 0, 2, 1);
  std::reverse(cw.begin(), cw.end());
  const DesktopMesh mesh = make_mesh(cw, Eigen::Vector3d::UnitZ(), 0.0);
  EXPECT_NEAR(mesh_area(mesh), 2.0, 1e-12);
}

TEST(Triangulation, RejectsSelfIntersection) {
  const Polygon2 bowtie = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  EXPECT_THROW(make_mesh(bowtie, Eigen::Vector3d::UnitZ(), 0.0), GeometryError);
}

TEST(PointCloudIo, AsciiAndBinaryRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path();
  PointCloud cloud;
  for (int i = 0; i < 100; ++i) cloud.points.emplace_back(i * 0.25, -i * 0.5, 0.75);
  write_ascii_cloud(dir / "teleop_cloud.xyz", cloud);
  write_binary_cloud(dir / "teleop_cloud.pcl", cloud);
  const PointCloud a = read_point_cloud(dir / "teleop_cloud.xyz");
  const PointCloud b = read_point_cloud(dir / "teleop_cloud.pcl");
  ASSERT_EQ(a.size(), cloud.size());
  ASSERT_EQ(b.size(), cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    EXPECT_TRUE(a.points[i].isApprox(cloud.points[i], 1e-12));
    EXPECT_TRUE(b.points[i].isApprox(cloud.points[i], 1e-6));
  }
}

TEST(PointCloudIo, AsciiErrorsCarryLineNumbers) {
  try {
    parse_ascii_cloud("# header\n0 0 0\n1 2\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_ascii_cloud("0 0 nan\n"), ParseError);
  EXPECT_THROW(read_point_cloud("/nonexistent/cloud.xyz"), Error);
}

TEST(PointCloudIo, CheckedInCloudYieldsSceneDesktop) {
  const PointCloud cloud = read_point_cloud(test::data_dir() / "clouds" / "tabletop.pcl");
  DesktopDetectParams p;
  p.seed = 7;
  const DesktopMesh mesh = detect_desktop(cloud, p);
  EXPECT_LT(angle_deg(mesh.normal, Eigen::Vector3d::UnitZ()), 1.0);
  EXPECT_NEAR(mesh.offset, 0.0, 0.005);
  EXPECT_NEAR(polygon_area(mesh.boundary), 0.7 * 0.9, 0.05 * 0.63);
}

}  // namespace
}  // namespace teleop
