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

#include "teleop/desktop_detect.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "teleop/error.hpp"

namespace teleop {

namespace {

void canonicalize(Eigen::Vector3d& normal, double& offset) {
  // Prefer +z; for vertical planes fall back to the first non-zero component.
  double key = normal.z();
  if (std::abs(key) < 1e-12) key = std::abs(normal.y()) > 1e-12 ? normal.y() : normal.x();
  if (key < 0) {
    normal = -normal;
    offset = -offset;
  }
}

/// Total-least-squares plane through `indices`.
bool fit_plane(const PointCloud& cloud, std::span<const std::size_t> indices, Eigen::Vector3d& normal,
               double& offset) {
  if (indices.size() < 3) return false;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (std::size_t i : indices) mean += cloud.points[i];
  mean /= static_cast<double>(indices.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (std::size_t i : indices) {
    const Eigen::Vector3d d = cloud.points[i] - mean;
    cov += d * d.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  if (solver.info() != Eigen::Success) return false;
  normal = solver.eigenvectors().col(0).normalized();
  offset = normal.dot(mean);
  return normal.allFinite();
}

std::vector<std::size_t> collect_inliers(const PointCloud& cloud, std::span<const std::size_t> candidates,
                                         const Eigen::Vector3d& normal, double offset, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i : candidates) {
    if (std::abs(normal.dot(cloud.points[i]) - offset) <= threshold) out.push_back(i);
  }
  return out;
}

}  // namespace

std::vector<PlaneModel> segment_planes(const PointCloud& cloud, double dist_threshold, std::size_t min_inliers,
                                       std::size_t max_planes, std::mt19937_64& rng, int iterations) {
  if (!(dist_threshold > 0.0)) throw ValidationError("dist_threshold must be positive");
  if (min_inliers < 3) throw ValidationError("min_inliers must be at least 3");

  std::vector<PlaneModel> planes;
  std::vector<std::size_t> remaining(cloud.size());
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});

  while (planes.size() < max_planes && remaining.size() >= min_inliers) {
    std::uniform_int_distribution<std::size_t> pick(0, remaining.size() - 1);
    std::size_t best_count = 0;
    Eigen::Vector3d best_normal = Eigen::Vector3d::UnitZ();
    double best_offset = 0.0;

    for (int it = 0; it < iterations; ++it) {
      const std::size_t a = pick(rng);
      const std::size_t b = pick(rng);
      const std::size_t c = pick(rng);
      if (a == b || b == c || a == c) continue;
      const Eigen::Vector3d& pa = cloud.points[remaining[a]];
      const Eigen::Vector3d n = (cloud.points[remaining[b]] - pa).cross(cloud.points[remaining[c]] - pa);
      const double len = n.norm();
      if (len < 1e-12) continue;
      const Eigen::Vector3d normal = n / len;
      const double offset = normal.dot(pa);

      std::size_t count = 0;
      for (std::size_t idx : remaining) {
        if (std::abs(normal.dot(cloud.points[idx]) - offset) <= dist_threshold) ++count;
      }
      if (count > best_count) {
        best_count = count;
        best_normal = normal;
        best_offset = offset;
      }
    }
    if (best_count < min_inliers) break;

    PlaneModel plane;
    plane.normal = best_normal;
    plane.offset = best_offset;
    plane.inlier_indices = collect_inliers(cloud, remaining, best_normal, best_offset, dist_threshold);

    // Least-squares refits over the inlier band; the sampled plane only
    // seeds them.
    for (int pass = 0; pass < 2; ++pass) {
      Eigen::Vector3d refined_normal;
      double refined_offset = 0.0;
      if (!fit_plane(cloud, plane.inlier_indices, refined_normal, refined_offset)) break;
      auto refined = collect_inliers(cloud, remaining, refined_normal, refined_offset, dist_threshold);
      if (refined.size() < 3) break;
      plane.normal = refined_normal;
      plane.offset = refined_offset;
      plane.inlier_indices = std::move(refined);
    }
    canonicalize(plane.normal, plane.offset);

    std::vector<std::size_t> rest;
    rest.reserve(remaining.size() - plane.inlier_indices.size());
    std::set_difference(remaining.begin(), remaining.end(), plane.inlier_indices.begin(), plane.inlier_indices.end(),
                        std::back_inserter(rest));
    remaining.swap(rest);
    planes.push_back(std::move(plane));
  }

  std::stable_sort(planes.begin(), planes.end(), [](const PlaneModel& a, const PlaneModel& b) {
    return a.inlier_indices.size() > b.inlier_indices.size();
  });
  return planes;
}

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }

  std::vector<std::size_t> parent;
};

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.x) * 73856093u;
    h ^= static_cast<std::size_t>(k.y) * 19349663u;
    h ^= static_cast<std::size_t>(k.z) * 83492791u;
    return h;
  }
};

}  // namespace

std::vector<std::size_t> remove_scatter(const PlaneModel& plane, const PointCloud& cloud, double cluster_radius) {
  if (!(cluster_radius > 0.0)) throw ValidationError("cluster_radius must be positive");
  std::vector<std::size_t> idx = plane.inlier_indices;
  std::sort(idx.begin(), idx.end());
  if (idx.empty()) return {};

  auto key_of = [&](const Eigen::Vector3d& p) {
    return CellKey{static_cast<std::int64_t>(std::floor(p.x() / cluster_radius)),
                   static_cast<std::int64_t>(std::floor(p.y() / cluster_radius)),
                   static_cast<std::int64_t>(std::floor(p.z() / cluster_radius))};
  };
  std::unordered_map<CellKey, std::vector<std::size_t>, CellKeyHash> grid;
  for (std::size_t local = 0; local < idx.size(); ++local) grid[key_of(cloud.points[idx[local]])].push_back(local);

  DisjointSets sets(idx.size());
  const double r2 = cluster_radius * cluster_radius;
  for (std::size_t local = 0; local < idx.size(); ++local) {
    const Eigen::Vector3d& p = cloud.points[idx[local]];
    const CellKey k = key_of(p);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          const auto it = grid.find({k.x + dx, k.y + dy, k.z + dz});
          if (it == grid.end()) continue;
          for (std::size_t other : it->second) {
            if (other > local && (cloud.points[idx[other]] - p).squaredNorm() <= r2) sets.unite(local, other);
          }
        }
      }
    }
  }

  // Roots are the smallest local index of each set, and local order follows
  // point index order, so the first root reaching the maximum wins ties.
  std::vector<std::size_t> sizes(idx.size(), 0);
  for (std::size_t local = 0; local < idx.size(); ++local) ++sizes[sets.find(local)];
  std::size_t best_root = 0;
  for (std::size_t root = 0; root < idx.size(); ++root) {
    if (sizes[root] > sizes[best_root]) best_root = root;
  }
  std::vector<std::size_t> out;
  out.reserve(sizes[best_root]);
  for (std::size_t local = 0; local < idx.size(); ++local) {
    if (sets.find(local) == best_root) out.push_back(idx[local]);
  }
  return out;
}

namespace {

class Grid {
 public:
  Grid(int width, int height) : width_(width), height_(height), cells_(static_cast<std::size_t>(width * height), 0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  std::uint8_t at(int x, int y) const { return inside(x, y) ? cells_[index(x, y)] : 0; }
  void set(int x, int y, std::uint8_t v) { cells_[index(x, y)] = v; }

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }
  int width_, height_;
  std::vector<std::uint8_t> cells_;
};

constexpr std::array<std::array<int, 2>, 4> kFour = {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

/// Labels 4-connected components of `value` cells starting at (x, y).
std::vector<std::array<int, 2>> flood(const Grid& grid, int x, int y, std::uint8_t value, Grid& visited) {
  std::vector<std::array<int, 2>> members;
  std::vector<std::array<int, 2>> stack{{x, y}};
  visited.set(x, y, 1);
  while (!stack.empty()) {
    const auto [cx, cy] = stack.back();
    stack.pop_back();
    members.push_back({cx, cy});
    for (const auto& d : kFour) {
      const int nx = cx + d[0];
      const int ny = cy + d[1];
      if (grid.inside(nx, ny) && !visited.at(nx, ny) && grid.at(nx, ny) == value) {
        visited.set(nx, ny, 1);
        stack.push_back({nx, ny});
      }
    }
  }
  return members;
}

// Moore neighbourhood, counter-clockwise from east.
constexpr std::array<std::array<int, 2>, 8> kMoore = {
    {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

int moore_index(int dx, int dy) {
  for (int i = 0; i < 8; ++i) {
    if (kMoore[i][0] == dx && kMoore[i][1] == dy) return i;
  }
  return -1;
}

/// Moore-neighbour tracing of the outer boundary of the foreground of
/// `grid`. Stops when the first transition recurs.
std::vector<std::array<int, 2>> moore_trace(const Grid& grid) {
  int sx = -1, sy = -1;
  for (int y = 0; y < grid.height() && sx < 0; ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.at(x, y)) {
        sx = x;
        sy = y;
        break;
      }
    }
  }
  if (sx < 0) return {};

  using State = std::array<int, 4>;  // current x, y, backtrack x, y
  auto step = [&](const State& s, bool& moved) {
    const int cx = s[0], cy = s[1];
    const int k = moore_index(s[2] - cx, s[3] - cy);
    // Sweep clockwise from the backtrack so the region stays on the left.
    for (int j = 1; j <= 8; ++j) {
      const int idx = ((k - j) % 8 + 8) % 8;
      const int nx = cx + kMoore[idx][0];
      const int ny = cy + kMoore[idx][1];
      if (grid.at(nx, ny)) {
        const int prev = ((idx + 1) % 8);
        moved = true;
        return State{nx, ny, cx + kMoore[prev][0], cy + kMoore[prev][1]};
      }
    }
    moved = false;
    return s;
  };

  bool moved = false;
  const State first = step(State{sx, sy, sx - 1, sy}, moved);
  if (!moved) return {{sx, sy}};

  std::vector<std::array<int, 2>> contour;
  State cur = first;
  const std::size_t cap = 8u * static_cast<std::size_t>(grid.width() * grid.height()) + 16u;
  for (std::size_t guard = 0; guard < cap; ++guard) {
    contour.push_back({cur[0], cur[1]});
    cur = step(cur, moved);
    if (cur == first) return contour;
  }
  throw GeometryError("boundary tracing did not close");
}

}  // namespace

Polygon2 extract_boundary(const PointCloud& cloud, std::span<const std::size_t> indices, const PlaneModel& plane,
                          double cell) {
  if (!(cell > 0.0)) throw ValidationError("cell must be positive");
  if (indices.size() < 3) throw GeometryError("degenerate surface");

  DesktopMesh frame;
  frame.normal = plane.normal;
  frame.offset = plane.offset;
  std::vector<Vec2> uv;
  uv.reserve(indices.size());
  Vec2 mean = Vec2::Zero();
  for (std::size_t i : indices) {
    uv.push_back(frame.to_plane(cloud.points[i]));
    mean += uv.back();
  }
  mean /= static_cast<double>(uv.size());
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& p : uv) cov += (p - mean) * (p - mean).transpose();
  cov /= static_cast<double>(uv.size());
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  if (eig.eigenvalues()(0) <= 1e-18) throw GeometryError("degenerate surface");

  Vec2 lo = uv.front();
  for (const auto& p : uv) lo = lo.cwiseMin(p);
  std::vector<std::array<int, 2>> cells;
  cells.reserve(uv.size());
  int nx = 0, ny = 0;
  for (const auto& p : uv) {
    const int ix = static_cast<int>(std::floor((p.x() - lo.x()) / cell));
    const int iy = static_cast<int>(std::floor((p.y() - lo.y()) / cell));
    cells.push_back({ix, iy});
    nx = std::max(nx, ix + 1);
    ny = std::max(ny, iy + 1);
  }
  if (static_cast<double>(nx) * ny > 5e7) throw GeometryError("occupancy grid too large; increase cell");

  // One empty cell of padding on every side.
  Grid occupied(nx + 2, ny + 2);
  for (const auto& c : cells) occupied.set(c[0] + 1, c[1] + 1, 1);

  // Largest 4-connected component (raster order breaks ties).
  Grid visited(occupied.width(), occupied.height());
  std::vector<std::array<int, 2>> largest;
  for (int y = 0; y < occupied.height(); ++y) {
    for (int x = 0; x < occupied.width(); ++x) {
      if (occupied.at(x, y) && !visited.at(x, y)) {
        auto comp = flood(occupied, x, y, 1, visited);
        if (comp.size() > largest.size()) largest = std::move(comp);
      }
    }
  }
  Grid region(occupied.width(), occupied.height());
  for (const auto& c : largest) region.set(c[0], c[1], 1);

  // Fill holes: everything not reachable from the padding is inside.
  Grid outside(region.width(), region.height());
  flood(region, 0, 0, 0, outside);
  for (int y = 0; y < region.height(); ++y) {
    for (int x = 0; x < region.width(); ++x) {
      if (!outside.at(x, y)) region.set(x, y, 1);
    }
  }

  // Corner lattice: lattice point (x, y) is the lower-left corner of cell
  // (x, y) in padded coordinates; it is occupied when any adjacent cell is.
  Grid lattice(region.width() + 1, region.height() + 1);
  for (int y = 0; y < lattice.height(); ++y) {
    for (int x = 0; x < lattice.width(); ++x) {
      if (region.at(x - 1, y - 1) || region.at(x, y - 1) || region.at(x - 1, y) || region.at(x, y)) {
        lattice.set(x, y, 1);
      }
    }
  }

  const auto trace = moore_trace(lattice);
  Polygon2 polygon;
  polygon.reserve(trace.size());
  for (const auto& p : trace) {
    // Padded lattice x corresponds to grid corner x - 1.
    polygon.emplace_back(lo.x() + (p[0] - 1) * cell, lo.y() + (p[1] - 1) * cell);
  }
  polygon = remove_collinear(polygon);
  if (signed_area(polygon) < 0) std::reverse(polygon.begin(), polygon.end());
  if (polygon.size() < 3) throw GeometryError("degenerate surface");
  return polygon;
}

namespace {

bool in_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  // Boundary counts as inside: a reflex vertex on the candidate diagonal
  // must block the ear as well.
  const double eps = 1e-14;
  return cross2(b - a, p - a) >= -eps && cross2(c - b, p - b) >= -eps && cross2(a - c, p - c) >= -eps;
}

}  // namespace

DesktopMesh make_mesh(std::span<const Vec2> boundary, const Eigen::Vector3d& normal, double offset) {
  Polygon2 poly = remove_collinear(boundary);
  if (poly.size() < 3) throw GeometryError("polygon has fewer than 3 distinct vertices");
  if (!is_simple(poly)) throw GeometryError("self-intersecting polygon");
  if (signed_area(poly) < 0) std::reverse(poly.begin(), poly.end());

  DesktopMesh mesh;
  mesh.normal = normal.normalized();
  mesh.offset = offset;
  mesh.boundary = poly;

  std::vector<std::size_t> ring(poly.size());
  std::iota(ring.begin(), ring.end(), std::size_t{0});
  while (ring.size() > 3) {
    const std::size_t m = ring.size();
    bool clipped = false;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t ia = ring[(k + m - 1) % m];
      const std::size_t ib = ring[k];
      const std::size_t ic = ring[(k + 1) % m];
      const Vec2& a = poly[ia];
      const Vec2& b = poly[ib];
      const Vec2& c = poly[ic];
      if (cross2(b - a, c - b) <= 1e-15) continue;  // reflex or flat
      bool blocked = false;
      for (std::size_t other : ring) {
        if (other == ia || other == ib || other == ic) continue;
        if (in_triangle(poly[other], a, b, c)) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      mesh.triangles.push_back({ia, ib, ic});
      ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(k));
      clipped = true;
      break;
    }
    if (!clipped) throw GeometryError("ear clipping found no ear");
  }
  mesh.triangles.push_back({ring[0], ring[1], ring[2]});
  return mesh;
}

DesktopMesh make_mesh(std::span<const Vec2> boundary, const PlaneModel& plane) {
  return make_mesh(boundary, plane.normal, plane.offset);
}

DesktopMesh detect_desktop(const PointCloud& cloud, const DesktopDetectParams& params) {
  std::mt19937_64 rng(params.seed);
  const auto planes = segment_planes(cloud, params.dist_threshold, params.min_inliers, params.max_planes, rng,
                                     params.ransac_iterations);
  if (planes.empty()) throw GeometryError("no plane found");
  const PlaneModel& table = planes.front();
  const auto kept = remove_scatter(table, cloud, params.cluster_radius);
  const Polygon2 boundary = extract_boundary(cloud, kept, table, params.cell);
  return make_mesh(boundary, table);
}

}  // namespace teleop
