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

#include "teleop/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace teleop {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += cross2(polygon[i], polygon[(i + 1) % n]);
  }
  return 0.5 * sum;
}

double polygon_area(std::span<const Vec2> polygon) { return std::abs(signed_area(polygon)); }

Vec2 polygon_centroid(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  if (n == 0) return Vec2::Zero();
  const double a = signed_area(polygon);
  if (std::abs(a) < 1e-15) {
    Vec2 mean = Vec2::Zero();
    for (const auto& p : polygon) mean += p;
    return mean / static_cast<double>(n);
  }
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = polygon[i];
    const Vec2& q = polygon[(i + 1) % n];
    c += (p + q) * cross2(p, q);
  }
  return c / (6.0 * a);
}

bool point_in_polygon(const Vec2& p, std::span<const Vec2> polygon) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x();
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

namespace {

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = cross2(b - a, c - a);
  const double scale = std::max({(b - a).norm(), (c - a).norm(), 1.0});
  if (std::abs(v) <= 1e-14 * scale * scale) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return p.x() <= std::max(a.x(), b.x()) && p.x() >= std::min(a.x(), b.x()) &&
         p.y() <= std::max(a.y(), b.y()) && p.y() >= std::min(a.y(), b.y());
}

bool segments_touch(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace

bool is_simple(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (polygon[i] == polygon[j]) return false;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      // Adjacent edges share a vertex by construction.
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_touch(a, b, polygon[j], polygon[(j + 1) % n])) return false;
    }
  }
  return true;
}

Polygon2 remove_collinear(std::span<const Vec2> polygon, double eps) {
  Polygon2 out(polygon.begin(), polygon.end());
  bool changed = true;
  while (changed && out.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < out.size() && out.size() >= 3; ++i) {
      const std::size_t n = out.size();
      const Vec2& prev = out[(i + n - 1) % n];
      const Vec2& cur = out[i];
      const Vec2& next = out[(i + 1) % n];
      const Vec2 d1 = cur - prev;
      const Vec2 d2 = next - cur;
      const bool duplicate = d1.norm() <= eps;
      const bool straight = std::abs(cross2(d1, d2)) <= eps * std::max(1.0, d1.norm() * d2.norm()) &&
                            d1.dot(d2) > 0.0;
      if (duplicate || straight) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        --i;
      }
    }
  }
  return out;
}

Polygon2 convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;
  Polygon2 hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, t = k + 1; i > 0; --i) {
    const Vec2& p = points[i - 1];
    while (k >= t && cross2(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

Polygon2 clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip) {
  Polygon2 output(subject.begin(), subject.end());
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !output.empty(); ++e) {
    const Vec2& a = clip[e];
    const Vec2& b = clip[(e + 1) % m];
    const Vec2 edge = b - a;
    Polygon2 input;
    input.swap(output);
    for (std::size_t i = 0; i < input.size(); ++i) {
      const Vec2& cur = input[i];
      const Vec2& prev = input[(i + input.size() - 1) % input.size()];
      const double dc = cross2(edge, cur - a);
      const double dp = cross2(edge, prev - a);
      if (dc >= 0) {
        if (dp < 0) output.push_back(prev + (cur - prev) * (dp / (dp - dc)));
        output.push_back(cur);
      } else if (dp >= 0) {
        output.push_back(prev + (cur - prev) * (dp / (dp - dc)));
      }
    }
  }
  return output;
}

double convex_inset_distance(const Vec2& p, std::span<const Vec2> convex) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = convex.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = convex[i];
    const Vec2& b = convex[(i + 1) % n];
    const Vec2 edge = b - a;
    const double len = edge.norm();
    if (len < 1e-15) continue;
    best = std::min(best, cross2(edge, p - a) / len);
  }
  return best;
}

std::array<Eigen::Vector3d, 8> OrientedBox::corners() const {
  std::array<Eigen::Vector3d, 8> out;
  std::size_t k = 0;
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      for (int sz : {-1, 1}) {
        const Eigen::Vector3d local(sx * half_extents.x(), sy * half_extents.y(), sz * half_extents.z());
        out[k++] = pose * local;
      }
    }
  }
  return out;
}

Polygon2 OrientedBox::footprint() const {
  std::vector<Vec2> pts;
  pts.reserve(8);
  for (const auto& c : corners()) pts.emplace_back(c.x(), c.y());
  return convex_hull(std::move(pts));
}

double OrientedBox::min_z() const {
  double z = std::numeric_limits<double>::infinity();
  for (const auto& c : corners()) z = std::min(z, c.z());
  return z;
}

double OrientedBox::max_z() const {
  double z = -std::numeric_limits<double>::infinity();
  for (const auto& c : corners()) z = std::max(z, c.z());
  return z;
}

namespace {

// Half-length of the box's projection onto `axis` (unit length).
double projection_radius(const Eigen::Matrix3d& rot, const Eigen::Vector3d& half, const Eigen::Vector3d& axis) {
  return half.x() * std::abs(axis.dot(rot.col(0))) + half.y() * std::abs(axis.dot(rot.col(1))) +
         half.z() * std::abs(axis.dot(rot.col(2)));
}

}  // namespace

double box_overlap_depth(const OrientedBox& a, const OrientedBox& b) {
  const Eigen::Matrix3d ra = a.pose.rotation();
  const Eigen::Matrix3d rb = b.pose.rotation();
  const Eigen::Vector3d delta = b.pose.position() - a.pose.position();

  std::array<Eigen::Vector3d, 15> axes;
  std::size_t n = 0;
  for (int i = 0; i < 3; ++i) axes[n++] = ra.col(i);
  for (int i = 0; i < 3; ++i) axes[n++] = rb.col(i);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Eigen::Vector3d c = ra.col(i).cross(rb.col(j));
      const double len = c.norm();
      // Parallel edge pairs add nothing beyond the face axes.
      if (len > 1e-9) axes[n++] = c / len;
    }
  }

  double depth = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Vector3d& axis = axes[k];
    const double overlap = projection_radius(ra, a.half_extents, axis) +
                           projection_radius(rb, b.half_extents, axis) - std::abs(delta.dot(axis));
    if (overlap <= 0.0) return 0.0;
    depth = std::min(depth, overlap);
  }
  return depth;
}

double box_plane_penetration(const OrientedBox& box, const Eigen::Vector3d& normal, double offset) {
  double depth = 0.0;
  for (const auto& c : box.corners()) depth = std::max(depth, offset - normal.dot(c));
  return depth;
}

}  // namespace teleop
