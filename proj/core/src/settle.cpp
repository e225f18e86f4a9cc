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

#include "teleop/settle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "teleop/error.hpp"

namespace teleop {

namespace {

constexpr double kMinOverlapArea = 1e-6;
constexpr double kSameHeight = 1e-6;

const Pose& collider_pose(const ObjectInstance& o, ColliderPoses which) {
  return which == ColliderPoses::Ghost ? o.ghost_pose : o.actual_pose;
}

Vec2 xy(const Eigen::Vector3d& p) { return {p.x(), p.y()}; }

}  // namespace

std::string to_string(const Support& support) {
  return support.kind == SupportKind::Desktop ? std::string("Desktop") : "OnObject(" + support.instance_id + ")";
}

bool support_check(const Pose& box_pose, std::span<const Vec2> footprint, double margin) {
  if (footprint.size() < 3) return false;
  return convex_inset_distance(xy(box_pose.position()), footprint) > margin;
}

ContactResult box_contact_height(const OrientedBox& falling, const SceneState& scene, const std::string& exclude_id,
                                 ColliderPoses colliders) {
  const Polygon2 foot = falling.footprint();
  ContactResult result;
  result.height = -std::numeric_limits<double>::infinity();
  for (const auto& corner : foot) {
    result.height = std::max(result.height, scene.desktop.height_at(corner.x(), corner.y()));
  }
  result.support = Support{SupportKind::Desktop, {}};
  const double desk_height = result.height;

  struct Candidate {
    std::string id;
    double top;
    Polygon2 overlap;
    double area;
  };
  std::vector<Candidate> candidates;
  for (const auto& o : scene.objects) {
    if (o.instance_id == exclude_id) continue;
    const OrientedBox other{collider_pose(o, colliders), scene.model_of(o).half_extents};
    Polygon2 overlap = clip_convex(foot, other.footprint());
    const double area = polygon_area(overlap);
    if (area <= kMinOverlapArea) continue;
    candidates.push_back({o.instance_id, other.max_z(), std::move(overlap), area});
  }

  double top = -std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) top = std::max(top, c.top);
  if (candidates.empty() || top <= desk_height + kSameHeight) return result;

  result.height = top;
  std::vector<Vec2> hull_points;
  double best_area = -1.0;
  for (const auto& c : candidates) {
    if (c.top < top - kSameHeight) continue;
    result.supporting_ids.push_back(c.id);
    hull_points.insert(hull_points.end(), c.overlap.begin(), c.overlap.end());
    if (c.area > best_area) {
      best_area = c.area;
      result.support = Support{SupportKind::OnObject, c.id};
    }
  }
  result.support_polygon = convex_hull(std::move(hull_points));
  return result;
}

SettleResult settle(const SceneState& scene, const std::string& instance_id, const Pose& release_pose,
                    const SettleOptions& options) {
  const ObjectInstance& instance = scene.object(instance_id);
  const Eigen::Vector3d half = scene.model_of(instance).half_extents;

  Pose pose = release_pose.upright();
  auto box_at = [&](const Pose& p) { return OrientedBox{p, half}; };

  if (!scene.desktop.covers(pose.position().x(), pose.position().y())) {
    throw SettleError("release outside workspace");
  }
  if (box_plane_penetration(box_at(pose), scene.desktop.normal, scene.desktop.offset) > kContactTolerance) {
    throw SettleError("invalid release pose");
  }
  for (const auto& o : scene.objects) {
    if (o.instance_id == instance_id) continue;
    const OrientedBox other{collider_pose(o, options.colliders), scene.model_of(o).half_extents};
    if (box_overlap_depth(box_at(pose), other) > kContactTolerance) throw SettleError("invalid release pose");
  }

  SettleResult result;
  double t = 0.0;
  result.trace.push_back({t, pose});

  Eigen::Vector2d slide_dir = Eigen::Vector2d::Zero();
  std::vector<std::string> sliding_on;
  for (int steps = 0;; ++steps) {
    const ContactResult contact = box_contact_height(box_at(pose), scene, instance_id, options.colliders);
    const double bottom = pose.position().z() - half.z();
    if (contact.height > bottom + kContactTolerance) {
      if (result.trace.size() <= 1) throw SettleError("invalid release pose");
      // A slide step ran into something taller; undo it and stop.
      result.trace.pop_back();
      pose = result.trace.back().pose;
      result.final_pose = pose;
      result.stable = false;
      return result;
    }
    const double drop = bottom - contact.height;
    if (drop > 0.0) t += std::sqrt(2.0 * drop / options.gravity);
    Eigen::Vector3d p = pose.position();
    p.z() = contact.height + half.z();
    pose.set_position(p);
    if (drop > 1e-12) result.trace.push_back({t, pose});
    result.support = contact.support;

    if (contact.support.kind == SupportKind::Desktop ||
        support_check(pose, contact.support_polygon, options.margin)) {
      result.final_pose = pose;
      result.stable = true;
      return result;
    }
    if (steps >= options.max_slide_steps) {
      result.final_pose = pose;
      result.stable = false;
      return result;
    }

    if (contact.supporting_ids != sliding_on) {
      sliding_on = contact.supporting_ids;
      const Vec2 away = xy(pose.position()) - polygon_centroid(contact.support_polygon);
      slide_dir = away.norm() > 1e-12 ? Vec2(away.normalized()) : Vec2(1.0, 0.0);
    }
    p = pose.position();
    p.head<2>() += options.slide_step * slide_dir;
    if (!scene.desktop.covers(p.x(), p.y())) throw SettleError("release outside workspace");
    pose.set_position(p);
    t += options.slide_step / options.slide_speed;
    result.trace.push_back({t, pose});
  }
}

}  // namespace teleop
