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

#include <span>
#include <string>
#include <vector>

#include "teleop/geometry.hpp"
#include "teleop/pose.hpp"
#include "teleop/scene.hpp"

namespace teleop {

enum class SupportKind { Desktop, OnObject };

struct Support {
  SupportKind kind = SupportKind::Desktop;
  std::string instance_id;  // set for OnObject

  friend bool operator==(const Support&, const Support&) = default;
};

std::string to_string(const Support& support);

struct SettleTracePoint {
  double time = 0.0;
  Pose pose;
};

struct SettleResult {
  Pose final_pose;
  Support support;
  bool stable = false;
  std::vector<SettleTracePoint> trace;
};

/// Which pose of the other objects acts as obstacle.
enum class ColliderPoses { Actual, Ghost };

struct SettleOptions {
  double margin = 0.005;
  double slide_step = 0.005;
  double slide_speed = 0.05;  // m/s, only used for trace timestamps
  double gravity = 9.81;
  ColliderPoses colliders = ColliderPoses::Actual;
  int max_slide_steps = 2000;
};

struct ContactResult {
  double height = 0.0;
  Support support;
  /// Every object whose top lies at `height` under the footprint.
  std::vector<std::string> supporting_ids;
  /// Union hull of the footprint overlaps with the supporting tops; empty
  /// for the desktop.
  Polygon2 support_polygon;
};

/// True iff the ground projection of the box center lies strictly inside
/// `footprint` (convex, CCW) eroded by `margin`.
bool support_check(const Pose& box_pose, std::span<const Vec2> footprint, double margin);

/// Highest surface under the upright box's footprint: the desktop plane or
/// the top of another object whose footprint overlaps it by more than
/// 1e-6 m^2. `exclude_id` is never considered (the falling object itself).
ContactResult box_contact_height(const OrientedBox& falling, const SceneState& scene, const std::string& exclude_id,
                                 ColliderPoses colliders = ColliderPoses::Actual);

/// Quasi-static drop of `instance_id` released at `release_pose`: snap
/// upright (yaw kept), fall to the first contact, slide off unstable
/// supports in fixed steps until a stable rest is found.
/// Throws SettleError for releases outside the desktop region or
/// interpenetrating releases, NotFoundError for unknown ids.
SettleResult settle(const SceneState& scene, const std::string& instance_id, const Pose& release_pose,
                    const SettleOptions& options = {});

}  // namespace teleop
