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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "teleop/geometry.hpp"
#include "teleop/joint_state.hpp"
#include "teleop/pose.hpp"

namespace teleop {

/// Robotiq 2F-85 stroke.
inline constexpr double kMaxGripperAperture = 0.085;
/// Allowed overlap between resting bodies.
inline constexpr double kContactTolerance = 1e-4;

/// Catalog entry: an object approximated by a box.
struct ObjectModel {
  std::string model_id;
  Eigen::Vector3d half_extents = Eigen::Vector3d::Zero();
  double mass = 0.0;
  /// Finger aperture when the object is gripped.
  double grasp_width = 0.0;
};

struct ObjectInstance {
  std::string instance_id;
  std::string model_id;
  Pose actual_pose;
  /// Where the operator wants the object; equals actual_pose until dragged.
  Pose ghost_pose;
  bool held = false;
  /// Object pose in the tool frame; meaningful only while held.
  Pose grasp_offset;
};

/// Reconstructed work surface. The boundary lives in plane coordinates
/// (see plane_frame()); triangles index into the boundary.
struct DesktopMesh {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double offset = 0.0;
  Polygon2 boundary;
  std::vector<std::array<std::size_t, 3>> triangles;

  struct Frame {
    Eigen::Vector3d origin;
    Eigen::Vector3d u;
    Eigen::Vector3d v;
  };
  Frame plane_frame() const;

  Vec2 to_plane(const Eigen::Vector3d& p) const;
  Eigen::Vector3d to_world(const Vec2& uv) const;
  /// Height of the plane at world (x, y).
  double height_at(double x, double y) const;
  /// True when the vertical line through (x, y) meets the meshed region.
  bool covers(double x, double y) const;
  double triangulated_area() const;
};

struct SceneState {
  std::map<std::string, ObjectModel> catalog;
  DesktopMesh desktop;
  std::vector<ObjectInstance> objects;
  JointState joints;
  double gripper_aperture = kMaxGripperAperture;
  double sim_time = 0.0;

  const ObjectInstance* find(const std::string& instance_id) const;
  ObjectInstance* find(const std::string& instance_id);
  /// Throws NotFoundError for unknown ids.
  const ObjectInstance& object(const std::string& instance_id) const;
  ObjectInstance& object(const std::string& instance_id);
  const ObjectModel& model_of(const ObjectInstance& instance) const;

  OrientedBox actual_box(const ObjectInstance& instance) const;
  OrientedBox ghost_box(const ObjectInstance& instance) const;
  const ObjectInstance* held_object() const;
};

using SceneSnapshot = std::shared_ptr<const SceneState>;

/// Checks every scene invariant; throws ValidationError naming the first
/// violation.
void validate_model(const ObjectModel& model);
void validate_scene(const SceneState& scene);

/// Moves only the ghost of `instance_id`. The quaternion is normalized.
void set_ghost_pose(SceneState& scene, const std::string& instance_id, const Pose& pose);
void reset_ghosts(SceneState& scene);
/// sim_time never decreases; earlier times throw ValidationError.
void advance_time(SceneState& scene, double time);
SceneSnapshot snapshot(const SceneState& scene);

}  // namespace teleop
