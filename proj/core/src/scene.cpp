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

#include "teleop/scene.hpp"

#include <cmath>
#include <set>

#include "teleop/error.hpp"

namespace teleop {

DesktopMesh::Frame DesktopMesh::plane_frame() const {
  Frame f;
  f.origin = normal * offset;
  const Eigen::Vector3d ref = std::abs(normal.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  f.u = (ref - ref.dot(normal) * normal).normalized();
  f.v = normal.cross(f.u);
  return f;
}

Vec2 DesktopMesh::to_plane(const Eigen::Vector3d& p) const {
  const Frame f = plane_frame();
  const Eigen::Vector3d d = p - f.origin;
  return {d.dot(f.u), d.dot(f.v)};
}

Eigen::Vector3d DesktopMesh::to_world(const Vec2& uv) const {
  const Frame f = plane_frame();
  return f.origin + uv.x() * f.u + uv.y() * f.v;
}

double DesktopMesh::height_at(double x, double y) const {
  if (std::abs(normal.z()) < 1e-9) return -std::numeric_limits<double>::infinity();
  return (offset - normal.x() * x - normal.y() * y) / normal.z();
}

bool DesktopMesh::covers(double x, double y) const {
  if (boundary.size() < 3) return false;
  const double z = height_at(x, y);
  if (!std::isfinite(z)) return false;
  return point_in_polygon(to_plane({x, y, z}), boundary);
}

double DesktopMesh::triangulated_area() const {
  double area = 0.0;
  for (const auto& t : triangles) {
    area += 0.5 * std::abs(cross2(boundary[t[1]] - boundary[t[0]], boundary[t[2]] - boundary[t[0]]));
  }
  return area;
}

const ObjectInstance* SceneState::find(const std::string& instance_id) const {
  for (const auto& o : objects) {
    if (o.instance_id == instance_id) return &o;
  }
  return nullptr;
}

ObjectInstance* SceneState::find(const std::string& instance_id) {
  return const_cast<ObjectInstance*>(std::as_const(*this).find(instance_id));
}

const ObjectInstance& SceneState::object(const std::string& instance_id) const {
  const ObjectInstance* o = find(instance_id);
  if (o == nullptr) throw NotFoundError("unknown instance_id '" + instance_id + "'");
  return *o;
}

ObjectInstance& SceneState::object(const std::string& instance_id) {
  return const_cast<ObjectInstance&>(std::as_const(*this).object(instance_id));
}

const ObjectModel& SceneState::model_of(const ObjectInstance& instance) const {
  const auto it = catalog.find(instance.model_id);
  if (it == catalog.end()) throw NotFoundError("unknown model_id '" + instance.model_id + "'");
  return it->second;
}

OrientedBox SceneState::actual_box(const ObjectInstance& instance) const {
  return {instance.actual_pose, model_of(instance).half_extents};
}

OrientedBox SceneState::ghost_box(const ObjectInstance& instance) const {
  return {instance.ghost_pose, model_of(instance).half_extents};
}

const ObjectInstance* SceneState::held_object() const {
  for (const auto& o : objects) {
    if (o.held) return &o;
  }
  return nullptr;
}

void validate_model(const ObjectModel& m) {
  const std::string where = "model '" + m.model_id + "': ";
  if (m.model_id.empty()) throw ValidationError("model_id must not be empty");
  if (!(m.half_extents.array() > 0.0).all() || !m.half_extents.allFinite()) {
    throw ValidationError(where + "half_extents must be positive");
  }
  if (!(m.mass > 0.0) || !std::isfinite(m.mass)) throw ValidationError(where + "mass must be positive");
  if (!(m.grasp_width > 0.0) || m.grasp_width > kMaxGripperAperture) {
    throw ValidationError(where + "grasp_width must be in (0, 0.085]");
  }
  if (m.grasp_width > 2.0 * std::min(m.half_extents.x(), m.half_extents.y()) + 1e-12) {
    throw ValidationError(where + "grasp_width exceeds the narrow horizontal side");
  }
}

void validate_scene(const SceneState& scene) {
  for (const auto& [id, model] : scene.catalog) {
    if (id != model.model_id) throw ValidationError("catalog key mismatch for '" + id + "'");
    validate_model(model);
  }
  const DesktopMesh& desk = scene.desktop;
  if (std::abs(desk.normal.norm() - 1.0) > 1e-9) throw ValidationError("desktop normal is not unit length");
  if (!desk.boundary.empty() && !is_simple(desk.boundary)) {
    throw ValidationError("desktop boundary is not a simple polygon");
  }

  std::set<std::string> ids;
  int held = 0;
  for (const auto& o : scene.objects) {
    if (!ids.insert(o.instance_id).second) throw ValidationError("duplicate instance_id '" + o.instance_id + "'");
    if (!scene.catalog.contains(o.model_id)) {
      throw ValidationError("instance '" + o.instance_id + "' references unknown model '" + o.model_id + "'");
    }
    if (o.held) ++held;
    const double below = box_plane_penetration(scene.actual_box(o), desk.normal, desk.offset);
    if (below > kContactTolerance) {
      throw ValidationError("instance '" + o.instance_id + "' is below the desktop plane");
    }
  }
  if (held > 1) throw ValidationError("more than one object is held");

  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    for (std::size_t j = i + 1; j < scene.objects.size(); ++j) {
      const double depth = box_overlap_depth(scene.actual_box(scene.objects[i]), scene.actual_box(scene.objects[j]));
      if (depth > kContactTolerance) {
        throw ValidationError("instances '" + scene.objects[i].instance_id + "' and '" +
                              scene.objects[j].instance_id + "' interpenetrate");
      }
    }
  }
  if (!(scene.gripper_aperture >= 0.0 && scene.gripper_aperture <= kMaxGripperAperture)) {
    throw ValidationError("gripper aperture out of range");
  }
}

void set_ghost_pose(SceneState& scene, const std::string& instance_id, const Pose& pose) {
  scene.object(instance_id).ghost_pose = pose;
}

void reset_ghosts(SceneState& scene) {
  for (auto& o : scene.objects) o.ghost_pose = o.actual_pose;
}

void advance_time(SceneState& scene, double time) {
  if (time < scene.sim_time) throw ValidationError("sim_time must not decrease");
  scene.sim_time = time;
}

SceneSnapshot snapshot(const SceneState& scene) { return std::make_shared<const SceneState>(scene); }

}  // namespace teleop
