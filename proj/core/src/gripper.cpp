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

#include "teleop/gripper.hpp"

#include <cmath>

#include "teleop/error.hpp"

namespace teleop {

namespace {
constexpr double kCurrentSlack = 1e-9;
constexpr double kFingerHalfThickness = 0.0045;
constexpr double kSweepMargin = 0.005;
}  // namespace

void validate_gripper(const GripperConfig& c) {
  if (!(c.close_speed > 0 && c.current_threshold > 0 && c.max_aperture > 0 && c.current_gain > 0 && c.step > 0)) {
    throw ValidationError("gripper parameters must be positive");
  }
}

ClosureResult simulate_closure(double start_aperture, std::optional<double> object_width, const GripperConfig& config) {
  validate_gripper(config);
  ClosureResult r;
  double aperture = start_aperture;
  r.apertures.push_back(aperture);
  r.currents.push_back(0.0);
  const double per_step = config.close_speed * config.step;
  // Integer step counting keeps the aperture free of accumulated drift.
  for (int k = 1;; ++k) {
    aperture = std::max(0.0, start_aperture - per_step * k);
    double current = 0.0;
    if (object_width && aperture < *object_width) current = config.current_gain * (*object_width - aperture);
    r.steps = k;
    r.apertures.push_back(aperture);
    r.currents.push_back(current);
    if (current >= config.current_threshold - kCurrentSlack) {
      r.stopped_on_contact = true;
      break;
    }
    if (aperture <= 0.0) break;
  }
  r.final_aperture = aperture;
  r.duration = r.steps * config.step;
  if (r.stopped_on_contact) r.squeeze = *object_width - aperture;
  return r;
}

std::array<OrientedBox, 3> gripper_boxes(const Pose& tool, double aperture) {
  const Eigen::Vector3d finger_half(0.011, kFingerHalfThickness, 0.02);
  const double y = aperture / 2.0 + kFingerHalfThickness;
  return {OrientedBox{tool * Pose(0.0, y, -0.02), finger_half},
          OrientedBox{tool * Pose(0.0, -y, -0.02), finger_half},
          OrientedBox{tool * Pose(0.0, 0.0, -0.06), Eigen::Vector3d(0.03, 0.05, 0.02)}};
}

const ObjectInstance* object_in_sweep(const SceneState& scene, const Pose& tool, double aperture) {
  for (const auto& o : scene.objects) {
    if (o.held) continue;
    const ObjectModel& m = scene.model_of(o);
    if (m.grasp_width > aperture) continue;
    const Eigen::Vector3d local = o.actual_pose.inverse() * tool.position();
    if (std::abs(local.x()) <= m.half_extents.x() + kSweepMargin &&
        std::abs(local.y()) <= m.half_extents.y() + kSweepMargin &&
        std::abs(local.z()) <= m.half_extents.z() + kSweepMargin) {
      return &o;
    }
  }
  return nullptr;
}

}  // namespace teleop
