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
#include <optional>
#include <vector>

#include "teleop/geometry.hpp"
#include "teleop/pose.hpp"
#include "teleop/scene.hpp"

namespace teleop {

/// Current-feedback gripper. The simulated motor current is zero until the
/// fingers touch the object, then grows linearly with squeeze.
struct GripperConfig {
  double close_speed = 0.1;         // m/s
  double current_threshold = 0.12;  // A
  double max_aperture = kMaxGripperAperture;
  double current_gain = 60.0;  // A per meter of squeeze
  double step = 1e-3;          // s, closure integration step
};

void validate_gripper(const GripperConfig& config);

struct ClosureResult {
  bool stopped_on_contact = false;
  double final_aperture = 0.0;
  double squeeze = 0.0;   // grasp_width - final_aperture, 0 without contact
  double duration = 0.0;  // s
  int steps = 0;
  std::vector<double> apertures;  // one per step, starting with the initial aperture
  std::vector<double> currents;
};

/// Closes from `start_aperture` at close_speed. `object_width` is the
/// aperture at first contact, nullopt for an empty gripper. The motor stops
/// at the first step boundary where the current reaches the threshold;
/// a threshold hit exactly on a step boundary (to 1e-9 A) counts.
ClosureResult simulate_closure(double start_aperture, std::optional<double> object_width,
                               const GripperConfig& config);

/// Finger pads and palm as boxes in the world frame for a tool pose and
/// aperture. Fingers close along the tool y-axis.
std::array<OrientedBox, 3> gripper_boxes(const Pose& tool, double aperture);

/// Object whose body the fingertips are inside of and that fits between
/// the open fingers; nullptr when the sweep is empty.
const ObjectInstance* object_in_sweep(const SceneState& scene, const Pose& tool, double aperture);

}  // namespace teleop
