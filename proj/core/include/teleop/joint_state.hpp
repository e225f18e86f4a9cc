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
#include <cstddef>

namespace teleop {

inline constexpr std::size_t kNumJoints = 7;

using JointVector = std::array<double, kNumJoints>;

/// Arm joint positions and velocities at one instant (the joint_states datum).
struct JointState {
  JointVector angles{};
  JointVector velocities{};
  double timestamp = 0.0;

  friend bool operator==(const JointState&, const JointState&) = default;
};

}  // namespace teleop
