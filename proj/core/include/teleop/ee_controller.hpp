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

#include <cstdint>
#include <optional>
#include <string>

#include "teleop/target_queue.hpp"
#include "teleop/task_executor.hpp"

namespace teleop {

/// Streaming end-effector control. Every control period the newest queued
/// target is popped and solved with IK seeded at the current joints; every
/// publication period the arm moves toward the last solution at joint
/// velocity limits. Empty queue: the arm holds.
class EeController {
 public:
  static constexpr double kControlRate = 20.0;

  EeController(TaskExecutor& executor, TargetQueue& queue, double control_rate = kControlRate);

  /// Advances the loop on `scene` up to `time` (seconds, scene clock).
  void run_until(SceneState& scene, double time);

  std::optional<JointVector> goal() const { return goal_; }
  void clear_goal() { goal_.reset(); }
  int ik_failures() const noexcept { return ik_failures_; }
  int targets_consumed() const noexcept { return consumed_; }
  /// First collision seen since the last reset, if any.
  const std::optional<std::string>& collision() const noexcept { return collision_; }
  void reset();

 private:
  void control_step(const SceneState& scene);
  void motion_step(SceneState& scene, std::int64_t tick_us);

  TaskExecutor& executor_;
  TargetQueue& queue_;
  std::int64_t control_period_us_;
  std::int64_t publish_period_us_;
  std::optional<std::int64_t> next_control_us_;
  std::optional<std::int64_t> last_motion_us_;
  std::optional<JointVector> goal_;
  std::optional<std::string> collision_;
  int ik_failures_ = 0;
  int consumed_ = 0;
};

}  // namespace teleop
