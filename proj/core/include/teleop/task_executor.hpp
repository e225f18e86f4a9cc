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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "teleop/arm_model.hpp"
#include "teleop/clock.hpp"
#include "teleop/gripper.hpp"
#include "teleop/scene.hpp"
#include "teleop/settle.hpp"

namespace teleop {

struct MoveRequest {
  std::string instance_id;
  Pose initial_pose;
  Pose target_pose;
};

/// Ordered object moves; the same instance may appear more than once.
struct TaskRequest {
  std::vector<MoveRequest> moves;
};

enum class MoveOutcome { Success, Collision, GraspFailure, IkFailure };

std::string to_string(MoveOutcome outcome);

struct PhaseMark {
  std::string phase;
  double time = 0.0;
};

struct MoveReport {
  std::string instance_id;
  MoveOutcome outcome = MoveOutcome::Success;
  std::vector<PhaseMark> phases;
  std::string detail;
  std::optional<Pose> final_pose;
  std::optional<Support> support;
};

struct ExecutionReport {
  std::vector<MoveReport> moves;
  bool success = true;
  /// A collision stopped the task before every move ran.
  bool aborted = false;
  double start_time = 0.0;
  double end_time = 0.0;
};

struct ExecutorConfig {
  double joint_rate = 50.0;  // Hz, joint_states publication
  double hover = kHoverHeight;
  double engagement = kFingerEngagement;
  double waypoint_spacing = 0.01;      // m between Cartesian IK waypoints
  double waypoint_rotation = 0.05;     // rad between Cartesian IK waypoints
  double collision_threshold = 0.002;  // m of overlap that counts as a collision
  double upright_tolerance = 1e-3;     // rad of roll/pitch accepted on targets
  GripperConfig gripper;
  IkOptions ik;
  /// Used for the end point of each segment so placements are exact.
  IkOptions precise_ik{0.1, 0.2, 200, 1e-8, 1e-8};
  SettleOptions settle;
};

struct GraspResult {
  std::optional<std::string> instance_id;
  ClosureResult closure;
  bool success() const noexcept { return instance_id.has_value(); }
};

struct ReleaseResult {
  std::optional<std::string> instance_id;
  std::optional<SettleResult> settled;
  std::string error;
};

/// Called after every published joint sample with the live scene.
using SceneObserver = std::function<void(const SceneState&)>;

/// Collision of the gripper or the held object with the desktop or another
/// object; returns a description, nullopt when clear.
std::optional<std::string> detect_collision(const SceneState& scene, const Pose& tool, double threshold);

/// Drives the simulated arm: pick-and-place tasks, gripper services and
/// the shared sample loop (50 Hz joint publication, held-object rigidity,
/// collision checks).
class TaskExecutor {
 public:
  TaskExecutor(KinematicChain chain, Clock& clock, ExecutorConfig config = {});

  void set_observer(SceneObserver observer) { observer_ = std::move(observer); }
  const KinematicChain& chain() const noexcept { return chain_; }
  const ExecutorConfig& config() const noexcept { return config_; }
  Clock& clock() noexcept { return clock_; }

  /// Throws NotFoundError/ValidationError when a move names an unknown
  /// instance or a non-upright target; nothing moves in that case.
  ExecutionReport execute_task(SceneState& scene, const TaskRequest& request);

  GraspResult grasp(SceneState& scene);
  ReleaseResult release(SceneState& scene);

  Pose tool_pose(const SceneState& scene) const;
  /// Publishes the current state at `joint_rate` until `time`.
  void hold_until(SceneState& scene, double time);
  /// Applies one joint sample: time, joints, held object, observer.
  void apply_sample(SceneState& scene, const JointState& sample);

 private:
  struct Segment {
    std::vector<JointState> samples;
    bool ok = false;
    std::string detail;
  };

  Segment plan_cartesian(const SceneState& scene, const JointVector& start, const Pose& goal) const;
  /// Plays samples with collision checking. Returns the collision detail,
  /// or nullopt if the segment completed.
  std::optional<std::string> run_segment(SceneState& scene, const Segment& segment, bool check_collisions);
  void run_move(SceneState& scene, const MoveRequest& move, MoveReport& report, bool& abort);
  void retreat(SceneState& scene);

  KinematicChain chain_;
  Clock& clock_;
  ExecutorConfig config_;
  SceneObserver observer_;
};

}  // namespace teleop
