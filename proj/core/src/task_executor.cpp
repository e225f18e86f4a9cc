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

#include "teleop/task_executor.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "teleop/error.hpp"

namespace teleop {

std::string to_string(MoveOutcome outcome) {
  switch (outcome) {
    case MoveOutcome::Success:
      return "success";
    case MoveOutcome::Collision:
      return "collision";
    case MoveOutcome::GraspFailure:
      return "grasp_failure";
    case MoveOutcome::IkFailure:
      return "ik_failure";
  }
  return "unknown";
}

std::optional<std::string> detect_collision(const SceneState& scene, const Pose& tool, double threshold) {
  struct Body {
    std::string name;
    OrientedBox box;
  };
  std::vector<Body> bodies;
  const auto grip = gripper_boxes(tool, scene.gripper_aperture);
  bodies.push_back({"left finger", grip[0]});
  bodies.push_back({"right finger", grip[1]});
  bodies.push_back({"palm", grip[2]});
  const ObjectInstance* held = scene.held_object();
  if (held != nullptr) {
    bodies.push_back({"held object '" + held->instance_id + "'",
                      OrientedBox{tool * held->grasp_offset, scene.model_of(*held).half_extents}});
  }

  for (const auto& body : bodies) {
    if (box_plane_penetration(body.box, scene.desktop.normal, scene.desktop.offset) > threshold) {
      return body.name + " hits the desktop";
    }
    for (const auto& o : scene.objects) {
      if (o.held) continue;
      if (box_overlap_depth(body.box, scene.actual_box(o)) > threshold) {
        return body.name + " hits '" + o.instance_id + "'";
      }
    }
  }
  return std::nullopt;
}

TaskExecutor::TaskExecutor(KinematicChain chain, Clock& clock, ExecutorConfig config)
    : chain_(std::move(chain)), clock_(clock), config_(std::move(config)) {
  validate_gripper(config_.gripper);
  if (!(config_.joint_rate > 0.0)) throw ValidationError("joint_rate must be positive");
}

Pose TaskExecutor::tool_pose(const SceneState& scene) const { return forward_kinematics(chain_, scene.joints.angles); }

void TaskExecutor::apply_sample(SceneState& scene, const JointState& sample) {
  clock_.sleep_until(sample.timestamp);
  advance_time(scene, sample.timestamp);
  scene.joints = sample;
  for (auto& o : scene.objects) {
    if (o.held) o.actual_pose = forward_kinematics(chain_, sample.angles) * o.grasp_offset;
  }
  if (observer_) observer_(scene);
}

void TaskExecutor::hold_until(SceneState& scene, double time) {
  const double start = scene.sim_time;
  const auto ticks = static_cast<long>(std::ceil((time - start) * config_.joint_rate - 1e-9));
  JointState sample = scene.joints;
  sample.velocities.fill(0.0);
  for (long k = 1; k <= ticks; ++k) {
    sample.timestamp = start + static_cast<double>(k) / config_.joint_rate;
    apply_sample(scene, sample);
  }
}

TaskExecutor::Segment TaskExecutor::plan_cartesian(const SceneState& scene, const JointVector& start,
                                                   const Pose& goal) const {
  Segment seg;
  const Pose from = forward_kinematics(chain_, start);
  const double dist = position_distance(from, goal);
  const double angle = orientation_distance(from, goal);
  const int n = std::max(1, static_cast<int>(std::ceil(std::max(dist / config_.waypoint_spacing,
                                                                 angle / config_.waypoint_rotation))));
  std::vector<JointVector> waypoints{start};
  JointVector q = start;
  for (int k = 1; k <= n; ++k) {
    const double s = static_cast<double>(k) / n;
    const Pose target(from.position() + s * (goal.position() - from.position()),
                      from.orientation().slerp(s, goal.orientation()));
    IkResult r = ik_solve(chain_, target, q, k == n ? config_.precise_ik : config_.ik);
    if (!r.ok() && k == n) r = ik_solve(chain_, target, q, config_.ik);
    if (!r.ok()) {
      seg.detail = "IK " + to_string(r.status) + " at waypoint " + std::to_string(k) + "/" + std::to_string(n);
      return seg;
    }
    q = r.angles;
    waypoints.push_back(q);
  }
  seg.samples = plan_path(chain_, waypoints, config_.joint_rate, scene.sim_time);
  seg.ok = true;
  return seg;
}

std::optional<std::string> TaskExecutor::run_segment(SceneState& scene, const Segment& segment,
                                                     bool check_collisions) {
  for (std::size_t k = 1; k < segment.samples.size(); ++k) {
    const JointState& sample = segment.samples[k];
    if (check_collisions) {
      const Pose tool = forward_kinematics(chain_, sample.angles);
      if (auto hit = detect_collision(scene, tool, config_.collision_threshold)) return hit;
    }
    apply_sample(scene, sample);
  }
  return std::nullopt;
}

GraspResult TaskExecutor::grasp(SceneState& scene) {
  GraspResult result;
  const Pose tool = tool_pose(scene);
  ObjectInstance* candidate = nullptr;
  if (scene.held_object() == nullptr) {
    if (const ObjectInstance* found = object_in_sweep(scene, tool, scene.gripper_aperture)) {
      candidate = scene.find(found->instance_id);
    }
  }
  const std::optional<double> width =
      candidate ? std::optional<double>(scene.model_of(*candidate).grasp_width) : std::nullopt;
  result.closure = simulate_closure(scene.gripper_aperture, width, config_.gripper);
  hold_until(scene, scene.sim_time + result.closure.duration);
  scene.gripper_aperture = result.closure.final_aperture;
  if (candidate != nullptr && result.closure.stopped_on_contact) {
    candidate->held = true;
    candidate->grasp_offset = tool.inverse() * candidate->actual_pose;
    result.instance_id = candidate->instance_id;
  }
  if (observer_) observer_(scene);
  return result;
}

ReleaseResult TaskExecutor::release(SceneState& scene) {
  ReleaseResult result;
  const double opening = (config_.gripper.max_aperture - scene.gripper_aperture) / config_.gripper.close_speed;
  scene.gripper_aperture = config_.gripper.max_aperture;
  for (auto& o : scene.objects) {
    if (!o.held) continue;
    o.held = false;
    result.instance_id = o.instance_id;
    try {
      SettleOptions opts = config_.settle;
      opts.colliders = ColliderPoses::Actual;
      SettleResult settled = settle(scene, o.instance_id, o.actual_pose, opts);
      o.actual_pose = settled.final_pose;
      result.settled = std::move(settled);
    } catch (const Error& e) {
      result.error = e.what();
      spdlog::warn("release of '{}' could not settle: {}", o.instance_id, e.what());
    }
    o.ghost_pose = o.actual_pose;
  }
  if (opening > 0.0) hold_until(scene, scene.sim_time + opening);
  if (observer_) observer_(scene);
  return result;
}

void TaskExecutor::retreat(SceneState& scene) {
  Pose up = tool_pose(scene);
  up.set_position(up.position() + Eigen::Vector3d(0.0, 0.0, config_.hover));
  const Segment seg = plan_cartesian(scene, scene.joints.angles, up);
  if (seg.ok) run_segment(scene, seg, false);
}

void TaskExecutor::run_move(SceneState& scene, const MoveRequest& move, MoveReport& report, bool& abort) {
  report.instance_id = move.instance_id;
  const Eigen::Vector3d half = scene.model_of(scene.object(move.instance_id)).half_extents;
  auto mark = [&](const char* phase) { report.phases.push_back({phase, scene.sim_time}); };
  auto fail = [&](MoveOutcome outcome, std::string detail) {
    report.outcome = outcome;
    report.detail = std::move(detail);
    spdlog::info("move '{}' failed: {} ({})", move.instance_id, to_string(outcome), report.detail);
  };
  auto collided = [&](const std::string& detail) {
    fail(MoveOutcome::Collision, detail);
    abort = true;
    mark("abort");
    release(scene);
    retreat(scene);
  };

  // Segments are planned ahead of time; timestamps are re-based when
  // they are played.
  auto rebase = [&](Segment seg) {
    const double shift = scene.sim_time - seg.samples.front().timestamp;
    for (auto& s : seg.samples) s.timestamp += shift;
    return seg;
  };
  const Pose hover_pick = top_down_pose(move.initial_pose, half.z(), config_.hover, config_.engagement);
  const Pose grasp_pose = top_down_pose(move.initial_pose, half.z(), 0.0, config_.engagement);
  const Segment approach = plan_cartesian(scene, scene.joints.angles, hover_pick);
  if (!approach.ok) return fail(MoveOutcome::IkFailure, "approach: " + approach.detail);
  const Segment descend = plan_cartesian(scene, approach.samples.back().angles, grasp_pose);
  if (!descend.ok) return fail(MoveOutcome::IkFailure, "descend: " + descend.detail);

  mark("approach");
  if (auto hit = run_segment(scene, approach, true)) return collided(*hit);
  mark("descend");
  if (auto hit = run_segment(scene, rebase(descend), true)) return collided(*hit);

  mark("grasp");
  const GraspResult grip = grasp(scene);
  if (!grip.success() || *grip.instance_id != move.instance_id) {
    release(scene);
    fail(MoveOutcome::GraspFailure, grip.success() ? "grasped '" + *grip.instance_id + "' instead"
                                                   : "current threshold never reached");
    const Segment back = plan_cartesian(scene, scene.joints.angles, hover_pick);
    if (back.ok) {
      if (auto hit = run_segment(scene, back, true)) return collided(*hit);
    }
    return;
  }

  const Pose offset = scene.object(move.instance_id).grasp_offset;
  const Pose place_pose = move.target_pose * offset.inverse();
  Pose hover_place = place_pose;
  hover_place.set_position(place_pose.position() + Eigen::Vector3d(0.0, 0.0, config_.hover));

  const Segment lift = plan_cartesian(scene, scene.joints.angles, hover_pick);
  const Segment transfer = lift.ok ? plan_cartesian(scene, lift.samples.back().angles, hover_place) : Segment{};
  const Segment place = transfer.ok ? plan_cartesian(scene, transfer.samples.back().angles, place_pose) : Segment{};
  if (!lift.ok || !transfer.ok || !place.ok) {
    release(scene);
    const std::string detail = !lift.ok ? "lift: " + lift.detail
                               : !transfer.ok ? "transfer: " + transfer.detail
                                              : "place: " + place.detail;
    return fail(MoveOutcome::IkFailure, detail);
  }

  mark("lift");
  if (auto hit = run_segment(scene, rebase(lift), true)) return collided(*hit);
  mark("transfer");
  if (auto hit = run_segment(scene, rebase(transfer), true)) return collided(*hit);
  mark("place");
  if (auto hit = run_segment(scene, rebase(place), true)) return collided(*hit);

  mark("release");
  const ReleaseResult released = release(scene);
  if (released.settled) report.support = released.settled->support;
  report.final_pose = scene.object(move.instance_id).actual_pose;

  mark("retreat");
  const Segment up = plan_cartesian(scene, scene.joints.angles, hover_place);
  if (up.ok) {
    if (auto hit = run_segment(scene, up, true)) return collided(*hit);
  }
  mark("done");
  report.outcome = MoveOutcome::Success;
}

ExecutionReport TaskExecutor::execute_task(SceneState& scene, const TaskRequest& request) {
  for (const auto& move : request.moves) {
    scene.object(move.instance_id);
    if (move.target_pose.tilt() > config_.upright_tolerance) {
      throw ValidationError("target pose for '" + move.instance_id + "' is not upright");
    }
  }
  ExecutionReport report;
  report.start_time = scene.sim_time;
  for (const auto& move : request.moves) {
    MoveReport mr;
    bool abort = false;
    run_move(scene, move, mr, abort);
    report.moves.push_back(std::move(mr));
    if (abort) {
      report.aborted = true;
      break;
    }
  }
  report.success = !report.aborted && std::all_of(report.moves.begin(), report.moves.end(), [](const MoveReport& m) {
                     return m.outcome == MoveOutcome::Success;
                   });
  report.end_time = scene.sim_time;
  return report;
}

}  // namespace teleop
