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

#include "teleop/ee_controller.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "teleop/error.hpp"

namespace teleop {

namespace {

std::int64_t to_us(double seconds) { return std::llround(seconds * 1e6); }

std::int64_t next_multiple(std::int64_t t, std::int64_t period) {
  // Smallest multiple of period strictly after t.
  return (t / period + 1) * period;
}

}  // namespace

EeController::EeController(TaskExecutor& executor, TargetQueue& queue, double control_rate)
    : executor_(executor),
      queue_(queue),
      control_period_us_(to_us(1.0 / control_rate)),
      publish_period_us_(to_us(1.0 / executor.config().joint_rate)) {
  if (!(control_rate > 0.0)) throw ValidationError("control rate must be positive");
}

void EeController::reset() {
  goal_.reset();
  collision_.reset();
  ik_failures_ = 0;
  consumed_ = 0;
  next_control_us_.reset();
  last_motion_us_.reset();
}

void EeController::control_step(const SceneState& scene) {
  const std::optional<Pose> target = queue_.pop_latest();
  if (!target) return;
  ++consumed_;
  const IkResult r = ik_solve(executor_.chain(), *target, scene.joints.angles, executor_.config().ik);
  if (r.ok()) {
    goal_ = r.angles;
  } else {
    ++ik_failures_;
    spdlog::info("target_pose skipped: IK {}", to_string(r.status));
  }
}

void EeController::motion_step(SceneState& scene, std::int64_t tick_us) {
  const double t = static_cast<double>(tick_us) * 1e-6;
  const double dt = static_cast<double>(tick_us - last_motion_us_.value_or(tick_us - publish_period_us_)) * 1e-6;
  last_motion_us_ = tick_us;

  JointState sample = scene.joints;
  sample.timestamp = t;
  sample.velocities.fill(0.0);
  if (goal_ && dt > 0.0) {
    const auto& joints = executor_.chain().joints();
    double ratio = 0.0;
    JointVector delta{};
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      delta[i] = (*goal_)[i] - sample.angles[i];
      ratio = std::max(ratio, std::abs(delta[i]) / (joints[i].max_velocity * dt));
    }
    const double scale = ratio > 1.0 ? 1.0 / ratio : 1.0;
    JointState moved = sample;
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      moved.angles[i] += delta[i] * scale;
      moved.velocities[i] = delta[i] * scale / dt;
    }
    moved.angles = executor_.chain().clamp(moved.angles);
    const Pose tool = forward_kinematics(executor_.chain(), moved.angles);
    if (auto hit = detect_collision(scene, tool, executor_.config().collision_threshold)) {
      if (!collision_) {
        collision_ = *hit;
        spdlog::info("EE motion stopped: {}", *hit);
      }
      goal_.reset();
    } else {
      sample = moved;
    }
  }
  executor_.apply_sample(scene, sample);
}

void EeController::run_until(SceneState& scene, double time) {
  const std::int64_t until = to_us(time);
  const std::int64_t now = to_us(scene.sim_time);
  if (!next_control_us_ || *next_control_us_ < now) next_control_us_ = now;
  std::int64_t next_pub = next_multiple(now, publish_period_us_);
  if (!last_motion_us_ || *last_motion_us_ > now) last_motion_us_ = now;

  while (true) {
    const std::int64_t next_event = std::min(*next_control_us_, next_pub);
    if (next_event > until) break;
    if (*next_control_us_ <= next_pub) {
      control_step(scene);
      *next_control_us_ += control_period_us_;
    } else {
      motion_step(scene, next_pub);
      next_pub += publish_period_us_;
    }
  }
  if (time > scene.sim_time) {
    executor_.clock().sleep_until(time);
    advance_time(scene, time);
  }
}

}  // namespace teleop
