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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "teleop/joint_state.hpp"
#include "teleop/pose.hpp"

namespace teleop {

/// One revolute joint: a fixed transform from the previous joint frame,
/// followed by a rotation about `axis` (expressed after the fixed part).
struct JointSpec {
  std::string name;
  Eigen::Vector3d displacement = Eigen::Vector3d::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  double lower = -M_PI;
  double upper = M_PI;
  double max_velocity = 0.8;
  double max_acceleration = 1.5;
};

class KinematicChain {
 public:
  /// Throws ValidationError for non-unit axes or empty limit intervals.
  KinematicChain(std::array<JointSpec, kNumJoints> joints, Pose tool_offset);

  const std::array<JointSpec, kNumJoints>& joints() const noexcept { return joints_; }
  const Pose& tool_offset() const noexcept { return tool_offset_; }
  /// Upper bound on the tool distance from the base origin.
  double reach() const noexcept { return reach_; }

  bool within_limits(const JointVector& q) const;
  JointVector clamp(const JointVector& q) const;

 private:
  std::array<JointSpec, kNumJoints> joints_;
  Pose tool_offset_;
  double reach_ = 0.0;
};

/// Kinova Gen3 7-DoF with a Robotiq 2F-85 tool center point.
KinematicChain kinova_gen3_chain();
KinematicChain parse_chain(std::string_view json_text);
KinematicChain load_chain(const std::filesystem::path& path);

struct JointFrames {
  std::array<Eigen::Vector3d, kNumJoints> origins;
  std::array<Eigen::Vector3d, kNumJoints> axes;  // world frame, unit
  Pose tool;
};

JointFrames joint_frames(const KinematicChain& chain, const JointVector& q);
Pose forward_kinematics(const KinematicChain& chain, const JointVector& q);

using Jacobian = Eigen::Matrix<double, 6, kNumJoints>;

/// Geometric Jacobian of the tool frame: linear rows first, then angular.
Jacobian jacobian(const KinematicChain& chain, const JointVector& q);

enum class IkStatus { Converged, NoConvergence, Unreachable };

std::string to_string(IkStatus status);

struct IkOptions {
  double damping = 0.1;
  double max_step = 0.2;
  int max_iterations = 200;
  double position_tolerance = 1e-3;
  double orientation_tolerance = 1e-2;
};

struct IkResult {
  IkStatus status = IkStatus::NoConvergence;
  JointVector angles{};
  int iterations = 0;
  double position_error = 0.0;
  double orientation_error = 0.0;

  bool ok() const noexcept { return status == IkStatus::Converged; }
};

/// Damped least squares: q += J^T (J J^T + lambda^2 I)^-1 e, where e stacks
/// the position error and the rotation vector of the orientation error.
/// Steps are scaled so no joint moves more than `max_step` per iteration,
/// and the iterate is clamped to the joint limits.
IkResult ik_solve(const KinematicChain& chain, const Pose& target, const JointVector& seed,
                  const IkOptions& options = {});

/// Linear joint-space interpolation with a trapezoidal time scaling that
/// respects every joint's velocity and acceleration limit. Samples are
/// spaced 1/rate apart starting at `start_time`; the first and last samples
/// equal the endpoints.
std::vector<JointState> plan_trajectory(const KinematicChain& chain, const JointVector& from, const JointVector& to,
                                        double rate, double start_time = 0.0);

/// Same time scaling along a piecewise-linear path through `waypoints`.
std::vector<JointState> plan_path(const KinematicChain& chain, const std::vector<JointVector>& waypoints,
                                  double rate, double start_time = 0.0);

/// Fingertips sit this far below the top face when grasping.
inline constexpr double kFingerEngagement = 0.02;
inline constexpr double kHoverHeight = 0.10;

/// Top-down tool pose for an upright object of half height `half_height`:
/// tool z points down, tool yaw follows the object. With hover > 0 the tool
/// sits `hover` above the top face, with hover == 0 it sits at grasp depth.
Pose top_down_pose(const Pose& object_pose, double half_height, double hover,
                   double engagement = kFingerEngagement);

}  // namespace teleop
