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

#include "teleop/arm_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include <Eigen/Dense>

#include "teleop/error.hpp"
#include "teleop/json_codec.hpp"

namespace teleop {

namespace {

Eigen::Quaterniond from_rpy(double roll, double pitch, double yaw) {
  return Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) * Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()) *
         Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX());
}

}  // namespace

KinematicChain::KinematicChain(std::array<JointSpec, kNumJoints> joints, Pose tool_offset)
    : joints_(std::move(joints)), tool_offset_(std::move(tool_offset)) {
  for (auto& j : joints_) {
    if (std::abs(j.axis.norm() - 1.0) > 1e-9) throw ValidationError("joint '" + j.name + "' axis is not unit length");
    if (!(j.lower < j.upper)) throw ValidationError("joint '" + j.name + "' has an empty limit interval");
    if (!(j.max_velocity > 0.0) || !(j.max_acceleration > 0.0)) {
      throw ValidationError("joint '" + j.name + "' needs positive velocity and acceleration limits");
    }
    j.rotation.normalize();
    reach_ += j.displacement.norm();
  }
  reach_ += tool_offset_.position().norm();
}

bool KinematicChain::within_limits(const JointVector& q) const {
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    if (q[i] < joints_[i].lower || q[i] > joints_[i].upper) return false;
  }
  return true;
}

JointVector KinematicChain::clamp(const JointVector& q) const {
  JointVector out = q;
  for (std::size_t i = 0; i < kNumJoints; ++i) out[i] = std::clamp(q[i], joints_[i].lower, joints_[i].upper);
  return out;
}

KinematicChain kinova_gen3_chain() {
  // Joint origins from the Kinova kortex_description URDF for the 7-DoF Gen3.
  struct Row {
    const char* name;
    double x, y, z, roll, pitch, yaw, limit;
  };
  constexpr double kFree = 2.0 * M_PI;
  constexpr Row rows[kNumJoints] = {
      {"joint_1", 0.0, 0.0, 0.15643, M_PI, 0.0, 0.0, kFree},
      {"joint_2", 0.0, 0.005375, -0.12838, M_PI / 2, 0.0, 0.0, 2.41},
      {"joint_3", 0.0, -0.21038, -0.006375, -M_PI / 2, 0.0, 0.0, kFree},
      {"joint_4", 0.0, 0.006375, -0.21038, M_PI / 2, 0.0, 0.0, 2.66},
      {"joint_5", 0.0, -0.20843, -0.006375, -M_PI / 2, 0.0, 0.0, kFree},
      {"joint_6", 0.0, 0.00017505, -0.10593, M_PI / 2, 0.0, 0.0, 2.23},
      {"joint_7", 0.0, -0.10593, -0.00017505, -M_PI / 2, 0.0, 0.0, kFree},
  };
  std::array<JointSpec, kNumJoints> joints;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const Row& r = rows[i];
    joints[i].name = r.name;
    joints[i].displacement = {r.x, r.y, r.z};
    joints[i].rotation = from_rpy(r.roll, r.pitch, r.yaw);
    joints[i].axis = Eigen::Vector3d::UnitZ();
    joints[i].lower = -r.limit;
    joints[i].upper = r.limit;
  }
  // Bracelet to end-effector flange, then the 2F-85 fingertip center.
  const Pose flange(Eigen::Vector3d(0.0, 0.0, -0.061525), from_rpy(M_PI, 0.0, 0.0));
  const Pose fingertips(0.0, 0.0, 0.13);
  return KinematicChain(joints, flange * fingertips);
}

KinematicChain parse_chain(std::string_view json_text) {
  using codec::json;
  const json doc = codec::parse_text(json_text);
  const json& list = codec::member(doc, "joints", "");
  if (!list.is_array() || list.size() != kNumJoints) throw ParseError("expected 7 joint records", 0, "/joints");
  std::array<JointSpec, kNumJoints> joints;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const std::string path = "/joints/" + std::to_string(i);
    const json& rec = list[i];
    JointSpec& j = joints[i];
    if (const json* name = codec::optional_member(rec, "name")) j.name = codec::string(*name, path + "/name");
    j.displacement = codec::vec3(codec::member(rec, "displacement", path), path + "/displacement");
    if (const json* rpy = codec::optional_member(rec, "rpy")) {
      const Eigen::Vector3d a = codec::vec3(*rpy, path + "/rpy");
      j.rotation = from_rpy(a.x(), a.y(), a.z());
    } else if (const json* q = codec::optional_member(rec, "rotation")) {
      if (!q->is_array() || q->size() != 4) throw ParseError("expected [qw, qx, qy, qz]", 0, path + "/rotation");
      j.rotation = Eigen::Quaterniond(codec::number((*q)[0], path), codec::number((*q)[1], path),
                                      codec::number((*q)[2], path), codec::number((*q)[3], path));
      if (j.rotation.norm() < 1e-12) throw ParseError("zero quaternion", 0, path + "/rotation");
    }
    j.axis = codec::vec3(codec::member(rec, "axis", path), path + "/axis");
    const json& limits = codec::member(rec, "limits", path);
    if (!limits.is_array() || limits.size() != 2) throw ParseError("expected [lower, upper]", 0, path + "/limits");
    j.lower = codec::number(limits[0], path + "/limits/0");
    j.upper = codec::number(limits[1], path + "/limits/1");
    if (const json* v = codec::optional_member(rec, "max_velocity")) j.max_velocity = codec::number(*v, path);
    if (const json* a = codec::optional_member(rec, "max_acceleration")) j.max_acceleration = codec::number(*a, path);
  }
  const Pose tool = codec::pose(codec::member(doc, "tool_offset", ""), "/tool_offset");
  return KinematicChain(joints, tool);
}

KinematicChain load_chain(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open chain config '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_chain(text);
}

JointFrames joint_frames(const KinematicChain& chain, const JointVector& q) {
  JointFrames frames;
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const JointSpec& j = chain.joints()[i];
    t.translate(j.displacement);
    t.rotate(j.rotation);
    frames.origins[i] = t.translation();
    frames.axes[i] = t.linear() * j.axis;
    t.rotate(Eigen::AngleAxisd(q[i], j.axis));
  }
  frames.tool = Pose::from_isometry(t * chain.tool_offset().isometry());
  return frames;
}

Pose forward_kinematics(const KinematicChain& chain, const JointVector& q) { return joint_frames(chain, q).tool; }

Jacobian jacobian(const KinematicChain& chain, const JointVector& q) {
  const JointFrames f = joint_frames(chain, q);
  Jacobian jac;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    jac.block<3, 1>(0, static_cast<Eigen::Index>(i)) = f.axes[i].cross(f.tool.position() - f.origins[i]);
    jac.block<3, 1>(3, static_cast<Eigen::Index>(i)) = f.axes[i];
  }
  return jac;
}

std::string to_string(IkStatus status) {
  switch (status) {
    case IkStatus::Converged:
      return "converged";
    case IkStatus::NoConvergence:
      return "no convergence";
    case IkStatus::Unreachable:
      return "unreachable";
  }
  return "unknown";
}

IkResult ik_solve(const KinematicChain& chain, const Pose& target, const JointVector& seed, const IkOptions& options) {
  IkResult result;
  result.angles = chain.clamp(seed);
  if (target.position().norm() > chain.reach()) {
    result.status = IkStatus::Unreachable;
    return result;
  }

  using Vector7d = Eigen::Matrix<double, kNumJoints, 1>;
  const Eigen::Matrix3d target_rot = target.rotation();
  const double lambda2 = options.damping * options.damping;
  for (int iter = 0;; ++iter) {
    const Pose tool = forward_kinematics(chain, result.angles);
    Eigen::Matrix<double, 6, 1> err;
    err.head<3>() = target.position() - tool.position();
    err.tail<3>() = rotation_vector(target_rot * tool.rotation().transpose());
    result.iterations = iter;
    result.position_error = err.head<3>().norm();
    result.orientation_error = err.tail<3>().norm();
    if (result.position_error < options.position_tolerance &&
        result.orientation_error < options.orientation_tolerance) {
      result.status = IkStatus::Converged;
      return result;
    }
    if (iter >= options.max_iterations) break;

    const Jacobian jac = jacobian(chain, result.angles);
    const Eigen::Matrix<double, 6, 6> damped =
        jac * jac.transpose() + lambda2 * Eigen::Matrix<double, 6, 6>::Identity();
    Vector7d step = jac.transpose() * damped.ldlt().solve(err);
    const double largest = step.cwiseAbs().maxCoeff();
    if (largest > options.max_step) step *= options.max_step / largest;
    for (std::size_t i = 0; i < kNumJoints; ++i) result.angles[i] += step(static_cast<Eigen::Index>(i));
    result.angles = chain.clamp(result.angles);
  }
  result.status = IkStatus::NoConvergence;
  return result;
}

namespace {

/// Trapezoidal profile over a path of length `total` with unit peak speed
/// and acceleration `accel`.
struct Trapezoid {
  double total;
  double accel;
  double cruise_speed;
  double ramp_time;
  double duration;

  Trapezoid(double length, double acceleration) : total(length), accel(acceleration) {
    if (total * accel >= 1.0) {
      cruise_speed = 1.0;
      ramp_time = 1.0 / accel;
      duration = total + ramp_time;
    } else {
      ramp_time = std::sqrt(total / accel);
      cruise_speed = accel * ramp_time;
      duration = 2.0 * ramp_time;
    }
  }

  void sample(double t, double& s, double& sdot) const {
    t = std::clamp(t, 0.0, duration);
    if (t < ramp_time) {
      s = 0.5 * accel * t * t;
      sdot = accel * t;
    } else if (t <= duration - ramp_time) {
      s = 0.5 * accel * ramp_time * ramp_time + cruise_speed * (t - ramp_time);
      sdot = cruise_speed;
    } else {
      const double rem = duration - t;
      s = total - 0.5 * accel * rem * rem;
      sdot = accel * rem;
    }
  }
};

}  // namespace

std::vector<JointState> plan_path(const KinematicChain& chain, const std::vector<JointVector>& waypoints,
                                  double rate, double start_time) {
  if (waypoints.empty()) return {};
  if (!(rate > 0.0)) throw ValidationError("trajectory rate must be positive");

  // Path parameter s is "seconds at full speed": along each segment the
  // slowest joint relative to its limit sets the length.
  std::vector<JointVector> points{waypoints.front()};
  std::vector<double> lengths;
  double accel = std::numeric_limits<double>::infinity();
  for (const auto& j : chain.joints()) accel = std::min(accel, j.max_acceleration / j.max_velocity);
  for (std::size_t k = 1; k < waypoints.size(); ++k) {
    double w = 0.0;
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      w = std::max(w, std::abs(waypoints[k][i] - points.back()[i]) / chain.joints()[i].max_velocity);
    }
    if (w <= 0.0) continue;
    points.push_back(waypoints[k]);
    lengths.push_back(w);
  }

  JointState first;
  first.angles = points.front();
  first.timestamp = start_time;
  if (lengths.empty()) return {first};

  double total = 0.0;
  for (double w : lengths) total += w;
  const Trapezoid profile(total, accel);
  const auto n = static_cast<std::size_t>(std::ceil(profile.duration * rate - 1e-9));
  const double stretched = static_cast<double>(n) / rate;
  const double scale = profile.duration / stretched;

  std::vector<JointState> out;
  out.reserve(n + 1);
  std::size_t seg = 0;
  double seg_start = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / rate;
    double s = 0.0, sdot = 0.0;
    profile.sample(t * scale, s, sdot);
    sdot *= scale;
    if (k == n) s = total;
    while (seg + 1 < lengths.size() && s > seg_start + lengths[seg]) {
      seg_start += lengths[seg];
      ++seg;
    }
    const double frac = std::clamp((s - seg_start) / lengths[seg], 0.0, 1.0);
    JointState js;
    js.timestamp = start_time + t;
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      const double delta = points[seg + 1][i] - points[seg][i];
      js.angles[i] = points[seg][i] + frac * delta;
      js.velocities[i] = delta / lengths[seg] * sdot;
    }
    if (k == n) {
      js.angles = points.back();
      js.velocities.fill(0.0);
    }
    out.push_back(js);
  }
  return out;
}

std::vector<JointState> plan_trajectory(const KinematicChain& chain, const JointVector& from, const JointVector& to,
                                        double rate, double start_time) {
  return plan_path(chain, {from, to}, rate, start_time);
}

Pose top_down_pose(const Pose& object_pose, double half_height, double hover, double engagement) {
  Eigen::Vector3d p = object_pose.position() + Eigen::Vector3d(0.0, 0.0, half_height);
  p.z() += hover > 0.0 ? hover : -engagement;
  const Eigen::Quaterniond q = Eigen::AngleAxisd(object_pose.yaw(), Eigen::Vector3d::UnitZ()) *
                               Eigen::AngleAxisd(M_PI, Eigen::Vector3d::UnitX());
  return Pose(p, q);
}

}  // namespace teleop
