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

#include "teleop/pose.hpp"

#include <algorithm>
#include <cmath>

#include "teleop/error.hpp"

namespace teleop {

namespace {

Eigen::Quaterniond normalized(const Eigen::Quaterniond& q) {
  const double n = q.norm();
  if (!std::isfinite(n) || n < 1e-12) {
    throw ValidationError("quaternion is not normalizable");
  }
  Eigen::Quaterniond out(q.coeffs() / n);
  return out;
}

void check_position(const Eigen::Vector3d& p) {
  if (!p.allFinite()) throw ValidationError("pose position is not finite");
}

}  // namespace

Pose::Pose() : position_(Eigen::Vector3d::Zero()), orientation_(Eigen::Quaterniond::Identity()) {}

Pose::Pose(const Eigen::Vector3d& position, const Eigen::Quaterniond& orientation)
    : position_(position), orientation_(normalized(orientation)) {
  check_position(position_);
}

Pose::Pose(double px, double py, double pz, double qw, double qx, double qy, double qz)
    : Pose(Eigen::Vector3d(px, py, pz), Eigen::Quaterniond(qw, qx, qy, qz)) {}

Pose Pose::from_isometry(const Eigen::Isometry3d& iso) {
  return Pose(iso.translation(), Eigen::Quaterniond(iso.rotation()));
}

Pose Pose::from_yaw(const Eigen::Vector3d& position, double yaw) {
  return Pose(position, Eigen::Quaterniond(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ())));
}

Eigen::Isometry3d Pose::isometry() const {
  Eigen::Isometry3d iso = Eigen::Isometry3d::Identity();
  iso.linear() = rotation();
  iso.translation() = position_;
  return iso;
}

void Pose::set_position(const Eigen::Vector3d& p) {
  check_position(p);
  position_ = p;
}

void Pose::set_orientation(const Eigen::Quaterniond& q) { orientation_ = normalized(q); }

Pose Pose::operator*(const Pose& rhs) const {
  return Pose(position_ + orientation_ * rhs.position_, orientation_ * rhs.orientation_);
}

Eigen::Vector3d Pose::operator*(const Eigen::Vector3d& point) const {
  return position_ + orientation_ * point;
}

Pose Pose::inverse() const {
  const Eigen::Quaterniond inv = orientation_.conjugate();
  return Pose(-(inv * position_), inv);
}

double Pose::yaw() const {
  const Eigen::Vector3d x = orientation_ * Eigen::Vector3d::UnitX();
  if (std::hypot(x.x(), x.y()) < 1e-9) {
    // Body x points straight up or down; fall back to the body y-axis.
    const Eigen::Vector3d y = orientation_ * Eigen::Vector3d::UnitY();
    return std::atan2(y.y(), y.x()) - M_PI / 2.0;
  }
  return std::atan2(x.y(), x.x());
}

Pose Pose::upright() const { return from_yaw(position_, yaw()); }

double Pose::tilt() const {
  const Eigen::Vector3d z = orientation_ * Eigen::Vector3d::UnitZ();
  return std::acos(std::clamp(z.z(), -1.0, 1.0));
}

Eigen::Vector3d rotation_vector(const Eigen::Matrix3d& rotation) {
  const Eigen::AngleAxisd aa(rotation);
  return aa.axis() * aa.angle();
}

double position_distance(const Pose& a, const Pose& b) {
  return (a.position() - b.position()).norm();
}

double orientation_distance(const Pose& a, const Pose& b) {
  return a.orientation().angularDistance(b.orientation());
}

}  // namespace teleop
