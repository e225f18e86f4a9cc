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

#include <Eigen/Geometry>

namespace teleop {

/// Rigid 6-DoF transform: position in meters and a unit quaternion.
/// Every constructor normalizes the quaternion; non-finite input throws
/// ValidationError.
class Pose {
 public:
  Pose();
  Pose(const Eigen::Vector3d& position, const Eigen::Quaterniond& orientation);
  Pose(double px, double py, double pz, double qw = 1.0, double qx = 0.0, double qy = 0.0,
       double qz = 0.0);

  static Pose from_isometry(const Eigen::Isometry3d& iso);
  static Pose from_yaw(const Eigen::Vector3d& position, double yaw);

  const Eigen::Vector3d& position() const noexcept { return position_; }
  const Eigen::Quaterniond& orientation() const noexcept { return orientation_; }
  Eigen::Matrix3d rotation() const { return orientation_.toRotationMatrix(); }
  Eigen::Isometry3d isometry() const;

  void set_position(const Eigen::Vector3d& p);
  void set_orientation(const Eigen::Quaterniond& q);

  Pose operator*(const Pose& rhs) const;
  Eigen::Vector3d operator*(const Eigen::Vector3d& point) const;
  Pose inverse() const;

  /// Heading of the body x-axis projected on the world xy-plane.
  double yaw() const;
  /// Same position and yaw with roll and pitch removed.
  Pose upright() const;
  /// Angle between the body z-axis and world z, radians.
  double tilt() const;

  friend bool operator==(const Pose& a, const Pose& b) {
    return a.position_ == b.position_ && a.orientation_.coeffs() == b.orientation_.coeffs();
  }

 private:
  Eigen::Vector3d position_;
  Eigen::Quaterniond orientation_;
};

/// Rotation vector (axis * angle) of `rotation`, angle in [0, pi].
Eigen::Vector3d rotation_vector(const Eigen::Matrix3d& rotation);

/// Positional distance and rotation angle between two poses.
double position_distance(const Pose& a, const Pose& b);
double orientation_distance(const Pose& a, const Pose& b);

}  // namespace teleop
