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

#include <string>
#include <string_view>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "teleop/joint_state.hpp"
#include "teleop/pose.hpp"

namespace teleop::codec {

using nlohmann::json;

/// Parses JSON text; syntax errors become ParseError with a 1-based line.
json parse_text(std::string_view text);

// Typed field access. `path` is a JSON-pointer-like location used in the
// ParseError field diagnostic, e.g. "/instances/2/pose".
const json& member(const json& object, std::string_view key, const std::string& path);
const json* optional_member(const json& object, std::string_view key);
double number(const json& value, const std::string& path);
std::string string(const json& value, const std::string& path);
Eigen::Vector3d vec3(const json& value, const std::string& path);
JointVector joint_vector(const json& value, const std::string& path);
/// [px, py, pz, qw, qx, qy, qz]; the quaternion is normalized.
Pose pose(const json& value, const std::string& path);
JointState joint_state(const json& value, const std::string& path);

json to_json(const Eigen::Vector3d& v);
json to_json(const Pose& pose);
json to_json(const JointVector& q);
json to_json(const JointState& state);

}  // namespace teleop::codec
