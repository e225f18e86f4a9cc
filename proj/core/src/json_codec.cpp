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

#include "teleop/json_codec.hpp"

#include <algorithm>
#include <cmath>

#include "teleop/error.hpp"

namespace teleop::codec {

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
    std::string msg = e.what();
    if (const auto pos = msg.find("parse error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ParseError(msg, line);
  }
}

const json& member(const json& object, std::string_view key, const std::string& path) {
  if (!object.is_object()) throw ParseError("expected an object", 0, path);
  const auto it = object.find(key);
  if (it == object.end()) throw ParseError("missing field", 0, path + "/" + std::string(key));
  return *it;
}

const json* optional_member(const json& object, std::string_view key) {
  if (!object.is_object()) return nullptr;
  const auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

double number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ParseError("expected a number", 0, path);
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ParseError("expected a finite number", 0, path);
  return v;
}

std::string string(const json& value, const std::string& path) {
  if (!value.is_string()) throw ParseError("expected a string", 0, path);
  return value.get<std::string>();
}

namespace {

template <std::size_t N>
std::array<double, N> fixed_array(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != N) {
    throw ParseError("expected an array of " + std::to_string(N) + " numbers", 0, path);
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(value[i], path + "/" + std::to_string(i));
  return out;
}

}  // namespace

Eigen::Vector3d vec3(const json& value, const std::string& path) {
  const auto a = fixed_array<3>(value, path);
  return {a[0], a[1], a[2]};
}

JointVector joint_vector(const json& value, const std::string& path) { return fixed_array<kNumJoints>(value, path); }

Pose pose(const json& value, const std::string& path) {
  const auto a = fixed_array<7>(value, path);
  try {
    return Pose(a[0], a[1], a[2], a[3], a[4], a[5], a[6]);
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), 0, path);
  }
}

JointState joint_state(const json& value, const std::string& path) {
  JointState s;
  s.angles = joint_vector(member(value, "position", path), path + "/position");
  s.velocities = joint_vector(member(value, "velocity", path), path + "/velocity");
  s.timestamp = number(member(value, "stamp", path), path + "/stamp");
  return s;
}

json to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const Pose& p) {
  const auto& t = p.position();
  const auto& q = p.orientation();
  return json::array({t.x(), t.y(), t.z(), q.w(), q.x(), q.y(), q.z()});
}

json to_json(const JointVector& q) {
  json out = json::array();
  for (double v : q) out.push_back(v);
  return out;
}

json to_json(const JointState& s) {
  return json{{"position", to_json(s.angles)}, {"velocity", to_json(s.velocities)}, {"stamp", s.timestamp}};
}

}  // namespace teleop::codec
