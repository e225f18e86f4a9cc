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

#include <filesystem>
#include <optional>
#include <string_view>

#include <nlohmann/json.hpp>

#include "teleop/desktop_detect.hpp"
#include "teleop/scene.hpp"

namespace teleop {

/// Everything a scene file can carry besides the state itself.
struct SceneFile {
  SceneState scene;
  /// Point cloud the desktop was (or can be) detected from.
  std::optional<std::filesystem::path> cloud;
  DesktopDetectParams detect_params;
  /// Kinematic chain config; the built-in Gen3 model when absent.
  std::optional<std::filesystem::path> chain;
};

/// Parses scene text. Relative file references resolve against `base_dir`.
/// Syntax errors carry a line number, schema errors a field path; invariant
/// violations throw ValidationError.
SceneFile parse_scene(std::string_view text, const std::filesystem::path& base_dir = {});
SceneFile load_scene_file(const std::filesystem::path& path);
SceneState load_scene(const std::filesystem::path& path);

nlohmann::json scene_to_json(const SceneState& scene);
void save_scene(const std::filesystem::path& path, const SceneState& scene);

nlohmann::json desktop_to_json(const DesktopMesh& mesh);
/// Accepts {"plane": {...}, "boundary": [...]} and triangulates it.
DesktopMesh desktop_from_json(const nlohmann::json& value, const std::string& path = "/desktop");

nlohmann::json model_to_json(const ObjectModel& model);
ObjectModel model_from_json(const nlohmann::json& value, const std::string& path);

}  // namespace teleop
