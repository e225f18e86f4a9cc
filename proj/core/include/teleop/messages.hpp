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

#include <nlohmann/json.hpp>

#include "teleop/settle.hpp"
#include "teleop/task_executor.hpp"

namespace teleop::msg {

using nlohmann::json;

json to_json(const Support& support);
Support support_from_json(const json& value, const std::string& path);

json to_json(const TaskRequest& request);
TaskRequest task_request_from_json(const json& value);

json to_json(const ExecutionReport& report);
ExecutionReport execution_report_from_json(const json& value);

json to_json(const SettleResult& result);
SettleResult settle_result_from_json(const json& value);

/// object_poses topic payload.
json object_poses(const SceneState& scene);
/// GetScene payload: the scene file fields plus live joints and ghosts.
json scene_state(const SceneState& scene);

}  // namespace teleop::msg
