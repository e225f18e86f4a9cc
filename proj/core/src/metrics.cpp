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

#include "teleop/metrics.hpp"

#include <fstream>

#include "teleop/error.hpp"
#include "teleop/json_codec.hpp"

namespace teleop {

using nlohmann::json;

std::string to_string(ControlMode mode) { return mode == ControlMode::HSI ? "HSI" : "EE"; }

ControlMode control_mode_from_string(std::string_view text) {
  if (text == "HSI" || text == "hsi") return ControlMode::HSI;
  if (text == "EE" || text == "ee") return ControlMode::EE;
  throw ValidationError("unknown control mode '" + std::string(text) + "'");
}

MetricsRecord record_metrics(const TrialEvents& events) {
  MetricsRecord record;
  record.task = events.task;
  record.mode = events.mode;
  record.success = !events.collision && !events.failed;
  if (events.mode == ControlMode::HSI) {
    if (!events.first_ghost_grab) throw ValidationError("HSI trial has no ghost grab");
    if (!events.execute_click) throw ValidationError("HSI trial has no Execute");
    if (!events.execution_finished) throw ValidationError("HSI trial has no finished execution");
    const double start = *events.first_ghost_grab;
    if (*events.execute_click < start || *events.execution_finished < *events.execute_click) {
      throw ValidationError("HSI trial events out of order");
    }
    record.interaction_time = *events.execute_click - start;
    record.completion_time = *events.execution_finished - start;
  } else {
    if (!events.first_target_pose) throw ValidationError("EE trial has no target_pose");
    if (!events.task_complete) throw ValidationError("EE trial has no task-complete marker");
    if (*events.task_complete < *events.first_target_pose) throw ValidationError("EE trial events out of order");
    record.completion_time = *events.task_complete - *events.first_target_pose;
    record.interaction_time = record.completion_time;
  }
  return record;
}

json to_json(const MetricsRecord& record) {
  return {{"task", record.task},
          {"completion_time", record.completion_time},
          {"interaction_time", record.interaction_time},
          {"outcome", record.success ? "success" : "failure"},
          {"mode", to_string(record.mode)}};
}

MetricsRecord metrics_from_json(const json& value) {
  MetricsRecord r;
  r.task = codec::string(codec::member(value, "task", ""), "/task");
  r.completion_time = codec::number(codec::member(value, "completion_time", ""), "/completion_time");
  r.interaction_time = codec::number(codec::member(value, "interaction_time", ""), "/interaction_time");
  const std::string outcome = codec::string(codec::member(value, "outcome", ""), "/outcome");
  if (outcome != "success" && outcome != "failure") throw ParseError("expected success or failure", 0, "/outcome");
  r.success = outcome == "success";
  r.mode = control_mode_from_string(codec::string(codec::member(value, "mode", ""), "/mode"));
  return r;
}

void append_metrics(const std::filesystem::path& path, const MetricsRecord& record) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot open metrics file " + path.string());
  out << to_json(record).dump() << '\n';
  if (!out) throw Error("cannot write metrics file " + path.string());
}

}  // namespace teleop
