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
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace teleop {

enum class ControlMode { HSI, EE };

std::string to_string(ControlMode mode);
ControlMode control_mode_from_string(std::string_view text);

struct MetricsRecord {
  std::string task;
  double completion_time = 0.0;
  double interaction_time = 0.0;
  bool success = false;
  ControlMode mode = ControlMode::HSI;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

/// Timestamps (scene clock) gathered during one trial. Only the first
/// occurrence of each "first_" event is kept.
struct TrialEvents {
  std::string task;
  ControlMode mode = ControlMode::HSI;
  std::optional<double> first_ghost_grab;
  std::optional<double> execute_click;
  std::optional<double> execution_finished;
  std::optional<double> first_target_pose;
  std::optional<double> task_complete;
  bool collision = false;
  /// Executor or service failure other than a collision.
  bool failed = false;

  void ghost_grab(double t) { if (!first_ghost_grab) first_ghost_grab = t; }
  void target_pose(double t) { if (!first_target_pose) first_target_pose = t; }
};

/// HSI: interaction = first ghost grab to Execute, completion = first ghost
/// grab to executor finish. EE: both span first target_pose to the
/// task-complete marker. Throws ValidationError when a needed event is
/// missing or out of order.
MetricsRecord record_metrics(const TrialEvents& events);

nlohmann::json to_json(const MetricsRecord& record);
MetricsRecord metrics_from_json(const nlohmann::json& value);

/// Appends one line to a newline-delimited file, creating it if needed.
void append_metrics(const std::filesystem::path& path, const MetricsRecord& record);

}  // namespace teleop
