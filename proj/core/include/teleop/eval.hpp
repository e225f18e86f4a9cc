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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "teleop/arm_model.hpp"
#include "teleop/client.hpp"
#include "teleop/metrics.hpp"
#include "teleop/pose.hpp"
#include "teleop/scene.hpp"
#include "teleop/settle.hpp"

namespace teleop {

struct GoalSpec {
  std::string instance_id;
  Pose pose;
  /// Stacking goal: the object must end up resting on this instance.
  std::optional<std::string> on_object;
};

struct TaskFixture {
  std::string name;   // file stem
  std::string label;  // Task1, Task2, Task3
  std::filesystem::path scene;
  double tolerance = 0.01;
  /// Ordered; one move per goal.
  std::vector<GoalSpec> goals;
  /// Lowers the first EE descent into the desktop (negative test).
  bool ee_collide = false;
};

/// Throws ParseError/ValidationError. Relative scene paths resolve against
/// the fixture file's directory.
TaskFixture load_fixture(const std::filesystem::path& path);
/// All *.json fixtures in `dir`, sorted by name.
std::vector<TaskFixture> load_fixtures(const std::filesystem::path& dir);

enum class OperatorAction { GhostGrab, GhostMove, GhostRelease, Execute, Target, Grasp, Release, TaskComplete };

std::string to_string(OperatorAction action);

struct OperatorEvent {
  double time = 0.0;  // s after the trial starts
  OperatorAction action = OperatorAction::Target;
  std::string instance_id;
  Pose pose;
};

struct ScriptedOperator {
  ControlMode mode = ControlMode::HSI;
  std::vector<OperatorEvent> events;
};

/// Throws ValidationError unless timestamps strictly increase.
void validate_operator(const ScriptedOperator& op);

/// Ghost drag per goal (grab, two moves, release just above the goal),
/// then one Execute.
ScriptedOperator hsi_operator(const TaskFixture& fixture, const SceneState& initial);
/// 20 Hz tool-pose stream through hover, grasp and place poses for each
/// goal with Grasp/Release calls, then the task-complete marker.
ScriptedOperator ee_operator(const TaskFixture& fixture, const SceneState& initial, const KinematicChain& chain);

struct RunResult {
  MetricsRecord record;  // success already folded with goal checks
  bool server_success = false;
  bool goals_met = false;
  std::map<std::string, Pose> final_poses;
  std::map<std::string, Support> supports;
  std::vector<std::string> diagnostics;
};

/// Drives a running server through `client`. Protocol errors propagate.
RunResult run_fixture(Client& client, const TaskFixture& fixture, const ScriptedOperator& op);

/// Starts a simulated-clock server on a free local port for the fixture's
/// scene, connects, and runs the scripted operator for `mode`.
RunResult run_fixture(const TaskFixture& fixture, ControlMode mode);

struct ReportRow {
  std::string task;
  ControlMode mode = ControlMode::HSI;
  std::size_t runs = 0;
  double success_rate = 0.0;
  double completion_mean = 0.0, completion_min = 0.0, completion_max = 0.0;
  double interaction_mean = 0.0, interaction_min = 0.0, interaction_max = 0.0;
};

/// One row per task x mode, sorted by task then mode.
std::vector<ReportRow> summarize(const std::vector<MetricsRecord>& records);
std::string report_csv(const std::vector<ReportRow>& rows);
/// Whitespace-separated series for plotting: task mode metric value.
std::string report_bars(const std::vector<ReportRow>& rows);
/// Writes `out` (CSV) and `out` with a .bars.dat suffix.
void write_report(const std::vector<MetricsRecord>& records, const std::filesystem::path& out);

}  // namespace teleop
