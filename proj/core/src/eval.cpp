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

#include "teleop/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "teleop/error.hpp"
#include "teleop/json_codec.hpp"
#include "teleop/messages.hpp"
#include "teleop/point_cloud.hpp"
#include "teleop/scene_io.hpp"
#include "teleop/server.hpp"
#include "teleop/session.hpp"

namespace teleop {

using nlohmann::json;

namespace {

constexpr double kStreamPeriod = 0.05;      // s between streamed targets
constexpr double kStreamSpeed = 0.10;       // m/s of the streamed target
constexpr double kStreamTurnRate = 0.5;     // rad/s of the streamed target
constexpr double kSettleDwell = 1.0;        // s to let the arm catch up
constexpr double kGripperDwell = 1.2;       // s reserved for a gripper service
constexpr double kGhostDropHeight = 0.005;  // m above the goal where ghosts are let go
constexpr double kPlaceClearance = 0.002;   // m above the goal where EE releases
constexpr double kTransitMargin = 0.05;

Pose raised(const Pose& p, double dz) {
  Pose out = p;
  out.set_position(p.position() + Eigen::Vector3d(0.0, 0.0, dz));
  return out;
}

Pose lerp(const Pose& a, const Pose& b, double s) {
  return Pose(a.position() + s * (b.position() - a.position()), a.orientation().slerp(s, b.orientation()));
}

class EeScript {
 public:
  explicit EeScript(Pose start) : tool_(std::move(start)) {}

  void stream_to(const Pose& goal) {
    const double duration = std::max(position_distance(tool_, goal) / kStreamSpeed,
                                     orientation_distance(tool_, goal) / kStreamTurnRate);
    const int n = std::max(1, static_cast<int>(std::ceil(duration / kStreamPeriod)));
    for (int k = 1; k <= n; ++k) {
      t_ += kStreamPeriod;
      events_.push_back({t_, OperatorAction::Target, {}, lerp(tool_, goal, static_cast<double>(k) / n)});
    }
    tool_ = goal;
    t_ += kSettleDwell;
  }

  void action(OperatorAction a) {
    t_ += kStreamPeriod;
    events_.push_back({t_, a, {}, tool_});
    t_ += kGripperDwell;
  }

  const Pose& tool() const { return tool_; }
  std::vector<OperatorEvent> take() { return std::move(events_); }

 private:
  Pose tool_;
  double t_ = 0.0;
  std::vector<OperatorEvent> events_;
};

double half_height(const SceneState& scene, const std::string& id) {
  return scene.model_of(scene.object(id)).half_extents.z();
}

}  // namespace

std::string to_string(OperatorAction action) {
  switch (action) {
    case OperatorAction::GhostGrab: return "ghost_grab";
    case OperatorAction::GhostMove: return "ghost_move";
    case OperatorAction::GhostRelease: return "ghost_release";
    case OperatorAction::Execute: return "execute";
    case OperatorAction::Target: return "target_pose";
    case OperatorAction::Grasp: return "grasp";
    case OperatorAction::Release: return "release";
    case OperatorAction::TaskComplete: return "task_complete";
  }
  return "?";
}

TaskFixture load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open fixture " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  const json value = codec::parse_text(text.str());
  TaskFixture f;
  f.name = path.stem().string();
  f.label = codec::string(codec::member(value, "label", ""), "/label");
  f.scene = path.parent_path() / codec::string(codec::member(value, "scene", ""), "/scene");
  if (const json* t = codec::optional_member(value, "tolerance")) f.tolerance = codec::number(*t, "/tolerance");
  if (!(f.tolerance > 0.0)) throw ValidationError("fixture tolerance must be positive");
  if (const json* c = codec::optional_member(value, "ee_collide")) {
    if (!c->is_boolean()) throw ParseError("expected a boolean", 0, "/ee_collide");
    f.ee_collide = c->get<bool>();
  }
  const json& goals = codec::member(value, "goals", "");
  if (!goals.is_array() || goals.empty()) throw ParseError("expected a non-empty array", 0, "/goals");
  for (std::size_t i = 0; i < goals.size(); ++i) {
    const std::string p = "/goals/" + std::to_string(i);
    GoalSpec g;
    g.instance_id = codec::string(codec::member(goals[i], "instance_id", p), p + "/instance_id");
    g.pose = codec::pose(codec::member(goals[i], "pose", p), p + "/pose");
    if (g.pose.tilt() > 1e-6) throw ValidationError(p + ": goal pose must be upright");
    if (const json* o = codec::optional_member(goals[i], "on_object")) g.on_object = codec::string(*o, p + "/on_object");
    f.goals.push_back(std::move(g));
  }
  return f;
}

std::vector<TaskFixture> load_fixtures(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("fixture directory " + dir.string() + " not found");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<TaskFixture> out;
  for (const auto& f : files) out.push_back(load_fixture(f));
  return out;
}

void validate_operator(const ScriptedOperator& op) {
  for (std::size_t i = 1; i < op.events.size(); ++i) {
    if (!(op.events[i].time > op.events[i - 1].time)) {
      throw ValidationError(fmt::format("operator event {} at {} s does not follow {} s", i, op.events[i].time,
                                        op.events[i - 1].time));
    }
  }
}

ScriptedOperator hsi_operator(const TaskFixture& fixture, const SceneState& initial) {
  ScriptedOperator op{ControlMode::HSI, {}};
  double t = 0.5;
  for (const auto& goal : fixture.goals) {
    const Pose start = initial.object(goal.instance_id).actual_pose;
    const Pose lifted_start = raised(start, 0.1);
    const Pose drop = raised(goal.pose, kGhostDropHeight);
    op.events.push_back({t, OperatorAction::GhostGrab, goal.instance_id, start});
    op.events.push_back({t + 0.6, OperatorAction::GhostMove, goal.instance_id, lifted_start});
    op.events.push_back({t + 1.2, OperatorAction::GhostMove, goal.instance_id, raised(goal.pose, 0.1)});
    op.events.push_back({t + 1.8, OperatorAction::GhostRelease, goal.instance_id, drop});
    t += 2.5;
  }
  op.events.push_back({t + 0.5, OperatorAction::Execute, {}, Pose()});
  return op;
}

ScriptedOperator ee_operator(const TaskFixture& fixture, const SceneState& initial, const KinematicChain& chain) {
  EeScript script(forward_kinematics(chain, initial.joints.angles));
  std::map<std::string, Pose> poses;
  for (const auto& o : initial.objects) poses[o.instance_id] = o.actual_pose;

  bool first = true;
  for (const auto& goal : fixture.goals) {
    const double hh = half_height(initial, goal.instance_id);
    const Pose object = poses.at(goal.instance_id);
    const Pose hover_pick = top_down_pose(object, hh, kHoverHeight);
    Pose grasp = top_down_pose(object, hh, 0.0);
    if (fixture.ee_collide && first) grasp = raised(grasp, -0.05);
    const Pose offset = grasp.inverse() * object;
    const Pose place = raised(goal.pose, kPlaceClearance) * offset.inverse();
    Pose hover_place = place;
    hover_place.set_position(place.position() + Eigen::Vector3d(0.0, 0.0, kHoverHeight));
    const double transit = std::max({script.tool().position().z(), hover_pick.position().z(),
                                     hover_place.position().z()}) + kTransitMargin;

    Pose up = script.tool();
    up.set_position(Eigen::Vector3d(up.position().x(), up.position().y(), transit));
    script.stream_to(up);
    Pose over_pick = hover_pick;
    over_pick.set_position(Eigen::Vector3d(hover_pick.position().x(), hover_pick.position().y(), transit));
    script.stream_to(over_pick);
    script.stream_to(hover_pick);
    script.stream_to(grasp);
    script.action(OperatorAction::Grasp);
    script.stream_to(over_pick);
    Pose over_place = hover_place;
    over_place.set_position(Eigen::Vector3d(hover_place.position().x(), hover_place.position().y(), transit));
    script.stream_to(over_place);
    script.stream_to(hover_place);
    script.stream_to(place);
    script.action(OperatorAction::Release);
    script.stream_to(hover_place);
    poses[goal.instance_id] = goal.pose;
    first = false;
  }
  script.action(OperatorAction::TaskComplete);
  return ScriptedOperator{ControlMode::EE, script.take()};
}

RunResult run_fixture(Client& client, const TaskFixture& fixture, const ScriptedOperator& op) {
  validate_operator(op);
  RunResult result;
  client.call("ResetScene");
  const json scene0 = client.call("GetScene");
  std::map<std::string, Pose> initial_poses;
  for (const auto& inst : scene0.at("instances")) {
    initial_poses[inst.at("instance_id").get<std::string>()] = codec::pose(inst.at("pose"), "/pose");
  }

  const json begin = client.call("BeginTrial", {{"task", fixture.label}, {"mode", to_string(op.mode)}});
  const double t0 = begin.at("sim_time").get<double>();
  double now = t0;
  TaskRequest draft;
  bool server_ok = true;

  for (const auto& ev : op.events) {
    const double due = t0 + ev.time;
    if (due > now + 1e-9) {
      now = client.call("AdvanceClock", {{"seconds", due - now}}).at("sim_time").get<double>();
    }
    switch (ev.action) {
      case OperatorAction::GhostGrab:
      case OperatorAction::GhostMove:
        client.call("SetGhostPose", {{"instance_id", ev.instance_id},
                                     {"pose", codec::to_json(ev.pose)},
                                     {"phase", ev.action == OperatorAction::GhostGrab ? "grab" : "move"}});
        break;
      case OperatorAction::GhostRelease: {
        const json preview =
            client.call("SettlePreview", {{"instance_id", ev.instance_id}, {"pose", codec::to_json(ev.pose)}});
        const json settled = preview.at("final_pose");
        client.call("SetGhostPose", {{"instance_id", ev.instance_id}, {"pose", settled}, {"phase", "release"}});
        draft.moves.push_back(
            {ev.instance_id, initial_poses.at(ev.instance_id), codec::pose(settled, "/final_pose")});
        break;
      }
      case OperatorAction::Execute: {
        const json r = client.call("ExecuteTask", msg::to_json(draft));
        const ExecutionReport report = msg::execution_report_from_json(r);
        server_ok = server_ok && report.success;
        for (const auto& m : report.moves) {
          if (m.outcome != MoveOutcome::Success) {
            result.diagnostics.push_back(m.instance_id + ": " + to_string(m.outcome) + " " + m.detail);
          }
        }
        now = report.end_time;
        break;
      }
      case OperatorAction::Target:
        client.publish("target_pose", {{"pose", codec::to_json(ev.pose)}});
        break;
      case OperatorAction::Grasp: {
        const json r = client.call("GraspService");
        if (!r.at("success").get<bool>()) result.diagnostics.push_back("grasp closed on nothing");
        now = client.call("GetScene").at("sim_time").get<double>();
        break;
      }
      case OperatorAction::Release: {
        client.call("ReleaseService");
        now = client.call("GetScene").at("sim_time").get<double>();
        break;
      }
      case OperatorAction::TaskComplete:
        client.call("TaskComplete");
        break;
    }
  }
  const MetricsRecord server_record = metrics_from_json(client.call("EndTrial"));
  server_ok = server_ok && server_record.success;

  const json final_scene = client.call("GetScene");
  for (const auto& inst : final_scene.at("instances")) {
    result.final_poses[inst.at("instance_id").get<std::string>()] = codec::pose(inst.at("pose"), "/pose");
  }
  bool goals_met = true;
  for (const auto& goal : fixture.goals) {
    const Pose& actual = result.final_poses.at(goal.instance_id);
    const double err = position_distance(actual, goal.pose);
    if (err > fixture.tolerance) {
      goals_met = false;
      result.diagnostics.push_back(fmt::format("{} is {:.4f} m from its goal", goal.instance_id, err));
    }
    const json support = client.call(
        "SettlePreview",
        {{"instance_id", goal.instance_id}, {"pose", codec::to_json(actual)}, {"colliders", "actual"}});
    const Support s = msg::support_from_json(support.at("support"), "/support");
    result.supports[goal.instance_id] = s;
    if (goal.on_object && !(s.kind == SupportKind::OnObject && s.instance_id == *goal.on_object)) {
      goals_met = false;
      result.diagnostics.push_back(goal.instance_id + " rests on " + to_string(s) + ", expected OnObject(" +
                                   *goal.on_object + ")");
    }
  }
  result.server_success = server_ok;
  result.goals_met = goals_met;
  result.record = server_record;
  result.record.success = server_ok && goals_met;
  return result;
}

RunResult run_fixture(const TaskFixture& fixture, ControlMode mode) {
  const SceneFile file = load_scene_file(fixture.scene);
  KinematicChain chain = file.chain ? load_chain(*file.chain) : kinova_gen3_chain();
  std::optional<PointCloud> cloud;
  if (file.cloud) cloud = read_point_cloud(*file.cloud);

  SessionOptions options;
  options.detect = file.detect_params;
  options.scene_path = fixture.scene;
  Session session(file.scene, std::move(cloud), chain, options);
  session.start();
  ServerOptions server_options;
  server_options.host = "127.0.0.1";
  server_options.port = 0;
  Server server(session, server_options);
  server.start();

  const ScriptedOperator op =
      mode == ControlMode::HSI ? hsi_operator(fixture, file.scene) : ee_operator(fixture, file.scene, chain);
  RunResult result;
  {
    Client client("127.0.0.1", server.port());
    result = run_fixture(client, fixture, op);
  }
  server.stop();
  session.stop();
  for (const auto& d : result.diagnostics) spdlog::info("{} {}: {}", fixture.name, to_string(mode), d);
  return result;
}

std::vector<ReportRow> summarize(const std::vector<MetricsRecord>& records) {
  std::map<std::pair<std::string, int>, std::vector<const MetricsRecord*>> groups;
  for (const auto& r : records) groups[{r.task, static_cast<int>(r.mode)}].push_back(&r);
  std::vector<ReportRow> rows;
  for (const auto& [key, group] : groups) {
    ReportRow row;
    row.task = key.first;
    row.mode = static_cast<ControlMode>(key.second);
    row.runs = group.size();
    row.completion_min = row.interaction_min = std::numeric_limits<double>::infinity();
    row.completion_max = row.interaction_max = -std::numeric_limits<double>::infinity();
    std::size_t ok = 0;
    for (const MetricsRecord* r : group) {
      ok += r->success ? 1 : 0;
      row.completion_mean += r->completion_time;
      row.interaction_mean += r->interaction_time;
      row.completion_min = std::min(row.completion_min, r->completion_time);
      row.completion_max = std::max(row.completion_max, r->completion_time);
      row.interaction_min = std::min(row.interaction_min, r->interaction_time);
      row.interaction_max = std::max(row.interaction_max, r->interaction_time);
    }
    const auto n = static_cast<double>(group.size());
    row.completion_mean /= n;
    row.interaction_mean /= n;
    row.success_rate = static_cast<double>(ok) / n;
    rows.push_back(row);
  }
  return rows;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out =
      "task,mode,runs,success_rate,completion_mean,completion_min,completion_max,"
      "interaction_mean,interaction_min,interaction_max\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{:.4f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f}\n", r.task, to_string(r.mode),
                       r.runs, r.success_rate, r.completion_mean, r.completion_min, r.completion_max,
                       r.interaction_mean, r.interaction_min, r.interaction_max);
  }
  return out;
}

std::string report_bars(const std::vector<ReportRow>& rows) {
  std::string out = "# task mode metric value\n";
  for (const auto& r : rows) {
    const std::string mode = to_string(r.mode);
    out += fmt::format("{} {} completion_time {:.3f}\n", r.task, mode, r.completion_mean);
    out += fmt::format("{} {} interaction_time {:.3f}\n", r.task, mode, r.interaction_mean);
    out += fmt::format("{} {} success_rate {:.4f}\n", r.task, mode, r.success_rate);
  }
  return out;
}

void write_report(const std::vector<MetricsRecord>& records, const std::filesystem::path& out) {
  const auto rows = summarize(records);
  std::error_code ec;
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path(), ec);
  std::ofstream csv(out);
  if (!csv) throw Error("cannot write report " + out.string());
  csv << report_csv(rows);
  std::filesystem::path bars = out;
  bars.replace_extension(".bars.dat");
  std::ofstream dat(bars);
  if (!dat) throw Error("cannot write report " + bars.string());
  dat << report_bars(rows);
}

}  // namespace teleop
