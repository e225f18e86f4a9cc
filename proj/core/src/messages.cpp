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

#include "teleop/messages.hpp"

#include "teleop/error.hpp"
#include "teleop/json_codec.hpp"
#include "teleop/scene_io.hpp"

namespace teleop::msg {

namespace {

MoveOutcome outcome_from_string(const std::string& text, const std::string& path) {
  for (MoveOutcome o : {MoveOutcome::Success, MoveOutcome::Collision, MoveOutcome::GraspFailure,
                        MoveOutcome::IkFailure}) {
    if (teleop::to_string(o) == text) return o;
  }
  throw ParseError("unknown move outcome '" + text + "'", 0, path);
}

bool boolean(const json& value, const std::string& path) {
  if (!value.is_boolean()) throw ParseError("expected a boolean", 0, path);
  return value.get<bool>();
}

}  // namespace

json to_json(const Support& support) {
  if (support.kind == SupportKind::Desktop) return {{"kind", "desktop"}};
  return {{"kind", "on_object"}, {"instance_id", support.instance_id}};
}

Support support_from_json(const json& value, const std::string& path) {
  const std::string kind = codec::string(codec::member(value, "kind", path), path + "/kind");
  if (kind == "desktop") return Support{};
  if (kind == "on_object") {
    return Support{SupportKind::OnObject,
                   codec::string(codec::member(value, "instance_id", path), path + "/instance_id")};
  }
  throw ParseError("unknown support kind '" + kind + "'", 0, path + "/kind");
}

json to_json(const TaskRequest& request) {
  json moves = json::array();
  for (const auto& m : request.moves) {
    moves.push_back({{"instance_id", m.instance_id},
                     {"initial_pose", codec::to_json(m.initial_pose)},
                     {"target_pose", codec::to_json(m.target_pose)}});
  }
  return {{"moves", std::move(moves)}};
}

TaskRequest task_request_from_json(const json& value) {
  const json& moves = codec::member(value, "moves", "");
  if (!moves.is_array()) throw ParseError("expected an array", 0, "/moves");
  TaskRequest request;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const std::string path = "/moves/" + std::to_string(i);
    const json& m = moves[i];
    request.moves.push_back(MoveRequest{
        codec::string(codec::member(m, "instance_id", path), path + "/instance_id"),
        codec::pose(codec::member(m, "initial_pose", path), path + "/initial_pose"),
        codec::pose(codec::member(m, "target_pose", path), path + "/target_pose")});
  }
  return request;
}

json to_json(const ExecutionReport& report) {
  json moves = json::array();
  for (const auto& m : report.moves) {
    json phases = json::array();
    for (const auto& p : m.phases) phases.push_back({{"phase", p.phase}, {"time", p.time}});
    json move = {{"instance_id", m.instance_id},
                 {"outcome", teleop::to_string(m.outcome)},
                 {"phases", std::move(phases)},
                 {"detail", m.detail}};
    if (m.final_pose) move["final_pose"] = codec::to_json(*m.final_pose);
    if (m.support) move["support"] = to_json(*m.support);
    moves.push_back(std::move(move));
  }
  return {{"moves", std::move(moves)},
          {"success", report.success},
          {"aborted", report.aborted},
          {"start_time", report.start_time},
          {"end_time", report.end_time}};
}

ExecutionReport execution_report_from_json(const json& value) {
  ExecutionReport report;
  report.success = boolean(codec::member(value, "success", ""), "/success");
  report.aborted = boolean(codec::member(value, "aborted", ""), "/aborted");
  report.start_time = codec::number(codec::member(value, "start_time", ""), "/start_time");
  report.end_time = codec::number(codec::member(value, "end_time", ""), "/end_time");
  const json& moves = codec::member(value, "moves", "");
  if (!moves.is_array()) throw ParseError("expected an array", 0, "/moves");
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const std::string path = "/moves/" + std::to_string(i);
    const json& m = moves[i];
    MoveReport r;
    r.instance_id = codec::string(codec::member(m, "instance_id", path), path + "/instance_id");
    r.outcome = outcome_from_string(codec::string(codec::member(m, "outcome", path), path + "/outcome"),
                                    path + "/outcome");
    r.detail = codec::string(codec::member(m, "detail", path), path + "/detail");
    const json& phases = codec::member(m, "phases", path);
    for (std::size_t k = 0; k < phases.size(); ++k) {
      const std::string pp = path + "/phases/" + std::to_string(k);
      r.phases.push_back({codec::string(codec::member(phases[k], "phase", pp), pp + "/phase"),
                          codec::number(codec::member(phases[k], "time", pp), pp + "/time")});
    }
    if (const json* p = codec::optional_member(m, "final_pose")) r.final_pose = codec::pose(*p, path + "/final_pose");
    if (const json* s = codec::optional_member(m, "support")) r.support = support_from_json(*s, path + "/support");
    report.moves.push_back(std::move(r));
  }
  return report;
}

json to_json(const SettleResult& result) {
  json trace = json::array();
  for (const auto& p : result.trace) trace.push_back({{"time", p.time}, {"pose", codec::to_json(p.pose)}});
  return {{"final_pose", codec::to_json(result.final_pose)},
          {"support", to_json(result.support)},
          {"stable", result.stable},
          {"trace", std::move(trace)}};
}

SettleResult settle_result_from_json(const json& value) {
  SettleResult r;
  r.final_pose = codec::pose(codec::member(value, "final_pose", ""), "/final_pose");
  r.support = support_from_json(codec::member(value, "support", ""), "/support");
  r.stable = boolean(codec::member(value, "stable", ""), "/stable");
  const json& trace = codec::member(value, "trace", "");
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const std::string pp = "/trace/" + std::to_string(k);
    r.trace.push_back({codec::number(codec::member(trace[k], "time", pp), pp + "/time"),
                       codec::pose(codec::member(trace[k], "pose", pp), pp + "/pose")});
  }
  return r;
}

json object_poses(const SceneState& scene) {
  json objects = json::array();
  for (const auto& o : scene.objects) {
    objects.push_back(
        {{"instance_id", o.instance_id}, {"model_id", o.model_id}, {"pose", codec::to_json(o.actual_pose)}});
  }
  return {{"stamp", scene.sim_time}, {"objects", std::move(objects)}};
}

json scene_state(const SceneState& scene) {
  json out = scene_to_json(scene);
  out["joints"] = codec::to_json(scene.joints);
  return out;
}

}  // namespace teleop::msg
