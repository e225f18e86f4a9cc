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

#include "teleop/session.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include <spdlog/spdlog.h>

#include "teleop/error.hpp"
#include "teleop/json_codec.hpp"
#include "teleop/messages.hpp"
#include "teleop/scene_io.hpp"
#include "teleop/settle.hpp"

namespace teleop {

using nlohmann::json;

namespace {

std::unique_ptr<Clock> make_clock(bool simulated, double start) {
  if (simulated) return std::make_unique<SimClock>(start);
  return std::make_unique<WallClock>();
}

json placeholder_image(double stamp) {
  return {{"stamp", stamp}, {"width", 4}, {"height", 4}, {"encoding", "mono8"},
          {"data", json::array({0, 32, 64, 96, 32, 64, 96, 128, 64, 96, 128, 160, 96, 128, 160, 192})}};
}

long tick_index(double t, double rate) { return static_cast<long>(std::floor(t * rate + 1e-9)); }

}  // namespace

Session::Session(SceneState scene, std::optional<PointCloud> cloud, KinematicChain chain, SessionOptions options)
    : options_(std::move(options)),
      clock_(make_clock(options_.simulated_clock, scene.sim_time)),
      cloud_(std::move(cloud)),
      initial_(scene),
      scene_(std::move(scene)),
      executor_(std::move(chain), *clock_, options_.executor),
      ee_(executor_, targets_) {
  validate_scene(scene_);
  if (!options_.simulated_clock) {
    // Scene time follows the wall clock, which starts at zero.
    scene_.sim_time = 0.0;
    initial_.sim_time = 0.0;
  }
  executor_.set_observer([this](const SceneState& s) { on_sample(s); });
  snapshot_ = snapshot(scene_);

  owner_services_ = {
      {"ExecuteTask", [this](const json& p) { return execute_task(p); }},
      {"GraspService", [this](const json&) { return grasp_service(); }},
      {"ReleaseService", [this](const json&) { return release_service(); }},
      {"SetGhostPose", [this](const json& p) { return set_ghost_pose(p); }},
      {"ResetGhosts",
       [this](const json&) {
         reset_ghosts(scene_);
         return json::object();
       }},
      {"ResetScene", [this](const json&) { return reset_scene(); }},
      {"AdvanceClock", [this](const json& p) { return advance_clock(p); }},
      {"BeginTrial", [this](const json& p) { return begin_trial(p); }},
      {"TaskComplete", [this](const json&) { return task_complete(); }},
      {"EndTrial", [this](const json&) { return end_trial(); }},
  };

  if (options_.session_log) {
    log_.open(*options_.session_log, std::ios::trunc);
    if (!log_) throw Error("cannot open session log " + options_.session_log->string());
    json header = {{"scene", std::filesystem::absolute(options_.scene_path).string()},
                   {"clock", options_.simulated_clock ? "sim" : "wall"}};
    if (options_.cloud_path) header["cloud"] = std::filesystem::absolute(*options_.cloud_path).string();
    log_ << header.dump() << '\n' << std::flush;
  }
}

Session::~Session() { stop(); }

void Session::start() {
  std::lock_guard lock(queue_mutex_);
  if (owner_.joinable()) return;
  stopping_ = false;
  owner_ = std::thread([this] { owner_loop(); });
}

void Session::stop() {
  {
    std::lock_guard lock(queue_mutex_);
    stopping_ = true;
  }
  queue_cv_.notify_all();
  if (owner_.joinable()) owner_.join();
}

ConnectionId Session::connect(FrameSink sink) {
  std::lock_guard lock(connections_mutex_);
  const ConnectionId id = next_connection_++;
  connections_[id] = Connection{std::move(sink), {}};
  return id;
}

void Session::disconnect(ConnectionId id) {
  std::lock_guard lock(connections_mutex_);
  connections_.erase(id);
}

void Session::reply(ConnectionId id, const Frame& frame) {
  std::lock_guard lock(connections_mutex_);
  if (auto it = connections_.find(id); it != connections_.end()) it->second.sink(frame);
}

void Session::publish(const std::string& topic, const json& payload) {
  const Frame frame = make_topic(topic, payload);
  std::lock_guard lock(connections_mutex_);
  for (auto& [id, conn] : connections_) {
    if (conn.topics.count(topic) != 0) conn.sink(frame);
  }
}

void Session::on_sample(const SceneState& scene) {
  publish("joint_states", codec::to_json(scene.joints));
  const long pose_tick = tick_index(scene.sim_time, options_.object_pose_rate);
  if (pose_tick > last_pose_tick_) {
    last_pose_tick_ = pose_tick;
    publish("object_poses", msg::object_poses(scene));
  }
  const long image_tick = tick_index(scene.sim_time, options_.image_rate);
  if (image_tick > last_image_tick_) {
    last_image_tick_ = image_tick;
    publish("l515_image_raw", placeholder_image(scene.sim_time));
  }
  std::lock_guard lock(snapshot_mutex_);
  snapshot_ = snapshot(scene);
}

void Session::refresh_snapshot() {
  std::lock_guard lock(snapshot_mutex_);
  snapshot_ = snapshot(scene_);
}

SceneSnapshot Session::scene() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

std::vector<MetricsRecord> Session::records() const {
  std::lock_guard lock(records_mutex_);
  return records_;
}

void Session::post(std::function<void()> command) {
  {
    std::lock_guard lock(queue_mutex_);
    queue_.push_back(std::move(command));
  }
  queue_cv_.notify_one();
}

void Session::drain() {
  std::promise<void> done;
  auto future = done.get_future();
  post([&done] { done.set_value(); });
  future.wait();
}

void Session::owner_loop() {
  const auto tick = std::chrono::milliseconds(20);
  while (true) {
    std::function<void()> command;
    {
      std::unique_lock lock(queue_mutex_);
      const auto ready = [this] { return stopping_ || !queue_.empty(); };
      if (options_.simulated_clock) {
        queue_cv_.wait(lock, ready);
      } else {
        queue_cv_.wait_for(lock, tick, ready);
      }
      if (stopping_) break;
      if (!queue_.empty()) {
        command = std::move(queue_.front());
        queue_.pop_front();
      }
    }
    if (command) command();
    if (!options_.simulated_clock) {
      try {
        ee_.run_until(scene_, clock_->now());
      } catch (const std::exception& e) {
        spdlog::error("control loop: {}", e.what());
      }
    }
  }
  // Unblock anyone waiting in drain().
  std::lock_guard lock(queue_mutex_);
  for (auto& c : queue_) c();
  queue_.clear();
}

void Session::log_inbound(ConnectionId id, std::string_view body) {
  if (!log_.is_open()) return;
  std::lock_guard lock(log_mutex_);
  log_ << json{{"conn", id}, {"body", std::string(body)}}.dump() << '\n' << std::flush;
}

void Session::handle_body(ConnectionId id, std::string_view body) {
  log_inbound(id, body);
  Frame frame;
  try {
    frame = decode_body(body);
  } catch (const ProtocolError& e) {
    spdlog::debug("connection {}: {}", id, e.what());
    reply(id, make_error("malformed", std::nullopt, e.what()));
    return;
  }
  handle(id, frame);
}

void Session::handle(ConnectionId id, const Frame& frame) {
  if (frame.kind == FrameKind::Topic) {
    if (frame.name != "target_pose") {
      reply(id, make_error(frame.name, std::nullopt, "unknown inbound topic '" + frame.name + "'"));
      return;
    }
    post([this, id, payload = frame.payload] {
      try {
        target_pose(payload);
      } catch (const std::exception& e) {
        reply(id, make_error("target_pose", std::nullopt, e.what()));
      }
    });
    return;
  }
  if (frame.kind != FrameKind::Request) {
    reply(id, make_error(frame.name, frame.id, "clients may only send requests and target_pose topics"));
    return;
  }

  const auto answer = [this, id, frame](const std::function<json()>& fn) {
    try {
      reply(id, make_response(frame, fn()));
    } catch (const std::exception& e) {
      reply(id, make_error(frame.name, frame.id, e.what()));
    }
  };

  const std::string& name = frame.name;
  if (name == "Subscribe" || name == "Unsubscribe") {
    answer([&] { return subscribe(id, frame.payload, name == "Subscribe"); });
  } else if (name == "GetScene") {
    answer([&] { return msg::scene_state(*scene()); });
  } else if (name == "SettlePreview") {
    answer([&] { return settle_preview(frame.payload); });
  } else if (name == "DesktopDetection") {
    answer([&] { return desktop_detection(); });
  } else if (auto it = owner_services_.find(name); it != owner_services_.end()) {
    Handler handler = it->second;
    post([this, answer, handler, payload = frame.payload] {
      answer([&] {
        json result = handler(payload);
        refresh_snapshot();
        return result;
      });
    });
  } else {
    reply(id, make_error(name, frame.id, "unknown service '" + name + "'"));
  }
}

json Session::subscribe(ConnectionId id, const json& payload, bool add) {
  const json& topics = codec::member(payload, "topics", "");
  if (!topics.is_array()) throw ParseError("expected an array", 0, "/topics");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < topics.size(); ++i) {
    std::string t = codec::string(topics[i], "/topics/" + std::to_string(i));
    if (std::find(kTopics.begin(), kTopics.end(), t) == kTopics.end()) {
      throw NotFoundError("unknown topic '" + t + "'");
    }
    names.push_back(std::move(t));
  }
  std::lock_guard lock(connections_mutex_);
  auto& conn = connections_.at(id);
  for (const auto& t : names) {
    if (add) {
      conn.topics.insert(t);
    } else {
      conn.topics.erase(t);
    }
  }
  return {{"topics", json(std::vector<std::string>(conn.topics.begin(), conn.topics.end()))}};
}

json Session::settle_preview(const json& payload) const {
  const SceneSnapshot s = scene();
  const std::string id = codec::string(codec::member(payload, "instance_id", ""), "/instance_id");
  const Pose pose = codec::pose(codec::member(payload, "pose", ""), "/pose");
  SettleOptions opts = options_.executor.settle;
  opts.colliders = ColliderPoses::Ghost;
  if (const json* c = codec::optional_member(payload, "colliders")) {
    const std::string which = codec::string(*c, "/colliders");
    if (which == "actual") {
      opts.colliders = ColliderPoses::Actual;
    } else if (which != "ghost") {
      throw ParseError("expected ghost or actual", 0, "/colliders");
    }
  }
  return msg::to_json(settle(*s, id, pose, opts));
}

json Session::desktop_detection() const {
  if (!cloud_) throw NotFoundError("no point cloud configured for this scene");
  return desktop_to_json(detect_desktop(*cloud_, options_.detect));
}

json Session::execute_task(const json& payload) {
  const TaskRequest request = msg::task_request_from_json(payload);
  if (trial_) trial_->execute_click = scene_.sim_time;
  targets_.clear();
  ee_.clear_goal();
  const ExecutionReport report = executor_.execute_task(scene_, request);
  if (trial_) {
    trial_->execution_finished = report.end_time;
    for (const auto& m : report.moves) {
      if (m.outcome == MoveOutcome::Collision) trial_->collision = true;
    }
    if (report.aborted) trial_->collision = true;
    if (!report.success) trial_->failed = true;
  }
  return msg::to_json(report);
}

json Session::grasp_service() {
  ee_.clear_goal();
  const GraspResult r = executor_.grasp(scene_);
  json out = {{"success", r.success()},
              {"aperture", r.closure.final_aperture},
              {"squeeze", r.closure.squeeze},
              {"duration", r.closure.duration}};
  out["instance_id"] = r.instance_id ? json(*r.instance_id) : json(nullptr);
  return out;
}

json Session::release_service() {
  ee_.clear_goal();
  const ReleaseResult r = executor_.release(scene_);
  if (!r.error.empty()) {
    if (trial_) trial_->failed = true;
    throw SettleError(r.error);
  }
  json out = {{"instance_id", r.instance_id ? json(*r.instance_id) : json(nullptr)}};
  if (r.settled) {
    out["final_pose"] = codec::to_json(r.settled->final_pose);
    out["support"] = msg::to_json(r.settled->support);
    out["stable"] = r.settled->stable;
  }
  return out;
}

json Session::set_ghost_pose(const json& payload) {
  const std::string id = codec::string(codec::member(payload, "instance_id", ""), "/instance_id");
  const Pose pose = codec::pose(codec::member(payload, "pose", ""), "/pose");
  std::string phase = "move";
  if (const json* p = codec::optional_member(payload, "phase")) phase = codec::string(*p, "/phase");
  if (phase != "grab" && phase != "move" && phase != "release") {
    throw ParseError("expected grab, move or release", 0, "/phase");
  }
  teleop::set_ghost_pose(scene_, id, pose);
  if (trial_ && phase == "grab") trial_->ghost_grab(scene_.sim_time);
  return {{"instance_id", id}, {"ghost_pose", codec::to_json(scene_.object(id).ghost_pose)}};
}

json Session::reset_scene() {
  const double now = scene_.sim_time;
  scene_ = initial_;
  scene_.sim_time = now;
  targets_.clear();
  ee_.reset();
  trial_.reset();
  return {{"sim_time", now}};
}

json Session::advance_clock(const json& payload) {
  if (!options_.simulated_clock) throw ValidationError("AdvanceClock requires the simulated clock");
  const double seconds = codec::number(codec::member(payload, "seconds", ""), "/seconds");
  if (!(seconds >= 0.0)) throw ValidationError("seconds must be non-negative");
  ee_.run_until(scene_, scene_.sim_time + seconds);
  return {{"sim_time", scene_.sim_time}};
}

json Session::begin_trial(const json& payload) {
  TrialEvents events;
  events.task = codec::string(codec::member(payload, "task", ""), "/task");
  events.mode = control_mode_from_string(codec::string(codec::member(payload, "mode", ""), "/mode"));
  trial_ = events;
  ee_.reset();
  targets_.clear();
  return {{"sim_time", scene_.sim_time}};
}

json Session::task_complete() {
  if (!trial_) throw ValidationError("no trial in progress");
  if (!trial_->task_complete) trial_->task_complete = scene_.sim_time;
  return {{"sim_time", scene_.sim_time}};
}

json Session::end_trial() {
  if (!trial_) throw ValidationError("no trial in progress");
  TrialEvents events = *trial_;
  if (events.mode == ControlMode::EE && ee_.collision()) events.collision = true;
  trial_.reset();
  const MetricsRecord record = record_metrics(events);
  {
    std::lock_guard lock(records_mutex_);
    records_.push_back(record);
  }
  if (options_.metrics_path) append_metrics(*options_.metrics_path, record);
  return to_json(record);
}

void Session::target_pose(const json& payload) {
  const Pose pose = codec::pose(codec::member(payload, "pose", ""), "/pose");
  targets_.push(pose);
  if (trial_) trial_->target_pose(scene_.sim_time);
}

std::size_t replay_session(const std::filesystem::path& log_path, std::ostream& out) {
  std::ifstream in(log_path);
  if (!in) throw Error("cannot open session log " + log_path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty session log", 1);
  const json header = codec::parse_text(line);
  const SceneFile file = load_scene_file(codec::string(codec::member(header, "scene", ""), "/scene"));
  std::optional<PointCloud> cloud;
  if (const json* c = codec::optional_member(header, "cloud")) {
    cloud = read_point_cloud(codec::string(*c, "/cloud"));
  } else if (file.cloud) {
    cloud = read_point_cloud(*file.cloud);
  }
  KinematicChain chain = file.chain ? load_chain(*file.chain) : kinova_gen3_chain();
  SessionOptions options;
  options.detect = file.detect_params;
  Session session(file.scene, std::move(cloud), std::move(chain), options);
  session.start();

  std::mutex out_mutex;
  std::map<std::uint64_t, ConnectionId> ids;
  std::size_t count = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json entry;
    try {
      entry = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(e.what(), line_no);
    }
    const auto logged = entry.at("conn").get<std::uint64_t>();
    auto it = ids.find(logged);
    if (it == ids.end()) {
      const ConnectionId id = session.connect([&out, &out_mutex, logged](const Frame& f) {
        if (f.kind == FrameKind::Topic) return;
        std::lock_guard lock(out_mutex);
        out << json{{"conn", logged}, {"frame", codec::parse_text(encode_body(f))}}.dump() << '\n';
      });
      it = ids.emplace(logged, id).first;
    }
    session.handle_body(it->second, entry.at("body").get<std::string>());
    session.drain();
    ++count;
  }
  session.stop();
  return count;
}

}  // namespace teleop
