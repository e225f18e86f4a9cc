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

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "teleop/arm_model.hpp"
#include "teleop/clock.hpp"
#include "teleop/desktop_detect.hpp"
#include "teleop/ee_controller.hpp"
#include "teleop/metrics.hpp"
#include "teleop/point_cloud.hpp"
#include "teleop/protocol.hpp"
#include "teleop/scene.hpp"
#include "teleop/target_queue.hpp"
#include "teleop/task_executor.hpp"

namespace teleop {

inline const std::vector<std::string> kTopics = {"joint_states", "object_poses", "l515_image_raw"};

struct SessionOptions {
  ExecutorConfig executor;
  bool simulated_clock = true;
  double object_pose_rate = 10.0;  // Hz
  double image_rate = 1.0;         // Hz, placeholder camera topic
  DesktopDetectParams detect;
  std::optional<std::filesystem::path> metrics_path;
  /// Every inbound frame is appended here for later replay.
  std::optional<std::filesystem::path> session_log;
  /// Written as the log header so replay can rebuild the session.
  std::filesystem::path scene_path;
  std::optional<std::filesystem::path> cloud_path;
};

using ConnectionId = std::uint64_t;
/// Must not block; called from the session's threads.
using FrameSink = std::function<void(const Frame&)>;

/// Scene owner and service dispatcher. Every mutation runs on one owner
/// thread fed by a command queue; read-only services answer from the
/// latest snapshot on the caller's thread.
class Session {
 public:
  Session(SceneState scene, std::optional<PointCloud> cloud, KinematicChain chain, SessionOptions options = {});
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  void start();
  void stop();

  ConnectionId connect(FrameSink sink);
  void disconnect(ConnectionId id);

  /// Decodes and dispatches one inbound body; malformed input yields an
  /// error frame on the same connection.
  void handle_body(ConnectionId id, std::string_view body);
  void handle(ConnectionId id, const Frame& frame);

  /// Returns once every command queued before the call has run.
  void drain();

  SceneSnapshot scene() const;
  std::vector<MetricsRecord> records() const;
  bool simulated() const noexcept { return options_.simulated_clock; }

 private:
  struct Connection {
    FrameSink sink;
    std::set<std::string> topics;
  };
  using Handler = std::function<nlohmann::json(const nlohmann::json&)>;

  void owner_loop();
  void post(std::function<void()> command);
  void reply(ConnectionId id, const Frame& frame);
  void publish(const std::string& topic, const nlohmann::json& payload);
  void on_sample(const SceneState& scene);
  void refresh_snapshot();
  void log_inbound(ConnectionId id, std::string_view body);

  nlohmann::json subscribe(ConnectionId id, const nlohmann::json& payload, bool add);
  nlohmann::json settle_preview(const nlohmann::json& payload) const;
  nlohmann::json desktop_detection() const;

  nlohmann::json execute_task(const nlohmann::json& payload);
  nlohmann::json grasp_service();
  nlohmann::json release_service();
  nlohmann::json set_ghost_pose(const nlohmann::json& payload);
  nlohmann::json reset_scene();
  nlohmann::json advance_clock(const nlohmann::json& payload);
  nlohmann::json begin_trial(const nlohmann::json& payload);
  nlohmann::json task_complete();
  nlohmann::json end_trial();
  void target_pose(const nlohmann::json& payload);

  SessionOptions options_;
  std::unique_ptr<Clock> clock_;
  std::optional<PointCloud> cloud_;
  SceneState initial_;
  SceneState scene_;  // owner thread only
  TaskExecutor executor_;
  TargetQueue targets_;
  EeController ee_;
  std::map<std::string, Handler> owner_services_;
  std::optional<TrialEvents> trial_;
  long last_pose_tick_ = -1;
  long last_image_tick_ = -1;

  mutable std::mutex snapshot_mutex_;
  SceneSnapshot snapshot_;

  mutable std::mutex connections_mutex_;
  std::map<ConnectionId, Connection> connections_;
  ConnectionId next_connection_ = 1;

  std::mutex queue_mutex_;
  std::condition_variable queue_cv_;
  std::deque<std::function<void()>> queue_;
  bool stopping_ = false;
  std::thread owner_;

  mutable std::mutex records_mutex_;
  std::vector<MetricsRecord> records_;

  std::mutex log_mutex_;
  std::ofstream log_;
};

/// Re-runs a session log in-process under the simulated clock, writing
/// every response and error frame body to `out`, one per line. Returns
/// the number of frames replayed.
std::size_t replay_session(const std::filesystem::path& log_path, std::ostream& out);

}  // namespace teleop
