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

// In-process session + server on a free loopback port.

#include <filesystem>
#include <memory>
#include <optional>

#include "teleop/scene_io.hpp"
#include "teleop/server.hpp"
#include "teleop/session.hpp"

namespace teleop::test {

struct LiveServer {
  explicit LiveServer(const std::filesystem::path& scene_path, SessionOptions options = {},
                      std::filesystem::path console_dir = {}) {
    const SceneFile file = load_scene_file(scene_path);
    std::optional<PointCloud> cloud;
    if (file.cloud) cloud = read_point_cloud(*file.cloud);
    options.scene_path = scene_path;
    options.detect = file.detect_params;
    session = std::make_unique<Session>(file.scene, std::move(cloud),
                                        file.chain ? load_chain(*file.chain) : kinova_gen3_chain(), options);
    session->start();
    ServerOptions so;
    so.host = "127.0.0.1";
    so.port = 0;
    so.console_dir = std::move(console_dir);
    server = std::make_unique<Server>(*session, so);
    server->start();
  }
  ~LiveServer() {
    server->stop();
    session->stop();
  }

  std::uint16_t port() const { return server->port(); }

  std::unique_ptr<Session> session;
  std::unique_ptr<Server> server;
};

}  // namespace teleop::test
