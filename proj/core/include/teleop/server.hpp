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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "teleop/session.hpp"

namespace teleop {

struct ServerOptions {
  std::string host = "0.0.0.0";
  std::uint16_t port = 7447;  // 0 picks a free port
  /// Static files served under /console; empty disables the route.
  std::filesystem::path console_dir;
  /// Topic frames beyond this many queued bytes are dropped for a slow
  /// client. Responses are never dropped.
  std::size_t outbound_limit = 8u << 20;
};

/// TCP endpoint for the frame protocol. Connections that open with an HTTP
/// GET are served /console assets or upgraded to a WebSocket at /ws that
/// carries the same frame bodies, one per text message.
class Server {
 public:
  Server(Session& session, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts accepting. Throws Error when the port is in use.
  void start();
  void stop();
  std::uint16_t port() const noexcept { return port_; }
  std::size_t connection_count() const;

 private:
  struct Connection;

  void accept_loop();
  void serve(const std::shared_ptr<Connection>& conn);
  void serve_frames(const std::shared_ptr<Connection>& conn, std::string initial);
  void serve_http(const std::shared_ptr<Connection>& conn, std::string initial);
  void serve_websocket(const std::shared_ptr<Connection>& conn, std::string rest);
  void attach(const std::shared_ptr<Connection>& conn);
  void reap(bool all);

  Session& session_;
  ServerOptions options_;
  std::uint16_t port_ = 0;
  std::unique_ptr<struct ListenSocket> listener_;
  std::thread acceptor_;
  std::atomic<bool> running_{false};
  mutable std::mutex connections_mutex_;
  std::list<std::shared_ptr<Connection>> connections_;
};

}  // namespace teleop
