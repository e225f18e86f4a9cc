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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "teleop/error.hpp"
#include "teleop/protocol.hpp"

namespace teleop {

namespace net {
class Socket;
}

/// Error frame returned for a request.
class ServiceError : public ProtocolError {
 public:
  ServiceError(std::string service, const std::string& message)
      : ProtocolError(service + ": " + message), service_(std::move(service)) {}
  const std::string& service() const noexcept { return service_; }

 private:
  std::string service_;
};

/// Blocking protocol client. A background reader routes responses to
/// their callers by correlation id and buffers topic frames.
class Client {
 public:
  using Duration = std::chrono::milliseconds;

  /// Throws Error when the connection fails.
  Client(const std::string& host, std::uint16_t port);
  ~Client();
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  /// Sends a request and waits for its response payload. Throws
  /// ServiceError on an error frame and ProtocolError on timeout or a
  /// dropped connection.
  nlohmann::json call(const std::string& service, const nlohmann::json& payload = nlohmann::json::object(),
                      Duration timeout = std::chrono::seconds(60));
  void publish(const std::string& topic, const nlohmann::json& payload);
  /// Writes raw bytes (tests use this for malformed input).
  void send_raw(const std::string& bytes);

  /// Next buffered topic frame, waiting up to `timeout`.
  std::optional<Frame> next_topic(Duration timeout = Duration(0));
  std::vector<Frame> take_topics();
  /// Error frames that matched no pending request.
  std::vector<Frame> take_errors();
  /// Next uncorrelated error frame, waiting up to `timeout`.
  std::optional<Frame> next_error(Duration timeout);

  bool connected() const;
  void close();

 private:
  struct Pending {
    std::optional<Frame> reply;
  };

  void read_loop();

  std::unique_ptr<net::Socket> socket_;
  std::mutex write_mutex_;
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::int64_t next_id_ = 1;
  std::map<std::int64_t, std::shared_ptr<Pending>> pending_;
  std::deque<Frame> topics_;
  std::deque<Frame> errors_;
  bool closed_ = false;
  std::string failure_;
  std::thread reader_;
};

}  // namespace teleop
