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

#include <cstdint>
#include <string>
#include <string_view>

namespace teleop::net {

/// Owning POSIX socket descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket() { close(); }
  Socket(Socket&& other) noexcept : fd_(other.release()) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const noexcept { return fd_; }
  bool valid() const noexcept { return fd_ >= 0; }
  int release() noexcept {
    const int fd = fd_;
    fd_ = -1;
    return fd;
  }
  void close() noexcept;
  /// Stops both directions so a blocked reader wakes up.
  void shutdown() noexcept;

  /// Throws Error on failure.
  void send_all(std::string_view bytes) const;
  /// Returns 0 on orderly shutdown; throws Error on failure.
  std::size_t recv_some(char* buffer, std::size_t size) const;

 private:
  int fd_ = -1;
};

/// Listening socket bound to host:port (port 0 picks a free one).
/// Throws Error("port N already in use") when the address is taken.
Socket listen_tcp(const std::string& host, std::uint16_t port);
std::uint16_t local_port(const Socket& socket);
Socket connect_tcp(const std::string& host, std::uint16_t port);

}  // namespace teleop::net
