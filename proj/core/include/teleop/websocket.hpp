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
#include <optional>
#include <string>
#include <string_view>

namespace teleop::ws {

enum class Opcode : std::uint8_t { Continuation = 0x0, Text = 0x1, Binary = 0x2, Close = 0x8, Ping = 0x9, Pong = 0xA };

/// Sec-WebSocket-Accept value for a client's Sec-WebSocket-Key.
std::string accept_key(std::string_view client_key);

/// Single final frame. Client-to-server frames must be masked.
std::string encode_frame(Opcode opcode, std::string_view payload, std::optional<std::uint32_t> mask = std::nullopt);

struct Message {
  Opcode opcode = Opcode::Text;
  std::string payload;
};

/// Reassembles (possibly fragmented) messages from a byte stream.
class Parser {
 public:
  explicit Parser(std::size_t max_message = 16u << 20) : max_message_(max_message) {}
  void feed(std::string_view bytes) { buffer_.append(bytes); }
  /// Throws ProtocolError on oversized or malformed frames.
  std::optional<Message> next();

 private:
  std::string buffer_;
  std::size_t max_message_;
  std::optional<Opcode> partial_opcode_;
  std::string partial_;
};

}  // namespace teleop::ws
