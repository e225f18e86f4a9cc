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

#include <nlohmann/json.hpp>

namespace teleop {

enum class FrameKind { Topic, Request, Response, Error };

std::string to_string(FrameKind kind);
FrameKind frame_kind_from_string(std::string_view text);

/// One protocol message. `id` correlates requests with their response or
/// error; topic frames carry none.
struct Frame {
  FrameKind kind = FrameKind::Topic;
  std::string name;
  std::optional<std::int64_t> id;
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const Frame&, const Frame&) = default;
};

inline constexpr std::size_t kFrameHeaderSize = 4;
inline constexpr std::size_t kMaxFrameBody = 16u << 20;

/// Canonical JSON body: keys sorted, no whitespace.
std::string encode_body(const Frame& frame);
/// Throws ProtocolError with a diagnostic on malformed bodies.
Frame decode_body(std::string_view body);

/// Length prefix (big-endian u32) followed by the body.
std::string encode_frame(const Frame& frame);

Frame make_topic(std::string name, nlohmann::json payload);
Frame make_request(std::string name, std::int64_t id, nlohmann::json payload = nlohmann::json::object());
Frame make_response(const Frame& request, nlohmann::json payload);
/// Error reply. `name` and `id` echo the offending request when known.
Frame make_error(std::string name, std::optional<std::int64_t> id, const std::string& message);

/// Incremental splitter for a byte stream of length-prefixed frames.
class FrameReader {
 public:
  void feed(std::string_view bytes) { buffer_.append(bytes); }
  /// Next complete body, if buffered. Throws ProtocolError when a prefix
  /// announces more than kMaxFrameBody bytes; the stream is then unusable.
  std::optional<std::string> next_body();
  std::size_t buffered() const noexcept { return buffer_.size() - offset_; }

 private:
  std::string buffer_;
  std::size_t offset_ = 0;
};

}  // namespace teleop
