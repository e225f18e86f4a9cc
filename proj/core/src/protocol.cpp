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

#include "teleop/protocol.hpp"

#include "teleop/error.hpp"

namespace teleop {

using nlohmann::json;

std::string to_string(FrameKind kind) {
  switch (kind) {
    case FrameKind::Topic: return "topic";
    case FrameKind::Request: return "request";
    case FrameKind::Response: return "response";
    case FrameKind::Error: return "error";
  }
  return "?";
}

FrameKind frame_kind_from_string(std::string_view text) {
  if (text == "topic") return FrameKind::Topic;
  if (text == "request") return FrameKind::Request;
  if (text == "response") return FrameKind::Response;
  if (text == "error") return FrameKind::Error;
  throw ProtocolError("unknown frame kind '" + std::string(text) + "'");
}

std::string encode_body(const Frame& frame) {
  json body = {{"kind", to_string(frame.kind)}, {"name", frame.name}, {"payload", frame.payload}};
  if (frame.id) body["id"] = *frame.id;
  return body.dump(-1, ' ', false, json::error_handler_t::strict);
}

Frame decode_body(std::string_view body) {
  if (body.size() > kMaxFrameBody) throw ProtocolError("frame body exceeds 16 MiB");
  json value;
  try {
    value = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed frame body: ") + e.what());
  }
  if (!value.is_object()) throw ProtocolError("frame body must be an object");
  Frame frame;
  const auto kind = value.find("kind");
  if (kind == value.end() || !kind->is_string()) throw ProtocolError("frame field 'kind' missing or not a string");
  frame.kind = frame_kind_from_string(kind->get<std::string>());
  const auto name = value.find("name");
  if (name == value.end() || !name->is_string()) throw ProtocolError("frame field 'name' missing or not a string");
  frame.name = name->get<std::string>();
  if (const auto id = value.find("id"); id != value.end()) {
    if (!id->is_number_integer()) throw ProtocolError("frame field 'id' must be an integer");
    frame.id = id->get<std::int64_t>();
  }
  if (const auto payload = value.find("payload"); payload != value.end()) {
    if (!payload->is_object()) throw ProtocolError("frame field 'payload' must be an object");
    frame.payload = *payload;
  }
  for (const auto& [key, unused] : value.items()) {
    if (key != "kind" && key != "name" && key != "id" && key != "payload") {
      throw ProtocolError("unexpected frame field '" + key + "'");
    }
  }
  const bool needs_id = frame.kind == FrameKind::Request || frame.kind == FrameKind::Response;
  if (needs_id && !frame.id) throw ProtocolError(to_string(frame.kind) + " frame requires 'id'");
  if (frame.kind == FrameKind::Topic && frame.id) throw ProtocolError("topic frame must not carry 'id'");
  return frame;
}

std::string encode_frame(const Frame& frame) {
  const std::string body = encode_body(frame);
  if (body.size() > kMaxFrameBody) throw ProtocolError("frame body exceeds 16 MiB");
  const auto n = static_cast<std::uint32_t>(body.size());
  std::string out;
  out.reserve(kFrameHeaderSize + body.size());
  out.push_back(static_cast<char>((n >> 24) & 0xff));
  out.push_back(static_cast<char>((n >> 16) & 0xff));
  out.push_back(static_cast<char>((n >> 8) & 0xff));
  out.push_back(static_cast<char>(n & 0xff));
  out += body;
  return out;
}

Frame make_topic(std::string name, json payload) {
  return Frame{FrameKind::Topic, std::move(name), std::nullopt, std::move(payload)};
}

Frame make_request(std::string name, std::int64_t id, json payload) {
  return Frame{FrameKind::Request, std::move(name), id, std::move(payload)};
}

Frame make_response(const Frame& request, json payload) {
  return Frame{FrameKind::Response, request.name, request.id, std::move(payload)};
}

Frame make_error(std::string name, std::optional<std::int64_t> id, const std::string& message) {
  return Frame{FrameKind::Error, std::move(name), id, json{{"message", message}}};
}

std::optional<std::string> FrameReader::next_body() {
  const std::size_t available = buffer_.size() - offset_;
  if (available < kFrameHeaderSize) return std::nullopt;
  const auto* p = reinterpret_cast<const unsigned char*>(buffer_.data() + offset_);
  const std::uint32_t n = (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
  if (n > kMaxFrameBody) throw ProtocolError("frame length " + std::to_string(n) + " exceeds 16 MiB");
  if (available < kFrameHeaderSize + n) return std::nullopt;
  std::string body = buffer_.substr(offset_ + kFrameHeaderSize, n);
  offset_ += kFrameHeaderSize + n;
  if (offset_ > 65536 && offset_ * 2 > buffer_.size()) {
    buffer_.erase(0, offset_);
    offset_ = 0;
  }
  return body;
}

}  // namespace teleop
