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

#include "teleop/websocket.hpp"

#include <array>

#include <openssl/evp.h>
#include <openssl/sha.h>

#include "teleop/error.hpp"

namespace teleop::ws {

namespace {
constexpr std::string_view kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
}

std::string accept_key(std::string_view client_key) {
  std::string input(client_key);
  input += kGuid;
  std::array<unsigned char, SHA_DIGEST_LENGTH> digest{};
  SHA1(reinterpret_cast<const unsigned char*>(input.data()), input.size(), digest.data());
  std::array<unsigned char, 4 * ((SHA_DIGEST_LENGTH + 2) / 3) + 1> encoded{};
  const int n = EVP_EncodeBlock(encoded.data(), digest.data(), SHA_DIGEST_LENGTH);
  return std::string(reinterpret_cast<const char*>(encoded.data()), static_cast<std::size_t>(n));
}

std::string encode_frame(Opcode opcode, std::string_view payload, std::optional<std::uint32_t> mask) {
  std::string out;
  out.push_back(static_cast<char>(0x80 | static_cast<std::uint8_t>(opcode)));
  const std::uint8_t mask_bit = mask ? 0x80 : 0x00;
  const std::uint64_t n = payload.size();
  if (n < 126) {
    out.push_back(static_cast<char>(mask_bit | n));
  } else if (n <= 0xffff) {
    out.push_back(static_cast<char>(mask_bit | 126));
    out.push_back(static_cast<char>((n >> 8) & 0xff));
    out.push_back(static_cast<char>(n & 0xff));
  } else {
    out.push_back(static_cast<char>(mask_bit | 127));
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((n >> shift) & 0xff));
  }
  if (!mask) {
    out.append(payload);
    return out;
  }
  const std::array<char, 4> key{static_cast<char>(*mask >> 24), static_cast<char>(*mask >> 16),
                                static_cast<char>(*mask >> 8), static_cast<char>(*mask)};
  out.append(key.begin(), key.end());
  for (std::size_t i = 0; i < payload.size(); ++i) out.push_back(static_cast<char>(payload[i] ^ key[i % 4]));
  return out;
}

std::optional<Message> Parser::next() {
  while (true) {
    if (buffer_.size() < 2) return std::nullopt;
    const auto* p = reinterpret_cast<const unsigned char*>(buffer_.data());
    const bool fin = (p[0] & 0x80) != 0;
    if ((p[0] & 0x70) != 0) throw ProtocolError("websocket: reserved bits set");
    const auto opcode = static_cast<Opcode>(p[0] & 0x0f);
    const bool masked = (p[1] & 0x80) != 0;
    std::uint64_t len = p[1] & 0x7f;
    std::size_t header = 2;
    if (len == 126) {
      if (buffer_.size() < 4) return std::nullopt;
      len = (std::uint64_t{p[2]} << 8) | p[3];
      header = 4;
    } else if (len == 127) {
      if (buffer_.size() < 10) return std::nullopt;
      len = 0;
      for (int i = 0; i < 8; ++i) len = (len << 8) | p[2 + i];
      header = 10;
    }
    if (len > max_message_) throw ProtocolError("websocket: message too large");
    const std::size_t mask_len = masked ? 4 : 0;
    if (buffer_.size() < header + mask_len + len) return std::nullopt;
    std::string payload = buffer_.substr(header + mask_len, len);
    if (masked) {
      for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<char>(payload[i] ^ p[header + i % 4]);
    }
    buffer_.erase(0, header + mask_len + len);

    const bool control = (static_cast<std::uint8_t>(opcode) & 0x08) != 0;
    if (control) {
      if (!fin) throw ProtocolError("websocket: fragmented control frame");
      return Message{opcode, std::move(payload)};
    }
    if (opcode == Opcode::Continuation) {
      if (!partial_opcode_) throw ProtocolError("websocket: unexpected continuation frame");
    } else {
      if (partial_opcode_) throw ProtocolError("websocket: interleaved data frames");
      partial_opcode_ = opcode;
    }
    if (partial_.size() + payload.size() > max_message_) throw ProtocolError("websocket: message too large");
    partial_ += payload;
    if (fin) {
      Message m{*partial_opcode_, std::move(partial_)};
      partial_.clear();
      partial_opcode_.reset();
      return m;
    }
  }
}

}  // namespace teleop::ws
