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

#include "teleop/client.hpp"

#include <spdlog/spdlog.h>

#include "socket.hpp"
#include "teleop/error.hpp"

namespace teleop {

Client::Client(const std::string& host, std::uint16_t port)
    : socket_(std::make_unique<net::Socket>(net::connect_tcp(host, port))) {
  reader_ = std::thread([this] { read_loop(); });
}

Client::~Client() { close(); }

void Client::close() {
  socket_->shutdown();
  if (reader_.joinable()) reader_.join();
}

bool Client::connected() const {
  std::lock_guard lock(mutex_);
  return !closed_;
}

void Client::read_loop() {
  FrameReader reader;
  char buffer[64 * 1024];
  std::string failure = "connection closed";
  try {
    while (true) {
      const std::size_t n = socket_->recv_some(buffer, sizeof buffer);
      if (n == 0) break;
      reader.feed(std::string_view(buffer, n));
      while (auto body = reader.next_body()) {
        Frame frame = decode_body(*body);
        std::lock_guard lock(mutex_);
        if (frame.kind == FrameKind::Topic) {
          topics_.push_back(std::move(frame));
        } else if (frame.id && pending_.count(*frame.id) != 0) {
          pending_[*frame.id]->reply = std::move(frame);
        } else if (frame.kind == FrameKind::Error) {
          errors_.push_back(std::move(frame));
        } else {
          spdlog::warn("orphan {} frame '{}'", to_string(frame.kind), frame.name);
        }
        cv_.notify_all();
      }
    }
  } catch (const std::exception& e) {
    failure = e.what();
  }
  std::lock_guard lock(mutex_);
  closed_ = true;
  failure_ = failure;
  cv_.notify_all();
}

nlohmann::json Client::call(const std::string& service, const nlohmann::json& payload, Duration timeout) {
  auto pending = std::make_shared<Pending>();
  std::int64_t id = 0;
  {
    std::lock_guard lock(mutex_);
    if (closed_) throw ProtocolError(service + ": " + failure_);
    id = next_id_++;
    pending_[id] = pending;
  }
  try {
    std::lock_guard lock(write_mutex_);
    socket_->send_all(encode_frame(make_request(service, id, payload)));
  } catch (const Error& e) {
    std::lock_guard lock(mutex_);
    pending_.erase(id);
    throw ProtocolError(service + ": " + e.what());
  }
  std::unique_lock lock(mutex_);
  const bool done = cv_.wait_for(lock, timeout, [&] { return pending->reply.has_value() || closed_; });
  pending_.erase(id);
  if (!pending->reply) {
    throw ProtocolError(service + ": " + (done ? failure_ : std::string("timed out waiting for response")));
  }
  Frame reply = std::move(*pending->reply);
  if (reply.kind == FrameKind::Error) {
    const auto msg = reply.payload.find("message");
    throw ServiceError(service, msg != reply.payload.end() && msg->is_string() ? msg->get<std::string>()
                                                                               : reply.payload.dump());
  }
  return std::move(reply.payload);
}

void Client::publish(const std::string& topic, const nlohmann::json& payload) {
  send_raw(encode_frame(make_topic(topic, payload)));
}

void Client::send_raw(const std::string& bytes) {
  std::lock_guard lock(write_mutex_);
  socket_->send_all(bytes);
}

std::optional<Frame> Client::next_topic(Duration timeout) {
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [&] { return !topics_.empty() || closed_; });
  if (topics_.empty()) return std::nullopt;
  Frame f = std::move(topics_.front());
  topics_.pop_front();
  return f;
}

std::vector<Frame> Client::take_topics() {
  std::lock_guard lock(mutex_);
  std::vector<Frame> out(std::make_move_iterator(topics_.begin()), std::make_move_iterator(topics_.end()));
  topics_.clear();
  return out;
}

std::vector<Frame> Client::take_errors() {
  std::lock_guard lock(mutex_);
  std::vector<Frame> out(std::make_move_iterator(errors_.begin()), std::make_move_iterator(errors_.end()));
  errors_.clear();
  return out;
}

std::optional<Frame> Client::next_error(Duration timeout) {
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [&] { return !errors_.empty() || closed_; });
  if (errors_.empty()) return std::nullopt;
  Frame f = std::move(errors_.front());
  errors_.pop_front();
  return f;
}

}  // namespace teleop
