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

#include "teleop/server.hpp"

#include <algorithm>
#include <cctype>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

#include <spdlog/spdlog.h>

#include <cerrno>
#include <cstring>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>

#include "socket.hpp"
#include "teleop/error.hpp"
#include "teleop/websocket.hpp"

namespace teleop {

struct ListenSocket {
  net::Socket socket;
};

struct Server::Connection {
  net::Socket socket;
  ConnectionId id = 0;
  bool attached = false;
  std::mutex mutex;
  std::condition_variable cv;
  std::deque<std::string> outbound;
  std::size_t queued_bytes = 0;
  std::size_t dropped = 0;
  bool closing = false;
  std::atomic<bool> finished{false};
  std::thread reader;
  std::thread writer;

  /// Returns false if the item was dropped.
  bool enqueue(std::string bytes, bool droppable, std::size_t limit) {
    {
      std::lock_guard lock(mutex);
      if (closing) return false;
      if (droppable && queued_bytes + bytes.size() > limit) {
        ++dropped;
        return false;
      }
      queued_bytes += bytes.size();
      outbound.push_back(std::move(bytes));
    }
    cv.notify_one();
    return true;
  }

  void close_outbound() {
    {
      std::lock_guard lock(mutex);
      closing = true;
    }
    cv.notify_all();
  }

  void write_loop() {
    while (true) {
      std::string next;
      {
        std::unique_lock lock(mutex);
        cv.wait(lock, [this] { return closing || !outbound.empty(); });
        if (outbound.empty()) return;
        next = std::move(outbound.front());
        outbound.pop_front();
        queued_bytes -= next.size();
      }
      try {
        socket.send_all(next);
      } catch (const Error& e) {
        spdlog::debug("connection {}: {}", id, e.what());
        socket.shutdown();
        std::lock_guard lock(mutex);
        outbound.clear();
        queued_bytes = 0;
        closing = true;
        return;
      }
    }
  }
};

namespace {

constexpr std::size_t kReadChunk = 64 * 1024;
constexpr std::size_t kMaxHttpHeader = 16 * 1024;

std::string content_type(const std::filesystem::path& path) {
  static const std::map<std::string, std::string> types = {
      {".html", "text/html; charset=utf-8"}, {".js", "text/javascript"}, {".css", "text/css"},
      {".json", "application/json"},         {".png", "image/png"},      {".svg", "image/svg+xml"}};
  const auto it = types.find(path.extension().string());
  return it == types.end() ? "application/octet-stream" : it->second;
}

std::string http_response(int status, const std::string& reason, const std::string& type, const std::string& body) {
  std::ostringstream out;
  out << "HTTP/1.1 " << status << ' ' << reason << "\r\n"
      << "Content-Type: " << type << "\r\n"
      << "Content-Length: " << body.size() << "\r\n"
      << "Connection: close\r\n\r\n"
      << body;
  return out.str();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

Server::Server(Session& session, ServerOptions options) : session_(session), options_(std::move(options)) {}

Server::~Server() { stop(); }

void Server::start() {
  if (running_) return;
  listener_ = std::make_unique<ListenSocket>(ListenSocket{net::listen_tcp(options_.host, options_.port)});
  port_ = net::local_port(listener_->socket);
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
  spdlog::debug("listening on {}:{}", options_.host, port_);
}

void Server::stop() {
  if (!running_.exchange(false)) return;
  listener_->socket.shutdown();
  if (acceptor_.joinable()) acceptor_.join();
  listener_->socket.close();
  reap(true);
}

std::size_t Server::connection_count() const {
  std::lock_guard lock(connections_mutex_);
  return static_cast<std::size_t>(std::count_if(connections_.begin(), connections_.end(),
                                                [](const auto& c) { return !c->finished; }));
}

void Server::accept_loop() {
  while (running_) {
    const int fd = ::accept4(listener_->socket.fd(), nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (!running_) break;
      if (errno == EINTR || errno == ECONNABORTED) continue;
      spdlog::error("accept failed: {}", std::strerror(errno));
      break;
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    auto conn = std::make_shared<Connection>();
    conn->socket = net::Socket(fd);
    reap(false);
    {
      std::lock_guard lock(connections_mutex_);
      connections_.push_back(conn);
    }
    conn->reader = std::thread([this, conn] {
      serve(conn);
      if (conn->attached) session_.disconnect(conn->id);
      conn->close_outbound();
      if (conn->writer.joinable()) conn->writer.join();
      conn->socket.shutdown();
      conn->finished = true;
    });
  }
}

void Server::reap(bool all) {
  std::list<std::shared_ptr<Connection>> done;
  {
    std::lock_guard lock(connections_mutex_);
    for (auto it = connections_.begin(); it != connections_.end();) {
      if (all || (*it)->finished) {
        done.push_back(*it);
        it = connections_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (auto& c : done) {
    c->socket.shutdown();
    if (c->reader.joinable()) c->reader.join();
  }
}

void Server::attach(const std::shared_ptr<Connection>& conn) {
  conn->writer = std::thread([conn] { conn->write_loop(); });
}

void Server::serve(const std::shared_ptr<Connection>& conn) {
  std::string initial;
  char buffer[kReadChunk];
  try {
    while (initial.size() < 4) {
      const std::size_t n = conn->socket.recv_some(buffer, sizeof buffer);
      if (n == 0) return;
      initial.append(buffer, n);
      // A frame prefix never starts with 'G' for bodies under 16 MiB.
      if (initial[0] != 'G') break;
    }
    if (initial.compare(0, 4, "GET ") == 0) {
      serve_http(conn, std::move(initial));
    } else {
      serve_frames(conn, std::move(initial));
    }
  } catch (const Error& e) {
    spdlog::debug("connection closed: {}", e.what());
  }
}

void Server::serve_frames(const std::shared_ptr<Connection>& conn, std::string initial) {
  const std::size_t limit = options_.outbound_limit;
  std::weak_ptr<Connection> weak = conn;
  conn->id = session_.connect([weak, limit](const Frame& frame) {
    if (auto c = weak.lock()) c->enqueue(encode_frame(frame), frame.kind == FrameKind::Topic, limit);
  });
  conn->attached = true;
  attach(conn);

  FrameReader reader;
  reader.feed(initial);
  char buffer[kReadChunk];
  while (true) {
    try {
      while (auto body = reader.next_body()) session_.handle_body(conn->id, *body);
    } catch (const ProtocolError& e) {
      // Oversized prefix: framing is lost, so report and hang up.
      conn->enqueue(encode_frame(make_error("malformed", std::nullopt, e.what())), false, limit);
      return;
    }
    const std::size_t n = conn->socket.recv_some(buffer, sizeof buffer);
    if (n == 0) return;
    reader.feed(std::string_view(buffer, n));
  }
}

void Server::serve_http(const std::shared_ptr<Connection>& conn, std::string data) {
  char buffer[kReadChunk];
  std::size_t end = data.find("\r\n\r\n");
  while (end == std::string::npos) {
    if (data.size() > kMaxHttpHeader) {
      conn->socket.send_all(http_response(431, "Request Header Fields Too Large", "text/plain", "header too large\n"));
      return;
    }
    const std::size_t n = conn->socket.recv_some(buffer, sizeof buffer);
    if (n == 0) return;
    data.append(buffer, n);
    end = data.find("\r\n\r\n");
  }
  std::istringstream head(data.substr(0, end));
  std::string line;
  std::getline(head, line);
  std::istringstream request_line(line);
  std::string method, target, version;
  request_line >> method >> target >> version;
  std::map<std::string, std::string> headers;
  while (std::getline(head, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    headers[lower(trim(line.substr(0, colon)))] = trim(line.substr(colon + 1));
  }
  const std::string path = target.substr(0, target.find('?'));

  if (path == "/ws") {
    const auto key = headers.find("sec-websocket-key");
    if (lower(headers["upgrade"]) != "websocket" || key == headers.end()) {
      conn->socket.send_all(http_response(400, "Bad Request", "text/plain", "websocket upgrade required\n"));
      return;
    }
    conn->socket.send_all("HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
                          "Sec-WebSocket-Accept: " +
                          ws::accept_key(key->second) + "\r\n\r\n");
    serve_websocket(conn, data.substr(end + 4));
    return;
  }

  if (path == "/console" || path.rfind("/console/", 0) == 0) {
    std::string rel = path.size() > 9 ? path.substr(9) : std::string();
    if (rel.empty()) rel = "index.html";
    const bool unsafe = rel.find("..") != std::string::npos || rel.front() == '/';
    const std::filesystem::path file = options_.console_dir / rel;
    if (!options_.console_dir.empty() && !unsafe && std::filesystem::is_regular_file(file)) {
      std::ifstream in(file, std::ios::binary);
      std::ostringstream body;
      body << in.rdbuf();
      conn->socket.send_all(http_response(200, "OK", content_type(file), body.str()));
      return;
    }
  }
  conn->socket.send_all(http_response(404, "Not Found", "text/plain", "not found\n"));
}

void Server::serve_websocket(const std::shared_ptr<Connection>& conn, std::string rest) {
  const std::size_t limit = options_.outbound_limit;
  std::weak_ptr<Connection> weak = conn;
  conn->id = session_.connect([weak, limit](const Frame& frame) {
    if (auto c = weak.lock()) {
      c->enqueue(ws::encode_frame(ws::Opcode::Text, encode_body(frame)), frame.kind == FrameKind::Topic, limit);
    }
  });
  conn->attached = true;
  attach(conn);

  ws::Parser parser(kMaxFrameBody);
  parser.feed(rest);
  char buffer[kReadChunk];
  while (true) {
    try {
      while (auto message = parser.next()) {
        switch (message->opcode) {
          case ws::Opcode::Text:
          case ws::Opcode::Binary:
            session_.handle_body(conn->id, message->payload);
            break;
          case ws::Opcode::Ping:
            conn->enqueue(ws::encode_frame(ws::Opcode::Pong, message->payload), false, limit);
            break;
          case ws::Opcode::Close:
            conn->enqueue(ws::encode_frame(ws::Opcode::Close, message->payload.substr(0, 2)), false, limit);
            return;
          default:
            break;
        }
      }
    } catch (const ProtocolError& e) {
      spdlog::debug("websocket {}: {}", conn->id, e.what());
      conn->enqueue(ws::encode_frame(ws::Opcode::Close, std::string("\x03\xea", 2)), false, limit);
      return;
    }
    const std::size_t n = conn->socket.recv_some(buffer, sizeof buffer);
    if (n == 0) return;
    parser.feed(std::string_view(buffer, n));
  }
}

}  // namespace teleop
