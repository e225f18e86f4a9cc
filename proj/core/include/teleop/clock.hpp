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
#include <mutex>
#include <thread>

namespace teleop {

/// Time source for everything that runs at a rate. Times are seconds.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now() const = 0;
  /// Blocks (wall) or jumps (simulated) until `time`; never goes back.
  virtual void sleep_until(double time) = 0;
  virtual bool simulated() const = 0;
};

/// Deterministic clock that only moves when asked to.
class SimClock final : public Clock {
 public:
  explicit SimClock(double start = 0.0) : now_(start) {}
  double now() const override {
    std::lock_guard lock(mutex_);
    return now_;
  }
  void sleep_until(double time) override {
    std::lock_guard lock(mutex_);
    if (time > now_) now_ = time;
  }
  bool simulated() const override { return true; }

 private:
  mutable std::mutex mutex_;
  double now_;
};

class WallClock final : public Clock {
 public:
  WallClock() : origin_(std::chrono::steady_clock::now()) {}
  double now() const override {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - origin_).count();
  }
  void sleep_until(double time) override {
    std::this_thread::sleep_until(origin_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                std::chrono::duration<double>(time)));
  }
  bool simulated() const override { return false; }

 private:
  std::chrono::steady_clock::time_point origin_;
};

}  // namespace teleop
