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

#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>

#include "teleop/pose.hpp"

namespace teleop {

/// Bounded FIFO of tool targets shared by one producer and one consumer.
/// Pushing onto a full queue drops the oldest entry.
class TargetQueue {
 public:
  static constexpr std::size_t kDefaultCapacity = 8;

  explicit TargetQueue(std::size_t capacity = kDefaultCapacity);

  void push(const Pose& pose);
  std::optional<Pose> pop();
  /// Returns the newest entry and discards everything older.
  std::optional<Pose> pop_latest();
  void clear();

  std::size_t size() const;
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const { return size() == 0; }

 private:
  mutable std::mutex mutex_;
  std::deque<Pose> items_;
  std::size_t capacity_;
};

/// Free-function form used by the control node.
inline void ee_push_target(TargetQueue& queue, const Pose& pose) { queue.push(pose); }

}  // namespace teleop
