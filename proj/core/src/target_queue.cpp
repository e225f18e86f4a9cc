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

#include "teleop/target_queue.hpp"

#include "teleop/error.hpp"

namespace teleop {

TargetQueue::TargetQueue(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ValidationError("queue capacity must be positive");
}

void TargetQueue::push(const Pose& pose) {
  std::lock_guard lock(mutex_);
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(pose);
}

std::optional<Pose> TargetQueue::pop() {
  std::lock_guard lock(mutex_);
  if (items_.empty()) return std::nullopt;
  Pose front = items_.front();
  items_.pop_front();
  return front;
}

std::optional<Pose> TargetQueue::pop_latest() {
  std::lock_guard lock(mutex_);
  if (items_.empty()) return std::nullopt;
  Pose back = items_.back();
  items_.clear();
  return back;
}

void TargetQueue::clear() {
  std::lock_guard lock(mutex_);
  items_.clear();
}

std::size_t TargetQueue::size() const {
  std::lock_guard lock(mutex_);
  return items_.size();
}

}  // namespace teleop
