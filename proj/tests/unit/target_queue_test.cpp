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

#include <deque>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "teleop/error.hpp"
#include "teleop/target_queue.hpp"

namespace teleop {
namespace {

TEST(TargetQueue, MatchesBoundedDequeModel) {
  std::mt19937_64 rng(17);
  for (std::size_t capacity : {1u, 3u, 8u}) {
    TargetQueue queue(capacity);
    std::deque<double> model;
    double next = 0.0;
    for (int step = 0; step < 5000; ++step) {
      const int op = std::uniform_int_distribution<int>(0, 9)(rng);
      if (op < 5) {
        queue.push(Pose(next, 0, 0));
        model.push_back(next);
        if (model.size() > capacity) model.pop_front();
        next += 1.0;
      } else if (op < 8) {
        const auto got = queue.pop();
        if (model.empty()) {
          EXPECT_FALSE(got);
        } else {
          ASSERT_TRUE(got);
          EXPECT_EQ(got->position().x(), model.front());
          model.pop_front();
        }
      } else if (op < 9) {
        const auto got = queue.pop_latest();
        if (model.empty()) {
          EXPECT_FALSE(got);
        } else {
          ASSERT_TRUE(got);
          EXPECT_EQ(got->position().x(), model.back());
          model.clear();
        }
      } else {
        queue.clear();
        model.clear();
      }
      ASSERT_EQ(queue.size(), model.size());
      ASSERT_LE(queue.size(), capacity);
    }
  }
}

TEST(TargetQueue, ProducerConsumerKeepsOrder) {
  TargetQueue queue(8);
  constexpr int kCount = 20000;
  std::thread producer([&] {
    for (int i = 0; i < kCount; ++i) ee_push_target(queue, Pose(i, 0, 0));
  });
  double last = -1.0;
  int received = 0;
  bool done = false;
  while (!done) {
    if (const auto p = queue.pop()) {
      EXPECT_GT(p->position().x(), last);
      last = p->position().x();
      ++received;
      done = last == kCount - 1;
    } else {
      std::this_thread::yield();
    }
  }
  producer.join();
  EXPECT_GT(received, 0);
  EXPECT_TRUE(queue.empty());
}

TEST(TargetQueue, Capacity) {
  EXPECT_THROW(TargetQueue(0), ValidationError);
  TargetQueue queue;
  EXPECT_EQ(queue.capacity(), TargetQueue::kDefaultCapacity);
  EXPECT_FALSE(queue.pop_latest());
}

}  // namespace
}  // namespace teleop
