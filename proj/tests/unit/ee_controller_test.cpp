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

#include <gtest/gtest.h>

#include "scene_fixtures.hpp"
#include "teleop/ee_controller.hpp"
#include "teleop/scene_io.hpp"

namespace teleop {
namespace {

class EeControllerTest : public ::testing::Test {
 protected:
  EeControllerTest()
      : scene_(load_scene(test::data_dir() / "scenes" / "task1.json")),
        executor_(kinova_gen3_chain(), clock_),
        controller_(executor_, queue_) {
    executor_.set_observer([this](const SceneState& s) { samples_.push_back(s.joints); });
  }

  Pose tool() const { return executor_.tool_pose(scene_); }

  SimClock clock_;
  SceneState scene_;
  TaskExecutor executor_;
  TargetQueue queue_;
  EeController controller_;
  std::vector<JointState> samples_;
};

TEST_F(EeControllerTest, HoldsWithoutTargets) {
  const JointVector start = scene_.joints.angles;
  controller_.run_until(scene_, 1.0);
  EXPECT_EQ(scene_.joints.angles, start);
  EXPECT_EQ(samples_.size(), 50u);
  EXPECT_DOUBLE_EQ(scene_.sim_time, 1.0);
  EXPECT_EQ(controller_.targets_consumed(), 0);
}

TEST_F(EeControllerTest, TracksAStaticTarget) {
  Pose target = top_down_pose(Pose(0.5, 0.1, 0.1), 0.0, 0.0, 0.0);
  queue_.push(target);
  controller_.run_until(scene_, 5.0);
  EXPECT_LT(position_distance(tool(), target), 1e-3);
  EXPECT_LT(orientation_distance(tool(), target), 1e-2);
  EXPECT_EQ(controller_.ik_failures(), 0);
  EXPECT_FALSE(controller_.collision());
}

TEST_F(EeControllerTest, ConsumesTargetsAtControlRate) {
  const Pose base = tool();
  for (int k = 0; k < 100; ++k) {
    Pose p = base;
    p.set_position(base.position() + Eigen::Vector3d(0.0005 * k, 0.0, 0.0));
    ee_push_target(queue_, p);
    controller_.run_until(scene_, (k + 1) * 0.01);
  }
  // Control ticks at 0, 0.05, ..., 1.0 s.
  EXPECT_EQ(controller_.targets_consumed(), 21);
  EXPECT_EQ(samples_.size(), 50u);
}

TEST_F(EeControllerTest, RespectsJointVelocityLimits) {
  // A far target forces rate-limited motion.
  queue_.push(top_down_pose(Pose(0.3, -0.3, 0.05), 0.0, 0.0, 0.0));
  controller_.run_until(scene_, 4.0);
  ASSERT_GT(samples_.size(), 1u);
  const auto& joints = executor_.chain().joints();
  JointVector prev = samples_.front().angles;
  bool moved = false;
  for (std::size_t k = 1; k < samples_.size(); ++k) {
    EXPECT_NEAR(samples_[k].timestamp - samples_[k - 1].timestamp, 0.02, 1e-9);
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      const double step = std::abs(samples_[k].angles[i] - prev[i]);
      EXPECT_LE(step, joints[i].max_velocity * 0.02 + 1e-12);
      moved = moved || step > 0.0;
    }
    prev = samples_[k].angles;
  }
  EXPECT_TRUE(moved);
}

TEST_F(EeControllerTest, StopsOnCollision) {
  queue_.push(top_down_pose(Pose(0.4, 0.15, -0.05), 0.0, 0.0, 0.0));
  controller_.run_until(scene_, 6.0);
  ASSERT_TRUE(controller_.collision());
  EXPECT_NE(controller_.collision()->find("desktop"), std::string::npos);
  EXPECT_FALSE(controller_.goal());
  // The arm stopped before the fingertips went through the table.
  EXPECT_GT(tool().position().z(), -0.003);
  const JointVector stopped = scene_.joints.angles;
  controller_.run_until(scene_, 7.0);
  EXPECT_EQ(scene_.joints.angles, stopped);
  controller_.reset();
  EXPECT_FALSE(controller_.collision());
}

TEST_F(EeControllerTest, UnreachableTargetIsSkipped) {
  const JointVector start = scene_.joints.angles;
  queue_.push(Pose(3.0, 0.0, 0.0));
  controller_.run_until(scene_, 0.5);
  EXPECT_EQ(controller_.ik_failures(), 1);
  EXPECT_EQ(scene_.joints.angles, start);
}

}  // namespace
}  // namespace teleop
