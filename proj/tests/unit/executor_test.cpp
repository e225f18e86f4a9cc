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

#include <cmath>

#include <gtest/gtest.h>

#include "scene_fixtures.hpp"
#include "teleop/error.hpp"
#include "teleop/scene_io.hpp"
#include "teleop/task_executor.hpp"

namespace teleop {
namespace {

class ExecutorTest : public ::testing::Test {
 protected:
  ExecutorTest() : scene_(load_scene(test::data_dir() / "scenes" / "task1.json")),
                   executor_(kinova_gen3_chain(), clock_) {
    executor_.set_observer([this](const SceneState& s) { stamps_.push_back(s.sim_time); });
  }

  TaskRequest move_mustard(const Pose& target) const {
    return TaskRequest{{MoveRequest{"mustard_1", scene_.object("mustard_1").actual_pose, target}}};
  }

  SimClock clock_;
  SceneState scene_;
  TaskExecutor executor_;
  std::vector<double> stamps_;
};

TEST_F(ExecutorTest, PickAndPlaceLandsOnTarget) {
  const Pose target(0.45, 0.15, 0.05);
  const ExecutionReport report = executor_.execute_task(scene_, move_mustard(target));
  ASSERT_TRUE(report.success) << report.moves.front().detail;
  EXPECT_FALSE(report.aborted);
  const Pose final_pose = scene_.object("mustard_1").actual_pose;
  EXPECT_LT(position_distance(final_pose, target), 1e-6);
  EXPECT_LT(orientation_distance(final_pose, target), 1e-6);
  EXPECT_EQ(scene_.object("mustard_1").ghost_pose, final_pose);
  EXPECT_FALSE(scene_.object("mustard_1").held);
  ASSERT_EQ(report.moves.size(), 1u);
  EXPECT_EQ(report.moves[0].support->kind, SupportKind::Desktop);
  EXPECT_DOUBLE_EQ(report.end_time, scene_.sim_time);
  EXPECT_DOUBLE_EQ(clock_.now(), scene_.sim_time);
}

TEST_F(ExecutorTest, PhasesAreOrderedAndTimed) {
  const ExecutionReport report = executor_.execute_task(scene_, move_mustard(Pose(0.45, 0.15, 0.05)));
  const std::vector<std::string> expected{"approach", "descend", "grasp", "lift", "transfer",
                                          "place",    "release", "retreat", "done"};
  ASSERT_EQ(report.moves[0].phases.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(report.moves[0].phases[i].phase, expected[i]);
    if (i > 0) EXPECT_GE(report.moves[0].phases[i].time, report.moves[0].phases[i - 1].time);
  }
  EXPECT_GT(report.end_time, report.start_time);
}

TEST_F(ExecutorTest, JointSamplesArePublishedAtFiftyHertz) {
  executor_.execute_task(scene_, move_mustard(Pose(0.45, 0.15, 0.05)));
  std::vector<double> unique;
  for (double t : stamps_) {
    if (unique.empty() || t > unique.back() + 1e-12) unique.push_back(t);
  }
  ASSERT_GT(unique.size(), 100u);
  for (std::size_t k = 1; k < unique.size(); ++k) EXPECT_NEAR(unique[k] - unique[k - 1], 0.02, 1e-9) << k;
}

TEST_F(ExecutorTest, CollisionAbortsTheTask) {
  // A tall post between the pick and place positions.
  test::add_object(scene_, "post", test::box_model("post", {0.03, 0.03, 0.2}), Pose(0.45, 0.0, 0.2));
  TaskRequest request = move_mustard(Pose(0.45, 0.15, 0.05));
  request.moves.push_back(request.moves.front());
  const ExecutionReport report = executor_.execute_task(scene_, request);
  EXPECT_FALSE(report.success);
  EXPECT_TRUE(report.aborted);
  ASSERT_EQ(report.moves.size(), 1u);
  EXPECT_EQ(report.moves[0].outcome, MoveOutcome::Collision);
  EXPECT_NE(report.moves[0].detail.find("'post'"), std::string::npos) << report.moves[0].detail;
  EXPECT_EQ(report.moves[0].phases.back().phase, "abort");
  EXPECT_EQ(scene_.held_object(), nullptr);
}

TEST_F(ExecutorTest, EmptyGraspIsAGraspFailure) {
  TaskRequest request = move_mustard(Pose(0.45, 0.15, 0.05));
  request.moves[0].initial_pose = Pose(0.35, -0.15, 0.05);
  const ExecutionReport report = executor_.execute_task(scene_, request);
  EXPECT_FALSE(report.success);
  EXPECT_FALSE(report.aborted);
  EXPECT_EQ(report.moves[0].outcome, MoveOutcome::GraspFailure);
  EXPECT_EQ(to_string(report.moves[0].outcome), "grasp_failure");
  EXPECT_EQ(scene_.object("mustard_1").actual_pose.position(), Eigen::Vector3d(0.45, -0.15, 0.05));
}

TEST_F(ExecutorTest, RejectsBadRequestsWithoutMoving) {
  const Eigen::Quaterniond tilted(Eigen::AngleAxisd(0.2, Eigen::Vector3d::UnitX()));
  EXPECT_THROW(executor_.execute_task(scene_, move_mustard(Pose(Eigen::Vector3d(0.45, 0.15, 0.05), tilted))),
               ValidationError);
  TaskRequest unknown = move_mustard(Pose(0.45, 0.15, 0.05));
  unknown.moves[0].instance_id = "ghost_9";
  EXPECT_THROW(executor_.execute_task(scene_, unknown), NotFoundError);
  EXPECT_EQ(scene_.sim_time, 0.0);
  EXPECT_TRUE(stamps_.empty());
}

TEST_F(ExecutorTest, GraspAndReleaseServices) {
  // Without an object under the tool the gripper closes fully.
  const GraspResult empty = executor_.grasp(scene_);
  EXPECT_FALSE(empty.success());
  EXPECT_DOUBLE_EQ(scene_.gripper_aperture, 0.0);
  const ReleaseResult open = executor_.release(scene_);
  EXPECT_FALSE(open.instance_id);
  EXPECT_DOUBLE_EQ(scene_.gripper_aperture, kMaxGripperAperture);
  // Released in about 0.85 s of opening plus 0.85 s of closing.
  EXPECT_NEAR(scene_.sim_time, 1.7, 0.021);
}

TEST(DetectCollision, FingersAgainstDesktop) {
  SceneState s;
  s.desktop = test::flat_desk(-1, -1, 1, 1);
  const Pose down = top_down_pose(Pose(0.3, 0.0, 0.0), 0.0, 0.0, 0.0);
  Pose above = down;
  above.set_position({0.3, 0.0, 0.05});
  EXPECT_FALSE(detect_collision(s, above, 0.002));
  Pose into = down;
  into.set_position({0.3, 0.0, -0.003});
  const auto hit = detect_collision(s, into, 0.002);
  ASSERT_TRUE(hit);
  EXPECT_NE(hit->find("desktop"), std::string::npos);
  into.set_position({0.3, 0.0, -0.001});
  EXPECT_FALSE(detect_collision(s, into, 0.002));
}

}  // namespace
}  // namespace teleop
