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

#include "support.hpp"
#include "teleop/error.hpp"
#include "teleop/scene_io.hpp"

namespace teleop {
namespace {

const char* kScene = R"({
  "catalog": [
    {"model_id": "block", "half_extents": [0.03, 0.025, 0.04], "mass": 0.3, "grasp_width": 0.05}
  ],
  "instances": [
    {"instance_id": "block_1", "model_id": "block", "pose": [0.4, 0.0, 0.04, 1, 0, 0, 0]}
  ],
  "desktop": {"plane": {"normal": [0, 0, 1], "offset": 0}, "boundary": [[0, -0.5], [1, -0.5], [1, 0.5], [0, 0.5]]},
  "arm_start": [0, 0, 0, 0, 0, 0, 0]
})";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return text.replace(pos, from.size(), to);
}

TEST(SceneIo, ParsesAMinimalScene) {
  const SceneFile file = parse_scene(kScene);
  const SceneState& s = file.scene;
  ASSERT_EQ(s.objects.size(), 1u);
  EXPECT_EQ(s.objects[0].ghost_pose, s.objects[0].actual_pose);
  EXPECT_NEAR(s.desktop.triangulated_area(), 1.0, 1e-12);
  EXPECT_FALSE(file.cloud);
  EXPECT_FALSE(file.chain);
  EXPECT_DOUBLE_EQ(s.gripper_aperture, kMaxGripperAperture);
}

TEST(SceneIo, SyntaxErrorsReportTheLine) {
  const std::string broken = replace(kScene, R"("mass": 0.3,)", R"("mass": 0.3,,)");
  try {
    parse_scene(broken);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u) << e.what();
    EXPECT_EQ(std::string(e.what()).rfind("line 3: ", 0), 0u) << e.what();
  }
}

TEST(SceneIo, FieldErrorsReportThePath) {
  struct Case {
    std::string from, to, field;
  };
  const Case cases[] = {
      {R"("mass": 0.3)", R"("mass": "heavy")", "/catalog/0/mass"},
      {R"("pose": [0.4, 0.0, 0.04, 1, 0, 0, 0])", R"("pose": [0.4, 0.0])", "/instances/0/pose"},
      {R"("instance_id": "block_1", )", "", "/instances/0/instance_id"},
      {R"("arm_start": [0, 0, 0, 0, 0, 0, 0])", R"("arm_start": [0, 0])", "/arm_start"},
      {R"([1, 0.5], )", R"([1, "x"], )", "/desktop/boundary/2/1"},
  };
  for (const auto& c : cases) {
    try {
      parse_scene(replace(kScene, c.from, c.to));
      ADD_FAILURE() << "no error for " << c.field;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.field(), c.field) << e.what();
    }
  }
}

TEST(SceneIo, SemanticErrors) {
  EXPECT_THROW(parse_scene(replace(kScene, R"("model_id": "block", "pose")", R"("model_id": "brick", "pose")")),
               ValidationError);
  EXPECT_THROW(parse_scene(replace(kScene, R"("grasp_width": 0.05)", R"("grasp_width": 0.2)")), ValidationError);
  EXPECT_THROW(parse_scene(replace(kScene, "[0.4, 0.0, 0.04,", "[0.4, 0.0, 0.01,")), ValidationError);
  // Bow-tie boundary.
  EXPECT_THROW(parse_scene(replace(kScene, "[[0, -0.5], [1, -0.5], [1, 0.5], [0, 0.5]]",
                                   "[[0, -0.5], [1, 0.5], [1, -0.5], [0, 0.5]]")),
               ValidationError);
}

TEST(SceneIo, RoundTripThroughSave) {
  for (const char* name : {"task1", "task2", "task3"}) {
    const SceneState a = load_scene(test::data_dir() / "scenes" / (std::string(name) + ".json"));
    const auto path = std::filesystem::temp_directory_path() / (std::string("teleop_roundtrip_") + name + ".json");
    save_scene(path, a);
    const SceneState b = load_scene(path);
    ASSERT_EQ(a.objects.size(), b.objects.size());
    for (std::size_t i = 0; i < a.objects.size(); ++i) {
      EXPECT_EQ(a.objects[i].instance_id, b.objects[i].instance_id);
      EXPECT_EQ(a.objects[i].actual_pose, b.objects[i].actual_pose);
    }
    EXPECT_EQ(a.desktop.boundary, b.desktop.boundary);
    EXPECT_EQ(a.joints.angles, b.joints.angles);
    EXPECT_EQ(scene_to_json(a), scene_to_json(b));
    std::filesystem::remove(path);
  }
}

TEST(SceneIo, CloudSceneDetectsItsDesktop) {
  const SceneFile file = load_scene_file(test::data_dir() / "scenes" / "tabletop_cloud.json");
  ASSERT_TRUE(file.cloud);
  EXPECT_TRUE(file.scene.desktop.covers(0.5, 0.0));
  EXPECT_FALSE(file.scene.desktop.covers(1.2, 0.0));
  EXPECT_NEAR(file.scene.desktop.triangulated_area(), 0.63, 0.05);
}

}  // namespace
}  // namespace teleop
