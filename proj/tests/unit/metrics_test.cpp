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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "support.hpp"
#include "teleop/error.hpp"
#include "teleop/eval.hpp"
#include "teleop/metrics.hpp"

namespace teleop {
namespace {

TEST(Metrics, HsiTimesStartAtFirstGhostGrab) {
  TrialEvents e;
  e.task = "Task1";
  e.mode = ControlMode::HSI;
  e.ghost_grab(2.0);
  e.ghost_grab(3.5);
  e.execute_click = 6.0;
  e.execution_finished = 15.25;
  const MetricsRecord r = record_metrics(e);
  EXPECT_DOUBLE_EQ(r.interaction_time, 4.0);
  EXPECT_DOUBLE_EQ(r.completion_time, 13.25);
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.mode, ControlMode::HSI);
}

TEST(Metrics, EeTimesSpanTargetsToCompletion) {
  TrialEvents e;
  e.task = "Task2";
  e.mode = ControlMode::EE;
  e.target_pose(1.0);
  e.target_pose(1.05);
  e.task_complete = 31.0;
  e.collision = true;
  const MetricsRecord r = record_metrics(e);
  EXPECT_DOUBLE_EQ(r.completion_time, 30.0);
  EXPECT_DOUBLE_EQ(r.interaction_time, 30.0);
  EXPECT_FALSE(r.success);
}

TEST(Metrics, MissingOrUnorderedEvents) {
  TrialEvents hsi;
  hsi.mode = ControlMode::HSI;
  EXPECT_THROW(record_metrics(hsi), ValidationError);
  hsi.ghost_grab(5.0);
  hsi.execute_click = 4.0;
  hsi.execution_finished = 9.0;
  EXPECT_THROW(record_metrics(hsi), ValidationError);
  TrialEvents ee;
  ee.mode = ControlMode::EE;
  ee.target_pose(1.0);
  EXPECT_THROW(record_metrics(ee), ValidationError);
}

TEST(Metrics, JsonRoundTripAndAppend) {
  const MetricsRecord r{"Task3", 12.5, 4.25, false, ControlMode::EE};
  const nlohmann::json j = to_json(r);
  EXPECT_EQ(j.at("outcome"), "failure");
  EXPECT_EQ(j.at("mode"), "EE");
  EXPECT_EQ(metrics_from_json(j), r);
  EXPECT_THROW(control_mode_from_string("joystick"), Error);

  const auto path = std::filesystem::temp_directory_path() / "teleop_metrics_test.ndjson";
  std::filesystem::remove(path);
  append_metrics(path, r);
  append_metrics(path, MetricsRecord{"Task1", 9.0, 3.0, true, ControlMode::HSI});
  std::ifstream in(path);
  std::string line;
  std::vector<MetricsRecord> back;
  while (std::getline(in, line)) back.push_back(metrics_from_json(nlohmann::json::parse(line)));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], r);
  EXPECT_TRUE(back[1].success);
  std::filesystem::remove(path);
}

TEST(Report, MeansRatesAndOrder) {
  const std::vector<MetricsRecord> records{
      {"Task2", 20.0, 5.0, true, ControlMode::EE},  {"Task1", 10.0, 4.0, true, ControlMode::HSI},
      {"Task1", 14.0, 6.0, false, ControlMode::HSI}, {"Task1", 30.0, 30.0, true, ControlMode::EE},
  };
  const auto rows = summarize(records);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].task, "Task1");
  EXPECT_EQ(rows[0].mode, ControlMode::HSI);
  EXPECT_EQ(rows[0].runs, 2u);
  EXPECT_DOUBLE_EQ(rows[0].success_rate, 0.5);
  EXPECT_DOUBLE_EQ(rows[0].completion_mean, 12.0);
  EXPECT_DOUBLE_EQ(rows[0].completion_min, 10.0);
  EXPECT_DOUBLE_EQ(rows[0].completion_max, 14.0);
  EXPECT_DOUBLE_EQ(rows[0].interaction_mean, 5.0);
  EXPECT_EQ(rows[1].mode, ControlMode::EE);
  EXPECT_EQ(rows[2].task, "Task2");

  const std::string csv = report_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "task,mode,runs,success_rate,completion_mean,completion_min,completion_max,"
            "interaction_mean,interaction_min,interaction_max");
  EXPECT_NE(csv.find("Task1,HSI,2,0.5000,12.000,10.000,14.000,5.000,4.000,6.000\n"), std::string::npos) << csv;
  EXPECT_NE(report_bars(rows).find("Task1 HSI success_rate 0.5000"), std::string::npos);
}

TEST(Report, EmptyInputGivesHeaderOnly) {
  EXPECT_TRUE(summarize({}).empty());
  const std::string csv = report_csv({});
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);

  const auto dir = std::filesystem::temp_directory_path() / "teleop_report_test";
  std::filesystem::create_directories(dir);
  write_report({}, dir / "report.csv");
  EXPECT_TRUE(std::filesystem::exists(dir / "report.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "report.bars.dat"));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace teleop
