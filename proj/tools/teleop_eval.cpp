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
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "log_level.hpp"
#include "teleop/error.hpp"
#include "teleop/eval.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  teleop::tools::configure_logging();
  CLI::App app{"Scripted task evaluation"};
  fs::path fixtures;
  std::string mode = "both";
  fs::path out = "report.csv";
  std::optional<fs::path> records_path;
  app.add_option("--fixtures", fixtures, "Fixture directory")->required()->check(CLI::ExistingDirectory);
  app.add_option("--mode", mode, "Control mode")->check(CLI::IsMember({"hsi", "ee", "both"}))->capture_default_str();
  app.add_option("--out", out, "Report CSV; a .bars.dat file is written next to it")->capture_default_str();
  app.add_option("--records", records_path, "Append raw metrics records here");
  CLI11_PARSE(app, argc, argv);

  std::vector<teleop::ControlMode> modes;
  if (mode != "ee") modes.push_back(teleop::ControlMode::HSI);
  if (mode != "hsi") modes.push_back(teleop::ControlMode::EE);

  try {
    std::vector<teleop::MetricsRecord> records;
    int failures = 0;
    for (const auto& fixture : teleop::load_fixtures(fixtures)) {
      for (const auto m : modes) {
        const teleop::RunResult r = teleop::run_fixture(fixture, m);
        records.push_back(r.record);
        if (records_path) teleop::append_metrics(*records_path, r.record);
        failures += r.record.success ? 0 : 1;
        std::cout << fixture.name << ' ' << teleop::to_string(m) << ": " << (r.record.success ? "success" : "failure")
                  << " completion " << r.record.completion_time << " s interaction " << r.record.interaction_time
                  << " s\n";
        for (const auto& d : r.diagnostics) std::cout << "  " << d << '\n';
      }
    }
    teleop::write_report(records, out);
    std::cout << teleop::report_csv(teleop::summarize(records));
    return failures == 0 ? 0 : 3;
  } catch (const teleop::Error& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
