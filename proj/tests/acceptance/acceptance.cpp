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

// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "live_server.hpp"
#include "settle_oracle.hpp"
#include "synthetic.hpp"
#include "teleop/arm_model.hpp"
#include "teleop/client.hpp"
#include "teleop/desktop_detect.hpp"
#include "teleop/eval.hpp"
#include "teleop/gripper.hpp"
#include "teleop/protocol.hpp"
#include "teleop/settle.hpp"

namespace {

using namespace teleop;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

const std::filesystem::path kData = TELEOP_TEST_DATA_DIR;
const std::filesystem::path kGolden = TELEOP_TEST_GOLDEN_DIR;
constexpr JointVector kArmStart{0.0194, 0.3563, 3.1180, -1.4778, 0.0085, -1.3076, -0.0049};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[" << what << "] ";
    }
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome desktop_detection() {
  Outcome o;
  const synth::Tabletop table = synth::make_tabletop({});
  const auto t0 = Clock::now();
  const DesktopMesh mesh = detect_desktop(table.cloud);
  const double runtime = seconds_since(t0);
  const double angle = std::acos(std::clamp(mesh.normal.dot(table.normal), -1.0, 1.0)) * 180.0 / M_PI;
  const double offset_err = std::abs(mesh.offset - table.offset);
  const double area_err = std::abs(mesh.triangulated_area() - table.area) / table.area;
  o.require(angle < 1.0, "normal within 1 deg");
  o.require(offset_err < 0.005, "offset within 5 mm");
  o.require(area_err < 0.05, "area within 5%");
  o.require(runtime < 2.0, "runtime < 2 s");
  o.detail << "points=" << table.cloud.points.size() << " angle=" << angle << "deg offset_err=" << offset_err
           << "m area_err=" << 100 * area_err << "% runtime=" << runtime << "s";
  return o;
}

Outcome settle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(42);
  int matched = 0, on_base = 0;
  double worst = 0.0;
  const int scenes = 200;
  const auto t0 = Clock::now();
  for (int i = 0; i < scenes; ++i) {
    const oracle::DropScene d = oracle::random_drop(rng);
    const SceneState s = oracle::drop_scene_state(d);
    const SettleResult r = settle(s, "drop", Pose::from_yaw(d.drop_position, d.drop_yaw));
    const oracle::DropResult expected = oracle::settle_drop(d);
    matched += (r.support.kind == SupportKind::OnObject) == expected.on_base ? 1 : 0;
    on_base += expected.on_base ? 1 : 0;
    worst = std::max(worst, std::abs(r.final_pose.position().z() - expected.final_z));
  }
  const double runtime = seconds_since(t0);
  o.require(matched == scenes, "support classification 100%");
  o.require(worst < 1e-3, "height within 1e-3 m");
  o.require(runtime < 5.0, "runtime < 5 s");
  o.detail << "matched=" << matched << "/" << scenes << " on_base=" << on_base << " max_height_err=" << worst
           << "m runtime=" << runtime << "s";
  return o;
}

Outcome kinematics() {
  Outcome o;
  const KinematicChain chain = kinova_gen3_chain();
  std::mt19937_64 rng(2026);
  auto u = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  double worst = 0.0;
  const double h = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    JointVector q{};
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      q[i] = u(std::max(chain.joints()[i].lower, -M_PI), std::min(chain.joints()[i].upper, M_PI));
    }
    const Jacobian jac = jacobian(chain, q);
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      JointVector plus = q, minus = q;
      plus[i] += h;
      minus[i] -= h;
      const Pose a = forward_kinematics(chain, plus), b = forward_kinematics(chain, minus);
      Eigen::Matrix<double, 6, 1> fd;
      fd.head<3>() = (a.position() - b.position()) / (2 * h);
      fd.tail<3>() = rotation_vector(a.rotation() * b.rotation().transpose()) / (2 * h);
      worst = std::max(worst, (jac.col(static_cast<Eigen::Index>(i)) - fd).cwiseAbs().maxCoeff());
    }
  }

  int converged = 0;
  double pos_worst = 0.0, rot_worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Pose object = Pose::from_yaw({u(0.25, 0.65), u(-0.3, 0.3), u(0.0, 0.15)}, u(-M_PI / 2, M_PI / 2));
    const Pose target = top_down_pose(object, 0.0, 0.0, 0.0);
    const IkResult r = ik_solve(chain, target, kArmStart);
    if (!r.ok()) continue;
    const Pose reached = forward_kinematics(chain, r.angles);
    const double pe = position_distance(reached, target), re = orientation_distance(reached, target);
    pos_worst = std::max(pos_worst, pe);
    rot_worst = std::max(rot_worst, re);
    if (pe < 1e-3 && re < 1e-2) ++converged;
  }
  o.require(worst < 1e-5, "Jacobian error < 1e-5");
  o.require(converged >= 95, "IK convergence >= 95%");
  o.detail << "jacobian_max_err=" << worst << " ik_converged=" << converged << "/100 fk_pos_err<=" << pos_worst
           << "m fk_rot_err<=" << rot_worst << "rad";
  return o;
}

Outcome gripper() {
  Outcome o;
  GripperConfig config;
  config.current_gain = 60.0;
  config.current_threshold = 0.12;
  const ClosureResult r = simulate_closure(kMaxGripperAperture, 0.05, config);
  const double squeeze_mm = r.squeeze * 1000.0;
  const double travel = kMaxGripperAperture - r.final_aperture;
  const double timing_gap = std::abs(r.duration - travel / 0.1);
  o.require(r.stopped_on_contact, "stopped on contact");
  o.require(std::abs(squeeze_mm - 2.0) <= 0.1, "squeeze 2.0 +- 0.1 mm");
  o.require(config.close_speed == 0.1 && timing_gap <= config.step + 1e-12, "speed 0.1 m/s within one step");
  o.detail << "squeeze=" << squeeze_mm << "mm duration=" << r.duration << "s travel=" << travel
           << "m speed=" << travel / r.duration << "m/s";
  return o;
}

std::vector<RunResult> g_runs;

Outcome end_to_end() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto fixtures = load_fixtures(kData / "fixtures");
  o.require(fixtures.size() == 3, "three task fixtures");
  for (const auto& f : fixtures) {
    for (ControlMode mode : {ControlMode::HSI, ControlMode::EE}) {
      RunResult r;
      try {
        r = run_fixture(f, mode);
      } catch (const std::exception& e) {
        o.require(false, f.label + " " + to_string(mode) + " threw: " + e.what());
        continue;
      }
      o.require(r.record.success && r.goals_met, f.label + " " + to_string(mode) + " success");
      if (f.label == "Task3") {
        bool stacked = false;
        for (const auto& g : f.goals) {
          const auto it = r.supports.find(g.instance_id);
          stacked = it != r.supports.end() && it->second.kind == SupportKind::OnObject;
        }
        o.require(stacked, "Task3 " + to_string(mode) + " OnObject");
      }
      o.detail << f.label << "/" << to_string(mode) << "=" << (r.record.success ? "ok" : "fail") << "("
               << r.record.completion_time << "s) ";
      g_runs.push_back(std::move(r));
    }
  }
  const double runtime = seconds_since(t0);
  o.require(runtime < 60.0, "wall time < 60 s");
  o.detail << "wall=" << runtime << "s";
  return o;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json random_json(std::mt19937_64& rng, int depth) {
  const int kind = std::uniform_int_distribution<int>(0, depth > 2 ? 4 : 6)(rng);
  switch (kind) {
    case 0:
      return nullptr;
    case 1:
      return std::uniform_int_distribution<int>(0, 1)(rng) == 1;
    case 2:
      return std::uniform_int_distribution<std::int64_t>(-(1LL << 53), 1LL << 53)(rng);
    case 3:
      return std::uniform_real_distribution<double>(-1e3, 1e3)(rng);
    case 4: {
      std::string s(std::uniform_int_distribution<std::size_t>(0, 16)(rng), ' ');
      for (auto& c : s) c = static_cast<char>(std::uniform_int_distribution<int>(1, 127)(rng));
      return s;
    }
    case 5: {
      json a = json::array();
      for (int i = std::uniform_int_distribution<int>(0, 4)(rng); i > 0; --i) a.push_back(random_json(rng, depth + 1));
      return a;
    }
    default: {
      json obj = json::object();
      for (int i = std::uniform_int_distribution<int>(0, 4)(rng); i > 0; --i) {
        obj["f" + std::to_string(std::uniform_int_distribution<int>(0, 9)(rng))] = random_json(rng, depth + 1);
      }
      return obj;
    }
  }
}

Outcome protocol() {
  Outcome o;
  int golden = 0, golden_ok = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kGolden / "frames")) {
    if (entry.path().extension() != ".json") continue;
    ++golden;
    const json cfg = json::parse(read_file(entry.path()));
    Frame f;
    f.kind = frame_kind_from_string(cfg.at("kind").get<std::string>());
    f.name = cfg.at("name").get<std::string>();
    if (cfg.contains("id") && !cfg.at("id").is_null()) f.id = cfg.at("id").get<std::int64_t>();
    f.payload = cfg.at("payload");
    auto bin = entry.path();
    bin.replace_extension(".bin");
    const std::string wire = read_file(bin);
    bool ok = encode_frame(f) == wire;
    try {
      ok = ok && decode_body(std::string_view(wire).substr(kFrameHeaderSize)) == f;
    } catch (const std::exception&) {
      ok = false;
    }
    golden_ok += ok ? 1 : 0;
  }
  o.require(golden > 0 && golden_ok == golden, "golden corpus byte-exact");

  std::mt19937_64 rng(7);
  int round_trips = 0;
  FrameReader reader;
  for (int i = 0; i < 1000; ++i) {
    Frame f;
    f.kind = static_cast<FrameKind>(i % 4);
    f.name = "n" + std::to_string(i);
    if (f.kind != FrameKind::Topic) f.id = i;
    f.payload = json::object({{"value", random_json(rng, 0)}});
    reader.feed(encode_frame(f));
    const auto body = reader.next_body();
    round_trips += body && decode_body(*body) == f && encode_body(decode_body(*body)) == *body ? 1 : 0;
  }
  o.require(round_trips == 1000, "1000 round trips");

  bool identical = false;
  std::size_t count = 0;
  try {
    test::LiveServer live(kData / "scenes" / "task1.json");
    Client a("127.0.0.1", live.port()), b("127.0.0.1", live.port());
    a.call("Subscribe", {{"topics", {"joint_states"}}});
    b.call("Subscribe", {{"topics", {"joint_states"}}});
    a.call("AdvanceClock", {{"seconds", 1.0}});
    b.call("GetScene");  // everything published before this reply has reached b
    const auto fa = a.take_topics(), fb = b.take_topics();
    count = fa.size();
    identical = !fa.empty() && fa.size() == fb.size();
    for (std::size_t k = 0; identical && k < fa.size(); ++k) identical = encode_body(fa[k]) == encode_body(fb[k]);
  } catch (const std::exception& e) {
    o.detail << "server error: " << e.what() << " ";
  }
  o.require(identical, "identical subscriber sequences");
  o.detail << "golden=" << golden_ok << "/" << golden << " round_trips=" << round_trips
           << " joint_states_per_subscriber=" << count;
  return o;
}

Outcome metrics_structure() {
  Outcome o;
  o.require(!g_runs.empty(), "end-to-end runs available");
  int hsi = 0, ee = 0;
  for (const auto& r : g_runs) {
    const MetricsRecord& m = r.record;
    if (m.mode == ControlMode::HSI) {
      ++hsi;
      o.require(m.interaction_time < m.completion_time, m.task + " HSI interaction < completion");
    } else {
      ++ee;
      o.require(m.interaction_time == m.completion_time, m.task + " EE interaction == completion");
    }
  }
  o.detail << "hsi_runs=" << hsi << " ee_runs=" << ee;
  return o;
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"desktop-detection", desktop_detection}, {"settle-oracle-equivalence", settle_equivalence},
      {"kinematics", kinematics},               {"gripper-model", gripper},
      {"end-to-end-tasks", end_to_end},         {"protocol", protocol},
      {"metrics-structure", metrics_structure},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
