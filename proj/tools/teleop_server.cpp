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

#include <csignal>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "log_level.hpp"
#include "teleop/desktop_detect.hpp"
#include "teleop/error.hpp"
#include "teleop/point_cloud.hpp"
#include "teleop/scene_io.hpp"
#include "teleop/server.hpp"
#include "teleop/session.hpp"

namespace fs = std::filesystem;

namespace {

int serve(const fs::path& scene_path, const std::optional<fs::path>& cloud_path, std::uint16_t port,
          const std::optional<fs::path>& metrics, bool sim_clock, std::optional<std::uint64_t> seed,
          const std::optional<fs::path>& session_log, const fs::path& console_dir, const std::string& host) {
  teleop::SceneFile file = teleop::load_scene_file(scene_path);
  if (seed) file.detect_params.seed = *seed;
  std::optional<fs::path> cloud_file = cloud_path ? cloud_path : file.cloud;
  std::optional<teleop::PointCloud> cloud;
  if (cloud_file) {
    cloud = teleop::read_point_cloud(*cloud_file);
    if (cloud_path) {
      file.scene.desktop = teleop::detect_desktop(*cloud, file.detect_params);
      spdlog::info("desktop detected from {}: {:.3f} m^2", cloud_path->string(),
                   file.scene.desktop.triangulated_area());
    }
  }
  teleop::KinematicChain chain = file.chain ? teleop::load_chain(*file.chain) : teleop::kinova_gen3_chain();

  teleop::SessionOptions options;
  options.simulated_clock = sim_clock;
  options.detect = file.detect_params;
  options.metrics_path = metrics;
  options.session_log = session_log;
  options.scene_path = scene_path;
  options.cloud_path = cloud_path;

  // Block termination signals before any thread starts so sigwait owns them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  teleop::Session session(file.scene, std::move(cloud), std::move(chain), options);
  teleop::ServerOptions server_options;
  server_options.host = host;
  server_options.port = port;
  server_options.console_dir = console_dir;
  teleop::Server server(session, server_options);
  server.start();
  session.start();
  spdlog::info("teleop-server ready on port {} ({} clock)", server.port(), sim_clock ? "simulated" : "wall");

  int received = 0;
  sigwait(&signals, &received);
  spdlog::info("shutting down");
  server.stop();
  session.stop();
  return 0;
}

int detect(const fs::path& cloud_path, const fs::path& out, std::optional<std::uint64_t> seed) {
  const teleop::PointCloud cloud = teleop::read_point_cloud(cloud_path);
  teleop::DesktopDetectParams params;
  if (seed) params.seed = *seed;
  const teleop::DesktopMesh mesh = teleop::detect_desktop(cloud, params);
  std::ofstream file(out);
  if (!file) throw teleop::Error("cannot write " + out.string());
  file << teleop::desktop_to_json(mesh).dump(2) << '\n';
  std::cout << "normal " << mesh.normal.transpose() << " offset " << mesh.offset << " area "
            << mesh.triangulated_area() << " vertices " << mesh.boundary.size() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  teleop::tools::configure_logging();
  CLI::App app{"Teleoperation scene server"};
  app.require_subcommand(0, 1);

  fs::path scene;
  std::optional<fs::path> cloud;
  std::uint16_t port = 7447;
  std::optional<fs::path> metrics;
  std::optional<fs::path> session_log;
  std::optional<std::uint64_t> seed;
  std::string host = "0.0.0.0";
  fs::path console_dir = TELEOP_CONSOLE_DIR;
  bool sim_clock = false;
  app.add_option("--scene", scene, "Scene file")->check(CLI::ExistingFile);
  app.add_option("--cloud", cloud, "Point cloud to detect the desktop from")->check(CLI::ExistingFile);
  app.add_option("--port", port, "TCP port")->capture_default_str();
  app.add_option("--host", host, "Bind address")->capture_default_str();
  app.add_option("--metrics", metrics, "Append metrics records to this file");
  app.add_option("--session-log", session_log, "Record inbound frames for replay");
  app.add_option("--console-dir", console_dir, "Static console assets")->capture_default_str();
  app.add_option("--seed", seed, "RANSAC seed");
  auto* sim = app.add_flag("--sim-clock", sim_clock, "Simulated clock advanced by AdvanceClock");
  app.add_flag("--wall-clock", [&sim_clock](std::int64_t) { sim_clock = false; }, "Real-time clock (default)")
      ->excludes(sim);

  auto* detect_cmd = app.add_subcommand("detect", "Offline desktop detection");
  fs::path detect_cloud, detect_out;
  detect_cmd->add_option("--cloud", detect_cloud, "Point cloud")->required()->check(CLI::ExistingFile);
  detect_cmd->add_option("--out", detect_out, "Mesh output file")->required();
  detect_cmd->add_option("--seed", seed, "RANSAC seed");

  auto* replay_cmd = app.add_subcommand("replay", "Re-run a recorded session");
  fs::path log;
  replay_cmd->add_option("--log", log, "Session log")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  try {
    if (detect_cmd->parsed()) return detect(detect_cloud, detect_out, seed);
    if (replay_cmd->parsed()) {
      const std::size_t n = teleop::replay_session(log, std::cout);
      spdlog::info("replayed {} frames", n);
      return 0;
    }
    if (scene.empty()) {
      std::cerr << "--scene is required\n" << app.help();
      return 2;
    }
    return serve(scene, cloud, port, metrics, sim_clock, seed, session_log, console_dir, host);
  } catch (const teleop::Error& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
