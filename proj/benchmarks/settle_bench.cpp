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

#include <benchmark/benchmark.h>

#include "settle_oracle.hpp"
#include "teleop/settle.hpp"

namespace {

void BM_SettleDrop(benchmark::State& state) {
  std::mt19937_64 rng(42);
  std::vector<teleop::oracle::DropScene> drops;
  std::vector<teleop::SceneState> scenes;
  for (int i = 0; i < 64; ++i) {
    drops.push_back(teleop::oracle::random_drop(rng));
    scenes.push_back(teleop::oracle::drop_scene_state(drops.back()));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& d = drops[i % drops.size()];
    benchmark::DoNotOptimize(
        teleop::settle(scenes[i % scenes.size()], "drop", teleop::Pose::from_yaw(d.drop_position, d.drop_yaw)));
    ++i;
  }
}
BENCHMARK(BM_SettleDrop)->Unit(benchmark::kMicrosecond);

void BM_SettleOracle(benchmark::State& state) {
  std::mt19937_64 rng(42);
  const auto d = teleop::oracle::random_drop(rng);
  for (auto _ : state) benchmark::DoNotOptimize(teleop::oracle::settle_drop(d));
}
BENCHMARK(BM_SettleOracle)->Unit(benchmark::kMicrosecond);

}  // namespace
