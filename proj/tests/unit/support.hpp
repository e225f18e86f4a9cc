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

#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Geometry>

#include "teleop/geometry.hpp"
#include "teleop/pose.hpp"

namespace teleop::test {

inline std::filesystem::path data_dir() { return TELEOP_TEST_DATA_DIR; }
inline std::filesystem::path golden_dir() { return TELEOP_TEST_GOLDEN_DIR; }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::Quaterniond random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized();
}

inline Polygon2 rectangle(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

/// Star-shaped polygon around the origin with `n` vertices, CCW.
inline Polygon2 random_star(std::mt19937_64& rng, int n) {
  Polygon2 poly;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * (i + uniform(rng, 0.1, 0.9)) / n;
    const double r = uniform(rng, 0.3, 1.0);
    poly.emplace_back(r * std::cos(a), r * std::sin(a));
  }
  return poly;
}

}  // namespace teleop::test
