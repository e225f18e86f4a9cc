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
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace teleop {

struct PointCloud {
  std::vector<Eigen::Vector3d> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

/// First 16 bytes of the binary cloud format, followed by little-endian
/// float32 x y z triples.
inline constexpr std::string_view kBinaryCloudMagic = "TELEOP-PCL-F32LE";

/// Reads either format; the binary one is recognized by its magic header.
/// Throws ParseError with the offending line for ASCII input.
PointCloud read_point_cloud(const std::filesystem::path& path);
PointCloud parse_ascii_cloud(std::string_view text);
void write_ascii_cloud(const std::filesystem::path& path, const PointCloud& cloud);
void write_binary_cloud(const std::filesystem::path& path, const PointCloud& cloud);

}  // namespace teleop
