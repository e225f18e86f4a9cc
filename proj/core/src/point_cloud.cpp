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

#include "teleop/point_cloud.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "teleop/error.hpp"

namespace teleop {

namespace {

static_assert(std::endian::native == std::endian::little, "binary cloud IO assumes a little-endian host");

bool parse_double(std::string_view token, double& out) {
  const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
  return res.ec == std::errc() && res.ptr == token.data() + token.size();
}

}  // namespace

PointCloud parse_ascii_cloud(std::string_view text) {
  PointCloud cloud;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    double xyz[3];
    int count = 0;
    std::size_t pos = 0;
    while (true) {
      pos = line.find_first_not_of(" \t\r", pos);
      if (pos == std::string_view::npos) break;
      const std::size_t end = std::min(line.find_first_of(" \t\r", pos), line.size());
      if (count == 3) throw ParseError("expected 3 coordinates, found more", line_no);
      if (!parse_double(line.substr(pos, end - pos), xyz[count])) {
        throw ParseError(fmt::format("bad number '{}'", line.substr(pos, end - pos)), line_no);
      }
      ++count;
      pos = end;
    }
    if (count == 0) continue;
    if (count != 3) throw ParseError(fmt::format("expected 3 coordinates, found {}", count), line_no);
    Eigen::Vector3d p(xyz[0], xyz[1], xyz[2]);
    if (!p.allFinite()) throw ParseError("non-finite coordinate", line_no);
    cloud.points.push_back(p);
  }
  return cloud;
}

PointCloud read_point_cloud(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open point cloud '" + path.string() + "'");
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (data.size() >= kBinaryCloudMagic.size() && data.compare(0, kBinaryCloudMagic.size(), kBinaryCloudMagic) == 0) {
    const std::size_t payload = data.size() - kBinaryCloudMagic.size();
    if (payload % (3 * sizeof(float)) != 0) throw ParseError("binary cloud payload is not a whole number of points");
    PointCloud cloud;
    cloud.points.reserve(payload / 12);
    const char* p = data.data() + kBinaryCloudMagic.size();
    for (std::size_t i = 0; i < payload / 12; ++i) {
      float v[3];
      std::memcpy(v, p + 12 * i, sizeof(v));
      Eigen::Vector3d pt(v[0], v[1], v[2]);
      if (!pt.allFinite()) throw ParseError(fmt::format("non-finite coordinate in point {}", i));
      cloud.points.push_back(pt);
    }
    return cloud;
  }
  return parse_ascii_cloud(data);
}

void write_ascii_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write point cloud '" + path.string() + "'");
  out << "# x y z (meters)\n";
  for (const auto& p : cloud.points) out << fmt::format("{} {} {}\n", p.x(), p.y(), p.z());
}

void write_binary_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write point cloud '" + path.string() + "'");
  out.write(kBinaryCloudMagic.data(), static_cast<std::streamsize>(kBinaryCloudMagic.size()));
  for (const auto& p : cloud.points) {
    const float v[3] = {static_cast<float>(p.x()), static_cast<float>(p.y()), static_cast<float>(p.z())};
    out.write(reinterpret_cast<const char*>(v), sizeof(v));
  }
}

}  // namespace teleop
