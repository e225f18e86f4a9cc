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

#include <cstdlib>
#include <string>

#include <spdlog/spdlog.h>

namespace teleop::tools {

/// TELEOP_LOG_LEVEL: trace, debug, info, warn, error, critical or off.
inline void configure_logging() {
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("TELEOP_LOG_LEVEL")) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off") {
      spdlog::warn("ignoring unknown TELEOP_LOG_LEVEL '{}'", env);
    } else {
      spdlog::set_level(level);
    }
  }
}

}  // namespace teleop::tools
