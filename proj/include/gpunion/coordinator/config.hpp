// Copyright 2026 The GPUnion Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "gpunion/core/time.hpp"
#include "gpunion/core/validation.hpp"
#include "gpunion/core/wire.hpp"

namespace gpunion::coord {

inline constexpr std::uint32_t kMissThreshold = 3;

struct SchedulerConfig {
  Duration heartbeat_interval{std::chrono::seconds(10)};
  std::uint32_t miss_threshold = kMissThreshold;
  double weight_volatility = 0.5;
  double weight_latency = 0.5;
  Duration grace_default{std::chrono::seconds(60)};
  Duration affinity_window_default{std::chrono::seconds(1800)};
  double volatility_alpha = 0.3;
  double volatility_prior = 1.0;  // events/day for a node with no history
  // Used only for migration downtime estimates.
  double link_bandwidth_mbps = 1000.0;
  Duration restore_overhead{std::chrono::seconds(5)};
};

// Throws Error(InvalidConfig).
void validate(const SchedulerConfig& config);

struct CoordinatorConfig {
  SchedulerConfig scheduler;
  DigestAllowList allow_list;
  std::string bind_address = "127.0.0.1";
  int port = 8470;
  std::string api_token;  // empty: job and operator endpoints are open
  std::optional<std::filesystem::path> event_log_path;
  std::optional<std::filesystem::path> ui_dir;
};

// Config documents use exactly the SchedulerConfig field names at top level
// (durations with an `_s` suffix), plus `allow_list`.
SchedulerConfig scheduler_config_from_json(const Json& j);
Json to_json(const SchedulerConfig& config);
CoordinatorConfig coordinator_config_from_json(const Json& j);
CoordinatorConfig load_coordinator_config(const std::filesystem::path& path);

}  // namespace gpunion::coord
