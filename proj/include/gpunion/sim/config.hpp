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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpunion/coordinator/config.hpp"
#include "gpunion/core/types.hpp"
#include "gpunion/core/wire.hpp"
#include "gpunion/resilience/checkpoint.hpp"

namespace gpunion::sim {

// Interruption rates the churn model is meant for, events/day per node.
inline constexpr double kMinStudiedRate = 0.5;
inline constexpr double kMaxStudiedRate = 3.2;

struct SimNode {
  std::string name;
  std::uint32_t gpu_count = 1;
  std::int64_t gpu_memory_mib = 24576;
  ComputeCapability capability{8, 6};
  double latency_ms = 1.0;
  std::string gpu_model = "sim-gpu";
};

struct KindMix {
  double scheduled = 1.0 / 3.0;
  double emergency = 1.0 / 3.0;
  double temporary = 1.0 / 3.0;
};

struct TemporaryDurationDist {
  double mean_s = 1800.0;
  std::string distribution = "exponential";
};

// `count` identical jobs submitted at `submit_at`, owned by node `owner` in
// the static-ownership baseline.
struct SimWorkload {
  std::string name;
  JobSpec spec;
  resilience::WorkloadStateModel state;
  Duration submit_at{0};
  std::size_t owner = 0;
  std::uint32_t count = 1;
};

struct SimConfig {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  std::vector<SimNode> nodes;
  std::vector<double> interruption_rates;  // events/day, one per node
  KindMix kind_mix;
  TemporaryDurationDist temporary_duration_dist;
  std::vector<SimWorkload> workloads;
  double link_bandwidth_mbps = 1000.0;
  double campus_bandwidth_mbps = 40000.0;
  Duration sim_duration{std::chrono::hours(24 * 7)};

  coord::SchedulerConfig scheduler;
  Duration grace{std::chrono::seconds(600)};  // drain grace on scheduled departures
  Duration rejoin_delay_mean{std::chrono::hours(4)};  // exponential; departed nodes come back
  bool consolidate_on_departure = false;
  // Rates of 0 (stable nodes) are always allowed; others must lie in the
  // studied range unless this is set.
  bool allow_unstudied_rates = false;
  // Interruptions arrive only inside this window (default: whole run).
  Duration interruptions_from{0};
  std::optional<Duration> interruptions_until;
};

// Throws Error(InvalidConfig).
void validate(const SimConfig& config);

// Keys are the SimConfig field names; durations carry an `_s` suffix.
SimConfig sim_config_from_json(const Json& j);
Json to_json(const SimConfig& config);
SimConfig load_sim_config(const std::filesystem::path& path);

// NodeId of the node at `index`; ids sort in index order.
NodeId sim_node_id(std::size_t index);

}  // namespace gpunion::sim
