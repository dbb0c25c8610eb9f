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

#include <filesystem>
#include <string>
#include <vector>

#include "gpunion/core/time.hpp"
#include "gpunion/core/types.hpp"
#include "gpunion/core/wire.hpp"

namespace gpunion::agent {

enum class RuntimeKind { Simulated, OciRuntime };

struct AgentConfig {
  std::string coordinator_url = "http://127.0.0.1:8470";
  std::filesystem::path state_dir = "gpunion-agent";
  Duration heartbeat_interval{std::chrono::seconds(10)};
  Duration grace_default{std::chrono::seconds(60)};
  RuntimeKind runtime = RuntimeKind::Simulated;
  std::vector<GpuDescriptor> gpus;  // advertised GPUs
  double latency_ms = 1.0;          // advertised until measured
  double link_bandwidth_mbps = 1000.0;
  Duration restore_overhead{std::chrono::seconds(5)};
  // Final checkpoints on departure are Full instead of a delta, so the next
  // node restores one payload rather than a chain.
  bool consolidate_on_departure = false;
  std::string control_bind = "127.0.0.1";
  int control_port = 8471;
};

// Throws Error(InvalidConfig), or Error(RuntimeFailure) for a runtime this
// build does not provide.
void validate(const AgentConfig& config);

// Heartbeat intervals must agree within 10%.
bool interval_matches(Duration agent, Duration coordinator);

AgentConfig agent_config_from_json(const Json& j);
AgentConfig load_agent_config(const std::filesystem::path& path);

std::string_view to_string(RuntimeKind kind);

}  // namespace gpunion::agent
