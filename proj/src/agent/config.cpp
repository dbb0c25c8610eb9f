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

#include "gpunion/agent/config.hpp"

#include <cmath>
#include <fstream>

#include "gpunion/core/error.hpp"
#include "gpunion/core/validation.hpp"

namespace gpunion::agent {

std::string_view to_string(RuntimeKind kind) {
  return kind == RuntimeKind::Simulated ? "Simulated" : "OciRuntime";
}

void validate(const AgentConfig& c) {
  if (c.heartbeat_interval.count() <= 0) {
    throw Error(ErrorCode::InvalidConfig, "heartbeat_interval_s must be positive");
  }
  if (c.grace_default.count() < 0) throw Error(ErrorCode::InvalidConfig, "grace_s must be nonnegative");
  if (c.link_bandwidth_mbps <= 0.0) {
    throw Error(ErrorCode::InvalidConfig, "link_bandwidth_mbps must be positive");
  }
  for (const auto& gpu : c.gpus) {
    if (!validate_gpu(gpu)) throw Error(ErrorCode::InvalidConfig, "invalid GPU descriptor");
  }
  if (c.control_bind != "127.0.0.1" && c.control_bind != "::1" && c.control_bind != "localhost") {
    throw Error(ErrorCode::InvalidConfig, "control_bind must be a loopback address");
  }
  if (c.control_port < 0 || c.control_port > 65535) {
    throw Error(ErrorCode::InvalidConfig, "control_port must be in [0, 65535]");
  }
  if (c.runtime == RuntimeKind::OciRuntime) {
    throw Error(ErrorCode::RuntimeFailure, "this build ships only the Simulated runtime");
  }
}

bool interval_matches(Duration agent, Duration coordinator) {
  double a = static_cast<double>(agent.count());
  double c = static_cast<double>(coordinator.count());
  return std::abs(a - c) <= 0.1 * c;
}

AgentConfig agent_config_from_json(const Json& j) {
  AgentConfig c;
  try {
    if (j.contains("coordinator_url")) c.coordinator_url = j["coordinator_url"].get<std::string>();
    if (j.contains("state_dir")) c.state_dir = j["state_dir"].get<std::string>();
    if (j.contains("heartbeat_interval_s")) c.heartbeat_interval = decode_seconds(j["heartbeat_interval_s"]);
    if (j.contains("grace_s")) c.grace_default = decode_seconds(j["grace_s"]);
    if (j.contains("runtime")) {
      const Json& r = j["runtime"];
      std::string kind = r.is_object() ? r.at("kind").get<std::string>() : r.get<std::string>();
      if (kind == "Simulated") {
        c.runtime = RuntimeKind::Simulated;
      } else if (kind == "OciRuntime") {
        c.runtime = RuntimeKind::OciRuntime;
      } else {
        throw Error(ErrorCode::InvalidConfig, "unknown runtime '" + kind + "'");
      }
    }
    if (j.contains("gpus")) c.gpus = j["gpus"].get<std::vector<GpuDescriptor>>();
    if (j.contains("latency_ms")) c.latency_ms = j["latency_ms"].get<double>();
    if (j.contains("link_bandwidth_mbps")) c.link_bandwidth_mbps = j["link_bandwidth_mbps"].get<double>();
    if (j.contains("restore_overhead_s")) c.restore_overhead = decode_seconds(j["restore_overhead_s"]);
    if (j.contains("consolidate_on_departure")) {
      c.consolidate_on_departure = j["consolidate_on_departure"].get<bool>();
    }
    if (j.contains("control_bind")) c.control_bind = j["control_bind"].get<std::string>();
    if (j.contains("control_port")) c.control_port = j["control_port"].get<int>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  validate(c);
  return c;
}

AgentConfig load_agent_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path.string());
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::InvalidConfig, path.string() + " is not a JSON object");
  }
  return agent_config_from_json(j);
}

}  // namespace gpunion::agent
