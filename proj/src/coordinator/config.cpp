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

#include "gpunion/coordinator/config.hpp"

#include <cmath>
#include <fstream>

#include "gpunion/core/error.hpp"

namespace gpunion::coord {

void validate(const SchedulerConfig& c) {
  if (c.heartbeat_interval.count() <= 0) {
    throw Error(ErrorCode::InvalidConfig, "heartbeat_interval_s must be positive");
  }
  if (c.miss_threshold != kMissThreshold) {
    throw Error(ErrorCode::InvalidConfig, "miss_threshold is fixed at 3");
  }
  if (c.weight_volatility < 0.0 || c.weight_volatility > 1.0 || c.weight_latency < 0.0 ||
      c.weight_latency > 1.0 || std::abs(c.weight_volatility + c.weight_latency - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidConfig, "weight_volatility + weight_latency must equal 1");
  }
  if (!(c.volatility_alpha > 0.0 && c.volatility_alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "volatility_alpha must be in (0, 1]");
  }
  if (c.volatility_prior < 0.0) {
    throw Error(ErrorCode::InvalidConfig, "volatility_prior must be nonnegative");
  }
  if (c.grace_default.count() < 0 || c.affinity_window_default.count() < 0 ||
      c.restore_overhead.count() < 0) {
    throw Error(ErrorCode::InvalidConfig, "durations must be nonnegative");
  }
  if (c.link_bandwidth_mbps <= 0.0) {
    throw Error(ErrorCode::InvalidConfig, "link_bandwidth_mbps must be positive");
  }
}

SchedulerConfig scheduler_config_from_json(const Json& j) {
  SchedulerConfig c;
  try {
    if (j.contains("heartbeat_interval_s")) c.heartbeat_interval = decode_seconds(j["heartbeat_interval_s"]);
    if (j.contains("miss_threshold")) c.miss_threshold = j["miss_threshold"].get<std::uint32_t>();
    if (j.contains("weight_volatility")) {
      c.weight_volatility = j["weight_volatility"].get<double>();
      c.weight_latency = 1.0 - c.weight_volatility;
    }
    if (j.contains("weight_latency")) c.weight_latency = j["weight_latency"].get<double>();
    if (j.contains("grace_default_s")) c.grace_default = decode_seconds(j["grace_default_s"]);
    if (j.contains("affinity_window_default_s")) {
      c.affinity_window_default = decode_seconds(j["affinity_window_default_s"]);
    }
    if (j.contains("volatility_alpha")) c.volatility_alpha = j["volatility_alpha"].get<double>();
    if (j.contains("volatility_prior")) c.volatility_prior = j["volatility_prior"].get<double>();
    if (j.contains("link_bandwidth_mbps")) c.link_bandwidth_mbps = j["link_bandwidth_mbps"].get<double>();
    if (j.contains("restore_overhead_s")) c.restore_overhead = decode_seconds(j["restore_overhead_s"]);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  validate(c);
  return c;
}

Json to_json(const SchedulerConfig& c) {
  return Json{{"heartbeat_interval_s", encode_seconds(c.heartbeat_interval)},
              {"miss_threshold", c.miss_threshold},
              {"weight_volatility", c.weight_volatility},
              {"weight_latency", c.weight_latency},
              {"grace_default_s", encode_seconds(c.grace_default)},
              {"affinity_window_default_s", encode_seconds(c.affinity_window_default)},
              {"volatility_alpha", c.volatility_alpha},
              {"volatility_prior", c.volatility_prior},
              {"link_bandwidth_mbps", c.link_bandwidth_mbps},
              {"restore_overhead_s", encode_seconds(c.restore_overhead)}};
}

CoordinatorConfig coordinator_config_from_json(const Json& j) {
  CoordinatorConfig c;
  c.scheduler = scheduler_config_from_json(j);
  try {
    if (j.contains("allow_list")) {
      for (const auto& d : j["allow_list"]) {
        auto digest = d.get<std::string>();
        if (!is_sha256_hex(digest)) {
          throw Error(ErrorCode::InvalidConfig, "allow_list entry is not a SHA-256 digest: " + digest);
        }
        c.allow_list.insert(digest);
      }
    }
    if (j.contains("bind_address")) c.bind_address = j["bind_address"].get<std::string>();
    if (j.contains("port")) c.port = j["port"].get<int>();
    if (j.contains("api_token")) c.api_token = j["api_token"].get<std::string>();
    if (j.contains("event_log_path")) c.event_log_path = j["event_log_path"].get<std::string>();
    if (j.contains("ui_dir")) c.ui_dir = j["ui_dir"].get<std::string>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  return c;
}

CoordinatorConfig load_coordinator_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path.string());
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::InvalidConfig, path.string() + " is not a JSON object");
  }
  return coordinator_config_from_json(j);
}

}  // namespace gpunion::coord
