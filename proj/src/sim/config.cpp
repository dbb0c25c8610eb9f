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

#include "gpunion/sim/config.hpp"

#include <cmath>
#include <fstream>

#include "gpunion/core/error.hpp"
#include "gpunion/core/validation.hpp"

namespace gpunion::sim {

namespace {

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

void read_seconds(const Json& j, const char* key, Duration& out) {
  if (auto it = j.find(key); it != j.end()) out = decode_seconds(*it);
}

void invalid(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

}  // namespace

NodeId sim_node_id(std::size_t index) { return NodeId{0x5eed, index + 1}; }

void validate(const SimConfig& c) {
  validate(c.scheduler);
  if (c.nodes.empty()) invalid("nodes: at least one node is required");
  if (c.interruption_rates.size() != c.nodes.size()) {
    invalid("interruption_rates: one rate per node is required");
  }
  for (const auto& n : c.nodes) {
    if (n.gpu_count == 0) invalid("nodes: gpu count must be >= 1");
    if (n.gpu_memory_mib <= 0) invalid("nodes: gpu memory must be > 0");
    if (!(n.latency_ms >= 0)) invalid("nodes: latency_ms must be >= 0");
  }
  for (double r : c.interruption_rates) {
    if (!(r >= 0) || !std::isfinite(r)) invalid("interruption_rates: rates must be finite and >= 0");
    if (r != 0 && !c.allow_unstudied_rates && (r < kMinStudiedRate || r > kMaxStudiedRate)) {
      invalid("interruption_rates: " + std::to_string(r) + " events/day is outside [0.5, 3.2]");
    }
  }
  const auto& m = c.kind_mix;
  for (double p : {m.scheduled, m.emergency, m.temporary}) {
    if (!(p >= 0 && p <= 1)) invalid("kind_mix: probabilities must lie in [0, 1]");
  }
  if (std::abs(m.scheduled + m.emergency + m.temporary - 1.0) > 1e-9) {
    invalid("kind_mix: probabilities must sum to 1");
  }
  if (c.temporary_duration_dist.distribution != "exponential") {
    invalid("temporary_duration_dist: only the exponential distribution is supported");
  }
  if (!(c.temporary_duration_dist.mean_s > 0)) invalid("temporary_duration_dist: mean_s must be > 0");
  if (!(c.link_bandwidth_mbps > 0)) invalid("link_bandwidth_mbps must be > 0");
  if (!(c.campus_bandwidth_mbps > 0)) invalid("campus_bandwidth_mbps must be > 0");
  if (c.sim_duration <= Duration{0}) invalid("sim_duration_s must be > 0");
  if (c.grace < Duration{0}) invalid("grace_s must be >= 0");
  if (c.rejoin_delay_mean <= Duration{0}) invalid("rejoin_delay_mean_s must be > 0");
  if (c.interruptions_from < Duration{0}) invalid("interruptions_from_s must be >= 0");
  DigestAllowList trusted;
  for (const auto& w : c.workloads) trusted.insert(w.spec.image_digest);
  for (const auto& w : c.workloads) {
    if (w.count == 0) invalid("workloads: count must be >= 1");
    if (w.owner >= c.nodes.size()) invalid("workloads: owner must index a node");
    if (w.submit_at < Duration{0}) invalid("workloads: submit_at_s must be >= 0");
    if (auto rejection = validate_job_spec(w.spec, trusted)) {
      invalid("workloads: " + w.name + ": " + rejection->detail);
    }
    resilience::validate(w.state);
  }
}

SimConfig sim_config_from_json(const Json& j) {
  SimConfig c;
  try {
    read(j, "name", c.name);
    read(j, "seed", c.seed);
    for (const auto& n : j.at("nodes")) {
      SimNode node;
      read(n, "name", node.name);
      read(n, "gpu_count", node.gpu_count);
      read(n, "gpu_memory_mib", node.gpu_memory_mib);
      if (n.contains("capability")) node.capability = n["capability"].get<ComputeCapability>();
      read(n, "latency_ms", node.latency_ms);
      read(n, "gpu_model", node.gpu_model);
      if (node.name.empty()) node.name = "node-" + std::to_string(c.nodes.size());
      c.nodes.push_back(node);
    }
    read(j, "interruption_rates", c.interruption_rates);
    if (j.contains("kind_mix")) {
      const auto& m = j["kind_mix"];
      c.kind_mix = KindMix{0, 0, 0};
      read(m, "ScheduledDeparture", c.kind_mix.scheduled);
      read(m, "EmergencyDeparture", c.kind_mix.emergency);
      read(m, "TemporaryUnavailability", c.kind_mix.temporary);
    }
    if (j.contains("temporary_duration_dist")) {
      read(j["temporary_duration_dist"], "mean_s", c.temporary_duration_dist.mean_s);
      read(j["temporary_duration_dist"], "distribution", c.temporary_duration_dist.distribution);
    }
    for (const auto& w : j.at("workloads")) {
      SimWorkload wl;
      read(w, "name", wl.name);
      wl.spec = w.at("spec").get<JobSpec>();
      const auto& s = w.at("state");
      wl.state.total_state_bytes = s.at("total_state_bytes").get<std::uint64_t>();
      read(s, "dirty_fraction", wl.state.dirty_fraction);
      wl.state.duration = wl.spec.estimated_duration;
      read_seconds(s, "duration_s", wl.state.duration);
      read_seconds(w, "submit_at_s", wl.submit_at);
      read(w, "owner", wl.owner);
      read(w, "count", wl.count);
      if (wl.name.empty()) wl.name = "workload-" + std::to_string(c.workloads.size());
      c.workloads.push_back(std::move(wl));
    }
    read(j, "link_bandwidth_mbps", c.link_bandwidth_mbps);
    read(j, "campus_bandwidth_mbps", c.campus_bandwidth_mbps);
    read_seconds(j, "sim_duration_s", c.sim_duration);
    if (j.contains("scheduler")) c.scheduler = coord::scheduler_config_from_json(j["scheduler"]);
    read_seconds(j, "grace_s", c.grace);
    read_seconds(j, "rejoin_delay_mean_s", c.rejoin_delay_mean);
    read(j, "consolidate_on_departure", c.consolidate_on_departure);
    read(j, "allow_unstudied_rates", c.allow_unstudied_rates);
    read_seconds(j, "interruptions_from_s", c.interruptions_from);
    if (auto it = j.find("interruptions_until_s"); it != j.end() && !it->is_null()) {
      c.interruptions_until = decode_seconds(*it);
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  // The coordinator's downtime estimates use the same link model.
  c.scheduler.link_bandwidth_mbps = c.link_bandwidth_mbps;
  validate(c);
  return c;
}

Json to_json(const SimConfig& c) {
  Json nodes = Json::array();
  for (const auto& n : c.nodes) {
    nodes.push_back({{"name", n.name},
                     {"gpu_count", n.gpu_count},
                     {"gpu_memory_mib", n.gpu_memory_mib},
                     {"capability", n.capability},
                     {"latency_ms", n.latency_ms},
                     {"gpu_model", n.gpu_model}});
  }
  Json workloads = Json::array();
  for (const auto& w : c.workloads) {
    workloads.push_back({{"name", w.name},
                         {"spec", w.spec},
                         {"state",
                          {{"total_state_bytes", w.state.total_state_bytes},
                           {"dirty_fraction", w.state.dirty_fraction},
                           {"duration_s", encode_seconds(w.state.duration)}}},
                         {"submit_at_s", encode_seconds(w.submit_at)},
                         {"owner", w.owner},
                         {"count", w.count}});
  }
  return Json{{"name", c.name},
              {"seed", c.seed},
              {"nodes", nodes},
              {"interruption_rates", c.interruption_rates},
              {"kind_mix",
               {{"ScheduledDeparture", c.kind_mix.scheduled},
                {"EmergencyDeparture", c.kind_mix.emergency},
                {"TemporaryUnavailability", c.kind_mix.temporary}}},
              {"temporary_duration_dist",
               {{"mean_s", c.temporary_duration_dist.mean_s},
                {"distribution", c.temporary_duration_dist.distribution}}},
              {"workloads", workloads},
              {"link_bandwidth_mbps", c.link_bandwidth_mbps},
              {"campus_bandwidth_mbps", c.campus_bandwidth_mbps},
              {"sim_duration_s", encode_seconds(c.sim_duration)},
              {"scheduler", coord::to_json(c.scheduler)},
              {"grace_s", encode_seconds(c.grace)},
              {"rejoin_delay_mean_s", encode_seconds(c.rejoin_delay_mean)},
              {"consolidate_on_departure", c.consolidate_on_departure},
              {"allow_unstudied_rates", c.allow_unstudied_rates},
              {"interruptions_from_s", encode_seconds(c.interruptions_from)},
              {"interruptions_until_s",
               c.interruptions_until ? Json(encode_seconds(*c.interruptions_until)) : Json(nullptr)}};
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path.string());
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::InvalidConfig, path.string() + " is not valid JSON");
  return sim_config_from_json(j);
}

}  // namespace gpunion::sim
