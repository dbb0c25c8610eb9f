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

#include <string>
#include <vector>

#include "gpunion/coordinator/coordinator.hpp"
#include "gpunion/core/protocol.hpp"

namespace gpunion::test {

using namespace std::chrono_literals;

inline const std::string kDigest(64, 'a');
inline const std::string kOtherDigest(64, 'b');

inline GpuDescriptor gpu(std::uint32_t index, std::int64_t memory_mib = 24576, ComputeCapability cc = {8, 6}) {
  return GpuDescriptor{index, "sim-gpu", memory_mib, cc};
}

inline JobSpec batch_spec(Duration duration = std::chrono::hours(1), Duration interval = std::chrono::minutes(10)) {
  JobSpec s;
  s.image_ref = "registry.local/train:1";
  s.image_digest = kDigest;
  s.entrypoint = {"python", "train.py"};
  s.gpu_memory_mib_required = 8192;
  s.checkpoint_interval = interval;
  s.estimated_duration = duration;
  return s;
}

inline coord::CoordinatorConfig coordinator_config() {
  coord::CoordinatorConfig c;
  c.allow_list = {kDigest};
  return c;
}

inline coord::Coordinator::Options seeded(std::uint64_t seed = 1) {
  coord::Coordinator::Options o;
  o.token_seed = seed;
  return o;
}

inline RegistrationRequest registration(std::uint32_t gpus = 1, double latency_ms = 1.0,
                                        std::optional<NodeId> prior = std::nullopt) {
  RegistrationRequest r;
  for (std::uint32_t g = 0; g < gpus; ++g) r.gpus.push_back(gpu(g));
  r.latency_ms = latency_ms;
  r.prior_id = prior;
  return r;
}

inline HeartbeatRequest heartbeat(const NodeId& node, std::uint64_t seq,
                                  std::vector<WorkloadReport> workloads = {}) {
  HeartbeatRequest h;
  h.node_id = node;
  h.seq = seq;
  h.workloads = std::move(workloads);
  return h;
}

template <typename T>
std::vector<T> directives_of(const HeartbeatAck& ack) {
  std::vector<T> out;
  for (const auto& d : ack.directives) {
    if (const auto* v = std::get_if<T>(&d)) out.push_back(*v);
  }
  return out;
}

}  // namespace gpunion::test
