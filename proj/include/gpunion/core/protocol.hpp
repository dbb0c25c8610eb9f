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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gpunion/core/types.hpp"

// Messages exchanged between provider agents and the coordinator. Agents
// always initiate; coordinator commands ride back on heartbeat acks.
namespace gpunion {

struct RegistrationRequest {
  std::vector<GpuDescriptor> gpus;
  double latency_ms = 0.0;
  std::optional<NodeId> prior_id;
};

struct RegistrationResponse {
  NodeId node_id;
  std::string token;
};

enum class WorkloadPhase { Starting, Running, Checkpointing, Terminating, Exited };

struct WorkloadReport {
  JobId job_id;
  WorkloadPhase phase = WorkloadPhase::Starting;
  int exit_code = 0;      // Exited only
  std::string error;      // error code name when a launch or run failed
  std::vector<CheckpointManifest> new_manifests;
  std::uint32_t attempt = 0;  // from the launch directive
  bool operator==(const WorkloadReport&) const = default;
};

struct HeartbeatRequest {
  NodeId node_id;
  std::uint64_t seq = 0;
  std::vector<GpuTelemetry> telemetry;
  std::vector<WorkloadReport> workloads;
  std::optional<bool> pause_request;  // provider-side pause/resume
  bool draining = false;              // provider started a graceful departure
  std::optional<double> latency_ms;
};

struct LaunchDirective {
  JobId job_id;
  JobSpec spec;
  std::vector<std::uint32_t> gpu_indices;
  bool restore = false;
  std::uint32_t attempt = 0;  // allocation count of the job; tags the workload's reports
  bool operator==(const LaunchDirective&) const = default;
};
struct CheckpointDirective {
  JobId job_id;
  bool operator==(const CheckpointDirective&) const = default;
};
struct TerminateDirective {
  JobId job_id;
  Duration grace{0};
  std::uint32_t attempt = 0;  // 0 matches any attempt
  bool operator==(const TerminateDirective&) const = default;
};
struct DrainDirective {
  Duration grace{0};
  bool operator==(const DrainDirective&) const = default;
};
struct KillDirective {
  Duration grace{0};
  bool operator==(const KillDirective&) const = default;
};

using Directive =
    std::variant<LaunchDirective, CheckpointDirective, TerminateDirective, DrainDirective, KillDirective>;

struct HeartbeatAck {
  bool ack = true;
  NodeState node_state = NodeState::Active;
  std::vector<Directive> directives;
};

enum class DepartureKind { Graceful, Emergency };

struct DepartureNotice {
  NodeId node_id;
  DepartureKind kind = DepartureKind::Graceful;
  std::vector<WorkloadReport> workloads;
};

std::string_view to_string(WorkloadPhase p);
std::string_view to_string(DepartureKind k);

}  // namespace gpunion
