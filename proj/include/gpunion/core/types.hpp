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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gpunion/core/ids.hpp"
#include "gpunion/core/time.hpp"

namespace gpunion {

// Ordered lexicographically: (a,b) >= (c,d) iff a > c or (a == c and b >= d).
struct ComputeCapability {
  int major = 1;
  int minor = 0;
  auto operator<=>(const ComputeCapability&) const = default;
};

struct GpuDescriptor {
  std::uint32_t index = 0;
  std::string model;
  std::int64_t memory_mib = 0;
  ComputeCapability compute_capability;
  bool operator==(const GpuDescriptor&) const = default;
};

enum class NodeState { Registering, Active, Paused, Draining, Unavailable, Departed };

struct NodeRecord {
  NodeId id;
  std::vector<GpuDescriptor> gpus;
  NodeState state = NodeState::Registering;
  double latency_ms = 0.0;
  double volatility_score = 1.0;  // expected interruptions per day
  std::uint64_t last_heartbeat_seq = 0;
  std::uint32_t missed_heartbeats = 0;
  std::string auth_token_hash;  // empty once the token is revoked
  bool operator==(const NodeRecord&) const = default;
};

struct GpuTelemetry {
  NodeId node;
  std::uint32_t gpu_index = 0;
  double util_pct = 0.0;
  std::int64_t mem_used_mib = 0;
  std::int64_t temp_c = 0;
  double power_w = 0.0;
  Timestamp sampled_at;
  bool operator==(const GpuTelemetry&) const = default;
};

enum class JobMode { Interactive, Batch };
enum class CheckpointMode { Full, Incremental };

struct SharedFsTarget {
  std::string path;
  bool operator==(const SharedFsTarget&) const = default;
};
struct NodeTarget {
  NodeId node;
  std::string path;
  bool operator==(const NodeTarget&) const = default;
};
struct LocalTarget {
  std::string path;
  bool operator==(const LocalTarget&) const = default;
};
using StorageTarget = std::variant<SharedFsTarget, NodeTarget, LocalTarget>;

const std::string& storage_path(const StorageTarget& target);

struct JobSpec {
  std::string image_ref;
  std::string image_digest;  // 64 lowercase hex chars (SHA-256)
  JobMode mode = JobMode::Batch;
  std::vector<std::string> entrypoint;  // Batch only
  std::int64_t gpu_memory_mib_required = 0;
  ComputeCapability min_compute_capability;
  std::int64_t priority = 0;  // larger = more urgent
  Duration checkpoint_interval{std::chrono::minutes(10)};
  CheckpointMode checkpoint_mode = CheckpointMode::Incremental;
  StorageTarget storage_target = SharedFsTarget{"/srv/gpunion/checkpoints"};
  Duration estimated_duration{std::chrono::hours(1)};
  std::optional<Duration> affinity_window;  // coordinator default when absent
  bool operator==(const JobSpec&) const = default;
};

enum class JobState { Pending, Scheduled, Running, Checkpointing, Migrating, Completed, Failed, Lost };

bool is_terminal(JobState state);

struct Allocation {
  JobId job_id;
  NodeId node_id;
  std::vector<std::uint32_t> gpu_indices;
  Timestamp granted_at;
  bool operator==(const Allocation&) const = default;
};

struct CheckpointManifest {
  JobId job_id;
  std::uint64_t seq = 0;
  std::optional<std::uint64_t> parent_seq;  // absent <=> Full
  Timestamp created_at;
  std::uint64_t payload_bytes = 0;
  std::string content_hash;
  StorageTarget target;

  bool is_full() const { return !parent_seq.has_value(); }
  bool operator==(const CheckpointManifest&) const = default;
};

enum class InterruptionKind { ScheduledDeparture, EmergencyDeparture, TemporaryUnavailability };

struct InterruptionEvent {
  InterruptionKind kind = InterruptionKind::ScheduledDeparture;
  Duration duration{0};  // TemporaryUnavailability only; > 0
  NodeId node;
  Timestamp at;
  bool operator==(const InterruptionEvent&) const = default;
};

// Return-migration preference attached to displaced jobs.
struct AffinityTag {
  NodeId node;
  Timestamp expires_at;
  bool operator==(const AffinityTag&) const = default;
};

struct JobRecord {
  JobId id;
  JobSpec spec;
  JobState state = JobState::Pending;
  std::uint64_t enqueue_seq = 0;
  Timestamp submitted_at;
  std::optional<Allocation> allocation;
  std::vector<Allocation> history;
  std::optional<AffinityTag> affinity;
  std::vector<CheckpointManifest> checkpoints;
  bool launch_delivered = false;
  bool migrating = false;  // relaunch pending after a displacement
  std::optional<NodeId> displaced_from;
  std::uint32_t interruptions = 0;
  std::uint32_t migrations = 0;
  std::string reason;
  bool operator==(const JobRecord&) const = default;
};

std::string_view to_string(NodeState s);
std::string_view to_string(JobState s);
std::string_view to_string(JobMode m);
std::string_view to_string(CheckpointMode m);
std::string_view to_string(InterruptionKind k);

}  // namespace gpunion
