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
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gpunion/coordinator/state.hpp"
#include "gpunion/core/wire.hpp"

// Coordinator state is a left fold of these events; apply() is the only code
// that mutates ClusterState.
namespace gpunion::coord {

struct NodeRegistered {
  NodeRecord record;
  bool rejoin = false;
  bool operator==(const NodeRegistered&) const = default;
};
struct HeartbeatReceived {
  NodeId node;
  std::uint64_t seq = 0;
  std::vector<GpuTelemetry> telemetry;
  std::optional<double> latency_ms;
  bool operator==(const HeartbeatReceived&) const = default;
};
struct HeartbeatMissed {
  NodeId node;
  std::uint32_t missed = 0;
  bool operator==(const HeartbeatMissed&) const = default;
};
struct NodeStateChanged {
  NodeId node;
  NodeState from = NodeState::Registering;
  NodeState to = NodeState::Registering;
  std::string reason;
  bool operator==(const NodeStateChanged&) const = default;
};
struct JobEnqueued {
  JobId job;
  JobSpec spec;
  std::uint64_t enqueue_seq = 0;
  bool operator==(const JobEnqueued&) const = default;
};
struct JobRequeued {
  JobId job;
  bool operator==(const JobRequeued&) const = default;
};
struct AllocationGranted {
  Allocation allocation;
  bool via_affinity = false;
  bool operator==(const AllocationGranted&) const = default;
};
struct AllocationReleased {
  JobId job;
  bool operator==(const AllocationReleased&) const = default;
};
struct CheckpointRecorded {
  CheckpointManifest manifest;
  bool operator==(const CheckpointRecorded&) const = default;
};
struct MigrationStarted {
  JobId job;
  NodeId from;
  std::string reason;
  std::optional<AffinityTag> affinity;
  // False when the job was still launching or restoring on `from`; only
  // displaced executions count as interruptions of the job.
  bool interrupted = true;
  bool operator==(const MigrationStarted&) const = default;
};
struct MigrationCompleted {
  JobId job;
  NodeId to;
  bool returned_to_origin = false;
  bool operator==(const MigrationCompleted&) const = default;
};
struct JobStateChanged {
  JobId job;
  JobState from = JobState::Pending;
  JobState to = JobState::Pending;
  std::string reason;
  bool operator==(const JobStateChanged&) const = default;
};
struct VolatilityUpdated {
  NodeId node;
  double score = 0.0;
  std::uint32_t interruptions_today = 0;
  bool operator==(const VolatilityUpdated&) const = default;
};
struct DayRolled {
  std::int64_t day = 0;
  bool operator==(const DayRolled&) const = default;
};
struct DirectiveQueued {
  NodeId node;
  Directive directive;
  bool operator==(const DirectiveQueued&) const = default;
};
struct DirectivesDelivered {
  NodeId node;
  std::vector<JobId> launched;
  bool operator==(const DirectivesDelivered&) const = default;
};

using EventPayload =
    std::variant<NodeRegistered, HeartbeatReceived, HeartbeatMissed, NodeStateChanged, JobEnqueued,
                 JobRequeued, AllocationGranted, AllocationReleased, CheckpointRecorded,
                 MigrationStarted, MigrationCompleted, JobStateChanged, VolatilityUpdated, DayRolled,
                 DirectiveQueued, DirectivesDelivered>;

struct EventLogEntry {
  std::uint64_t seq = 0;
  Timestamp at;
  EventPayload payload;
  bool operator==(const EventLogEntry&) const = default;
};

std::string_view event_name(const EventPayload& payload);

// Applies one entry. Throws Error(GapInLog) unless entry.seq follows
// state.last_event_seq, Error(CorruptEntry) when the entry references
// entities that do not exist.
void apply(ClusterState& state, const EventLogEntry& entry);

ClusterState replay_log(std::span<const EventLogEntry> entries);

Json to_json(const EventLogEntry& entry);
EventLogEntry event_from_json(const Json& j);  // throws Error(CorruptEntry)

}  // namespace gpunion::coord
