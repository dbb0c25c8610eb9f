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
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "gpunion/core/protocol.hpp"
#include "gpunion/core/types.hpp"

namespace gpunion::coord {

struct NodeEntry {
  NodeRecord record;
  Timestamp registered_at;
  Timestamp last_heartbeat_at;
  std::uint32_t interruptions_today = 0;
  std::vector<GpuTelemetry> telemetry;  // latest sample per GPU
  std::vector<Directive> outbox;
  bool operator==(const NodeEntry&) const = default;
};

// Pending jobs ordered by (-priority, enqueue_seq).
class PendingQueue {
 public:
  struct Key {
    std::int64_t neg_priority;
    std::uint64_t enqueue_seq;
    JobId job;
    auto operator<=>(const Key&) const = default;
  };

  void push(JobId job, std::int64_t priority, std::uint64_t enqueue_seq);
  bool erase(JobId job, std::int64_t priority, std::uint64_t enqueue_seq);
  std::optional<JobId> pop();
  std::vector<JobId> ordered() const;
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  bool operator==(const PendingQueue&) const = default;

 private:
  std::set<Key> keys_;
};

struct Counters {
  std::uint64_t migrations_total = 0;
  std::uint64_t heartbeat_misses_total = 0;
  std::uint64_t checkpoint_bytes_total = 0;
  bool operator==(const Counters&) const = default;
};

struct ClusterState {
  std::map<NodeId, NodeEntry> nodes;
  std::map<JobId, JobRecord> jobs;
  PendingQueue pending;
  std::uint64_t next_job_id = 1;
  std::uint64_t next_enqueue_seq = 0;
  std::optional<NodeId> rr_cursor;  // last node that received an allocation
  std::int64_t current_day = 0;
  std::uint64_t last_event_seq = 0;  // 0: no events applied
  Counters counters;

  // GPU indices on `node` currently backing an allocation.
  std::set<std::uint32_t> busy_gpus(const NodeId& node) const;
  bool operator==(const ClusterState&) const = default;
};

}  // namespace gpunion::coord
