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

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpunion/core/wire.hpp"
#include "gpunion/resilience/transfer.hpp"
#include "gpunion/sim/config.hpp"

namespace gpunion::sim {

// One job leaving a node, and what became of it.
struct Displacement {
  JobId job;
  NodeId from;
  Timestamp at;
  std::optional<InterruptionKind> cause;  // interruption in effect on `from`
  std::string reason;                     // coordinator's migration reason
  bool interrupted = true;                // false: the job was still restoring on `from`
  // Scheduled departures: whether a final checkpoint was attempted and made
  // durable within grace.
  bool final_attempted = false;
  bool final_durable = false;
  bool returned = false;  // relaunched on `from` through its affinity tag
  std::optional<Timestamp> relaunched_at;
  std::optional<NodeId> relaunched_on;
  std::optional<Duration> lost_work;  // known once relaunched
};

struct JobReport {
  JobId job;
  std::string workload;
  std::string final_state;
  std::uint32_t interruptions = 0;
  std::uint32_t migrations = 0;
  std::uint32_t returns = 0;
  Duration lost_work{0};
  Duration base_time{0};
  std::optional<Duration> total_time;  // first start to completion
  std::optional<Duration> down_time;   // not running between first start and completion
  std::optional<double> overhead_pct;
  Duration run_time{0};
  // total = base + lost + down, with down measured from run segments.
  bool ledger_identity_ok = true;
  std::uint64_t backup_bytes = 0;   // durable checkpoint payloads
  std::uint64_t restore_bytes = 0;  // restore transfers
  // backup + restore bytes equal the link ledger's completed transfers.
  bool bandwidth_ok = true;
};

struct KindStats {
  std::uint64_t events = 0;   // interruptions applied
  std::uint64_t skipped = 0;  // arrived while the node was already away
  std::uint64_t displaced = 0;
  std::uint64_t returned = 0;
  std::uint64_t relaunched = 0;
  Duration lost_total{0};
  Duration lost_max{0};
};

struct ClusterReport {
  std::optional<double> graceful_migration_success_pct;
  std::uint64_t graceful_attempts = 0;
  std::uint64_t graceful_successes = 0;
  std::uint64_t graceful_unresolved = 0;  // not relaunched before the run ended
  Duration graceful_success_lost_max{0};
  std::optional<double> return_migration_pct;
  std::optional<double> mean_lost_work_s;
  double backup_bandwidth_share_pct = 0.0;
  double utilization_pct = 0.0;
  std::optional<double> baseline_utilization_pct;
  std::uint64_t jobs_completed = 0;
  std::uint64_t jobs_lost = 0;
  std::uint64_t jobs_total = 0;
  std::uint64_t backup_bytes = 0;
  std::uint64_t restore_bytes = 0;
  std::map<InterruptionKind, KindStats> by_kind;
};

struct TraceRow {
  Timestamp at;
  std::string event;
  std::string node;
  std::string job;
  std::string detail;
};

struct SimReport {
  std::string scenario;
  std::uint64_t seed = 0;
  Duration sim_duration{0};
  std::vector<JobReport> jobs;
  std::vector<Displacement> displacements;
  ClusterReport cluster;
  std::vector<TraceRow> trace;
  std::vector<resilience::Transfer> transfers;
  std::string trace_digest;  // SHA-256 of the CSV trace
};

// Drives the production coordinator, agents and resilience code against the
// generated interruption trace under a simulated clock.
SimReport run(const SimConfig& config);
// Same workloads and trace; jobs may run only on their owner's node.
double run_baseline(const SimConfig& config);
// run() plus the baseline utilization.
SimReport simulate(const SimConfig& config);

// Peak 60 s backup traffic as a percentage of campus bandwidth.
double bandwidth_share(const SimReport& report, double campus_bandwidth_mbps);

std::string trace_csv(const std::vector<TraceRow>& rows);
Json to_json(const SimReport& report);

}  // namespace gpunion::sim
