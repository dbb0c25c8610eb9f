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

#include "gpunion/resilience/migration.hpp"

#include "gpunion/core/error.hpp"
#include "gpunion/resilience/checkpoint.hpp"
#include "gpunion/resilience/restore.hpp"

namespace gpunion::resilience {

std::string_view to_string(MigrationOutcome outcome) {
  switch (outcome) {
    case MigrationOutcome::Migrate: return "Migrate";
    case MigrationOutcome::Requeue: return "Requeue";
    case MigrationOutcome::Lost: return "Lost";
  }
  return "?";
}

bool requeueable(const JobRecord& job) {
  return job.spec.mode == JobMode::Batch || !job.checkpoints.empty();
}

MigrationPlan plan_migration(const JobRecord& job, const coord::ClusterState& snapshot,
                             const coord::SchedulePolicy& policy,
                             const coord::SchedulerConfig& config, Timestamp now) {
  MigrationPlan plan;
  plan.job = job.id;
  if (!requeueable(job)) {
    plan.outcome = MigrationOutcome::Lost;
    return plan;
  }
  if (!job.checkpoints.empty()) {
    try {
      plan.transfer = restore_chain(job.checkpoints, job.checkpoints.back().seq);
    } catch (const Error&) {
      plan.transfer.clear();  // the agent falls back to what storage can verify
    }
  }
  std::uint64_t bytes = 0;
  for (const auto& m : plan.transfer) bytes += m.payload_bytes;
  plan.estimated_downtime = restore_cost(bytes, config.link_bandwidth_mbps, config.restore_overhead) +
                            config.heartbeat_interval;
  plan.target = policy.place(job, snapshot, config, now);
  plan.outcome = plan.target ? MigrationOutcome::Migrate : MigrationOutcome::Requeue;
  return plan;
}

}  // namespace gpunion::resilience
