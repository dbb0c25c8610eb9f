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

#include <optional>
#include <string>
#include <vector>

#include "gpunion/coordinator/policy.hpp"

namespace gpunion::resilience {

enum class MigrationOutcome { Migrate, Requeue, Lost };

struct MigrationPlan {
  JobId job;
  MigrationOutcome outcome = MigrationOutcome::Requeue;
  std::optional<coord::Placement> target;
  std::vector<CheckpointManifest> transfer;  // chain the target must fetch
  Duration estimated_downtime{0};
};

std::string_view to_string(MigrationOutcome outcome);

// A job without any checkpoint can be restarted from scratch only in Batch
// mode; an Interactive session without state is lost.
bool requeueable(const JobRecord& job);

// Plans the relaunch of a Migrating job over `snapshot`. Downtime estimate =
// chain transfer at the link rate + restore overhead + one heartbeat for the
// launch directive to reach the target.
MigrationPlan plan_migration(const JobRecord& job, const coord::ClusterState& snapshot,
                             const coord::SchedulePolicy& policy,
                             const coord::SchedulerConfig& config, Timestamp now);

}  // namespace gpunion::resilience
