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

#include "gpunion/core/types.hpp"

#include "gpunion/core/protocol.hpp"

namespace gpunion {

const std::string& storage_path(const StorageTarget& target) {
  return std::visit([](const auto& t) -> const std::string& { return t.path; }, target);
}

bool is_terminal(JobState state) {
  return state == JobState::Completed || state == JobState::Failed || state == JobState::Lost;
}

std::string_view to_string(NodeState s) {
  switch (s) {
    case NodeState::Registering: return "Registering";
    case NodeState::Active: return "Active";
    case NodeState::Paused: return "Paused";
    case NodeState::Draining: return "Draining";
    case NodeState::Unavailable: return "Unavailable";
    case NodeState::Departed: return "Departed";
  }
  return "?";
}

std::string_view to_string(JobState s) {
  switch (s) {
    case JobState::Pending: return "Pending";
    case JobState::Scheduled: return "Scheduled";
    case JobState::Running: return "Running";
    case JobState::Checkpointing: return "Checkpointing";
    case JobState::Migrating: return "Migrating";
    case JobState::Completed: return "Completed";
    case JobState::Failed: return "Failed";
    case JobState::Lost: return "Lost";
  }
  return "?";
}

std::string_view to_string(JobMode m) { return m == JobMode::Batch ? "Batch" : "Interactive"; }

std::string_view to_string(CheckpointMode m) {
  return m == CheckpointMode::Full ? "Full" : "Incremental";
}

std::string_view to_string(InterruptionKind k) {
  switch (k) {
    case InterruptionKind::ScheduledDeparture: return "ScheduledDeparture";
    case InterruptionKind::EmergencyDeparture: return "EmergencyDeparture";
    case InterruptionKind::TemporaryUnavailability: return "TemporaryUnavailability";
  }
  return "?";
}

std::string_view to_string(WorkloadPhase p) {
  switch (p) {
    case WorkloadPhase::Starting: return "Starting";
    case WorkloadPhase::Running: return "Running";
    case WorkloadPhase::Checkpointing: return "Checkpointing";
    case WorkloadPhase::Terminating: return "Terminating";
    case WorkloadPhase::Exited: return "Exited";
  }
  return "?";
}

std::string_view to_string(DepartureKind k) {
  return k == DepartureKind::Graceful ? "Graceful" : "Emergency";
}

}  // namespace gpunion
