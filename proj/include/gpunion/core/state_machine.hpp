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
#include <optional>
#include <string_view>

#include "gpunion/core/types.hpp"

namespace gpunion {

enum class NodeEvent {
  Activate,       // registration accepted
  Pause,
  Resume,
  Drain,
  Depart,         // drain finished
  HeartbeatLost,  // third consecutive missed heartbeat
  Reconnect,
  Rejoin,
};

enum class JobEvent {
  Schedule,
  Start,
  BeginCheckpoint,
  EndCheckpoint,
  Migrate,
  Requeue,
  Complete,
  Fail,
  Lose,
  Cancel,
};

inline constexpr std::array kAllNodeStates{NodeState::Registering, NodeState::Active,
                                           NodeState::Paused,      NodeState::Draining,
                                           NodeState::Unavailable, NodeState::Departed};
inline constexpr std::array kAllNodeEvents{NodeEvent::Activate,  NodeEvent::Pause,
                                           NodeEvent::Resume,    NodeEvent::Drain,
                                           NodeEvent::Depart,    NodeEvent::HeartbeatLost,
                                           NodeEvent::Reconnect, NodeEvent::Rejoin};
inline constexpr std::array kAllJobStates{JobState::Pending,       JobState::Scheduled,
                                          JobState::Running,       JobState::Checkpointing,
                                          JobState::Migrating,     JobState::Completed,
                                          JobState::Failed,        JobState::Lost};
inline constexpr std::array kAllJobEvents{JobEvent::Schedule,        JobEvent::Start,
                                          JobEvent::BeginCheckpoint, JobEvent::EndCheckpoint,
                                          JobEvent::Migrate,         JobEvent::Requeue,
                                          JobEvent::Complete,        JobEvent::Fail,
                                          JobEvent::Lose,            JobEvent::Cancel};

// Table lookups; nullopt means the pair is not in the table.
std::optional<NodeState> next_state(NodeState from, NodeEvent event) noexcept;
std::optional<JobState> next_state(JobState from, JobEvent event) noexcept;

// Throwing forms: Error(IllegalTransition) when the pair is not in the table.
NodeState transition(NodeState from, NodeEvent event);
JobState transition(JobState from, JobEvent event);

std::string_view to_string(NodeEvent e);
std::string_view to_string(JobEvent e);

}  // namespace gpunion
