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

#include "gpunion/core/state_machine.hpp"

#include <string>

#include "gpunion/core/error.hpp"

namespace gpunion {

std::optional<NodeState> next_state(NodeState from, NodeEvent event) noexcept {
  using S = NodeState;
  using E = NodeEvent;
  switch (from) {
    case S::Registering:
      if (event == E::Activate) return S::Active;
      break;
    case S::Active:
      if (event == E::Pause) return S::Paused;
      if (event == E::Drain) return S::Draining;
      if (event == E::HeartbeatLost) return S::Unavailable;
      break;
    case S::Paused:
      if (event == E::Resume) return S::Active;
      if (event == E::Drain) return S::Draining;
      if (event == E::HeartbeatLost) return S::Unavailable;
      break;
    case S::Draining:
      if (event == E::Depart) return S::Departed;
      break;
    case S::Unavailable:
      if (event == E::Reconnect) return S::Active;
      break;
    case S::Departed:
      if (event == E::Rejoin) return S::Registering;
      break;
  }
  return std::nullopt;
}

std::optional<JobState> next_state(JobState from, JobEvent event) noexcept {
  using S = JobState;
  using E = JobEvent;
  switch (from) {
    case S::Pending:
      if (event == E::Schedule) return S::Scheduled;
      if (event == E::Cancel) return S::Failed;
      break;
    case S::Scheduled:
      if (event == E::Start) return S::Running;
      if (event == E::Migrate) return S::Migrating;
      if (event == E::Fail || event == E::Cancel) return S::Failed;
      break;
    case S::Running:
      if (event == E::BeginCheckpoint) return S::Checkpointing;
      if (event == E::Migrate) return S::Migrating;
      if (event == E::Complete) return S::Completed;
      if (event == E::Fail || event == E::Cancel) return S::Failed;
      break;
    case S::Checkpointing:
      if (event == E::EndCheckpoint) return S::Running;
      if (event == E::Migrate) return S::Migrating;
      if (event == E::Cancel) return S::Failed;
      break;
    case S::Migrating:
      if (event == E::Schedule) return S::Scheduled;
      if (event == E::Requeue) return S::Pending;
      if (event == E::Lose) return S::Lost;
      if (event == E::Cancel) return S::Failed;
      break;
    case S::Completed:
    case S::Failed:
    case S::Lost:
      break;
  }
  return std::nullopt;
}

NodeState transition(NodeState from, NodeEvent event) {
  if (auto to = next_state(from, event)) return *to;
  throw Error(ErrorCode::IllegalTransition, "IllegalTransition(" + std::string(to_string(from)) +
                                                ", " + std::string(to_string(event)) + ")");
}

JobState transition(JobState from, JobEvent event) {
  if (auto to = next_state(from, event)) return *to;
  throw Error(ErrorCode::IllegalTransition, "IllegalTransition(" + std::string(to_string(from)) +
                                                ", " + std::string(to_string(event)) + ")");
}

std::string_view to_string(NodeEvent e) {
  switch (e) {
    case NodeEvent::Activate: return "activate";
    case NodeEvent::Pause: return "pause";
    case NodeEvent::Resume: return "resume";
    case NodeEvent::Drain: return "drain";
    case NodeEvent::Depart: return "depart";
    case NodeEvent::HeartbeatLost: return "heartbeat-loss";
    case NodeEvent::Reconnect: return "reconnect";
    case NodeEvent::Rejoin: return "rejoin";
  }
  return "?";
}

std::string_view to_string(JobEvent e) {
  switch (e) {
    case JobEvent::Schedule: return "schedule";
    case JobEvent::Start: return "start";
    case JobEvent::BeginCheckpoint: return "begin-checkpoint";
    case JobEvent::EndCheckpoint: return "end-checkpoint";
    case JobEvent::Migrate: return "migrate";
    case JobEvent::Requeue: return "requeue";
    case JobEvent::Complete: return "complete";
    case JobEvent::Fail: return "fail";
    case JobEvent::Lose: return "lose";
    case JobEvent::Cancel: return "cancel";
  }
  return "?";
}

}  // namespace gpunion
