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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gpunion/agent/client.hpp"
#include "gpunion/agent/config.hpp"
#include "gpunion/agent/identity.hpp"
#include "gpunion/agent/runtime.hpp"
#include "gpunion/agent/telemetry.hpp"
#include "gpunion/core/error.hpp"
#include "gpunion/resilience/checkpoint.hpp"
#include "gpunion/resilience/store.hpp"
#include "gpunion/resilience/transfer.hpp"

namespace gpunion::agent {

// Notebook preset applied to Interactive launches.
inline constexpr int kNotebookPort = 8888;
LaunchRequest build_launch_request(JobId job, const JobSpec& spec,
                                   const std::vector<std::uint32_t>& gpu_indices);

enum class AgentEventKind {
  Registered,
  RegistrationFailed,
  HeartbeatFailed,
  Launched,
  LaunchFailed,
  Started,
  CheckpointDurable,
  CheckpointSkipped,
  FinalCheckpointDurable,
  FinalCheckpointMissed,
  Terminated,
  Completed,
  Suspended,
  Woke,
  Departed,
};

std::string_view to_string(AgentEventKind kind);

// Observable agent activity, for logs and the simulator's accounting.
struct AgentEvent {
  Timestamp at{};
  AgentEventKind kind = AgentEventKind::Registered;
  JobId job{};
  std::string container{};
  std::uint64_t seq = 0;
  std::uint64_t bytes = 0;
  Duration progress{0};  // Terminated: progress at stop; Launched: restored progress
  bool full = false;
  std::optional<ErrorCode> error{};
};

struct AgentDeps {
  CoordinatorClient& client;
  RuntimeAdapter& runtime;
  TelemetryProbe& probe;
  resilience::CheckpointStore& store;
  IdentityStore& identity;
  // Shared link ledger; the agent keeps a private one when null.
  resilience::TransferLedger* ledger = nullptr;
};

// Node-side daemon logic as a deadline-driven state machine: callers invoke
// advance_to(now) whenever now reaches next_deadline(), and provider
// controls at any time. Not thread-safe.
class Agent {
 public:
  Agent(AgentConfig config, AgentDeps deps, std::function<void(const AgentEvent&)> trace = {});

  // Starts a session: loads or creates the NodeId and contacts the
  // coordinator, retrying with exponential backoff (1 s doubling to 60 s).
  void join(Timestamp now);
  void advance_to(Timestamp now);
  std::optional<Timestamp> next_deadline() const;

  // Returns false (and changes nothing) when already in the requested state.
  // Throws Error(IllegalTransition).
  bool pause(Timestamp now);
  bool resume(Timestamp now);
  // Graceful departure: checkpoint every workload within `grace`, notify the
  // coordinator, leave.
  void drain(Timestamp now, std::optional<Duration> grace = {});
  // Never fails. grace 0: terminate everything now. Otherwise best-effort
  // checkpoints within grace first. The coordinator is only notified, never
  // waited on.
  void kill_switch(Timestamp now, Duration grace, bool allow_checkpoint = true);
  // Machine goes dark (sleep, network loss) and comes back.
  void suspend(Timestamp now);
  void wake(Timestamp now);

  NodeState local_state() const { return local_state_; }
  bool in_session() const { return session_; }
  bool registered() const { return registered_; }
  bool suspended() const { return suspended_; }
  std::optional<NodeId> node_id() const { return node_id_; }
  std::size_t workload_count() const { return workloads_.size(); }
  // Workloads whose container has not exited.
  std::size_t live_workloads() const;
  const AgentConfig& config() const { return config_; }
  Json status_json(Timestamp now) const;
  Duration current_backoff() const { return backoff_; }

 private:
  struct Upload {
    resilience::PreparedCheckpoint prepared;
    std::uint64_t transfer = 0;
    Timestamp done_at;
    Duration progress{0};
    bool full = false;
    bool final = false;
  };
  struct Workload {
    JobId job;
    std::uint32_t attempt = 0;
    JobSpec spec;
    std::string container;  // empty when the launch never produced one
    std::vector<std::uint32_t> gpus;
    WorkloadPhase phase = WorkloadPhase::Starting;
    int exit_code = 0;
    std::string error;
    std::vector<CheckpointManifest> lineage;
    std::uint64_t next_seq = 0;
    Timestamp start_at;
    std::optional<Duration> next_capture;  // progress at which to capture
    std::optional<Upload> upload;
    std::vector<CheckpointManifest> unreported;
    std::optional<Timestamp> stop_deadline;  // grace expiry of a final checkpoint
    bool frozen = false;
    bool departing = false;  // stopped for a departure, reported at the notice
  };
  struct Departure {
    DepartureKind kind = DepartureKind::Graceful;
    Timestamp deadline;
  };

  void step(Timestamp now);
  void attempt_registration(Timestamp now);
  void send_heartbeat(Timestamp now);
  void handle_directive(const Directive& directive, Timestamp now);
  void launch(const LaunchDirective& directive, Timestamp now);
  void capture(Workload& w, Timestamp now);
  void finish_upload(Workload& w, Timestamp now);
  void begin_final(Workload& w, Timestamp deadline, bool allow_checkpoint, Timestamp now);
  void stop(Workload& w, Timestamp now, bool departing);
  void cancel_upload(Workload& w, Timestamp now);
  void plan_next_capture(Workload& w, Duration progress);
  void maybe_complete_departure(Timestamp now);
  void complete_departure(Timestamp now);
  std::optional<Timestamp> workload_deadline(const Workload& w) const;
  Duration progress(const Workload& w, Timestamp now) const;
  std::vector<WorkloadReport> reports() const;
  std::vector<GpuLoad> gpu_loads() const;
  void emit(AgentEvent event);
  void log(Timestamp now, const std::string& line);

  AgentConfig config_;
  AgentDeps deps_;
  std::function<void(const AgentEvent&)> trace_;
  std::unique_ptr<resilience::TransferLedger> own_ledger_;
  resilience::TransferLedger* ledger_;

  bool session_ = false;
  bool registered_ = false;
  bool suspended_ = false;
  bool token_unverified_ = false;  // stored token not yet accepted this session
  NodeState local_state_ = NodeState::Registering;
  std::optional<NodeId> node_id_;
  std::string token_;
  std::uint64_t last_seq_ = 0;
  std::optional<Timestamp> next_heartbeat_;
  std::optional<Timestamp> next_registration_;
  Duration backoff_{std::chrono::seconds(1)};
  std::optional<bool> pending_pause_;
  bool announce_drain_ = false;
  std::optional<Departure> departure_;
  std::optional<Timestamp> suspended_at_;
  std::map<JobId, Workload> workloads_;
  Timestamp now_;
};

}  // namespace gpunion::agent
