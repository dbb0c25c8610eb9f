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
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "gpunion/coordinator/config.hpp"
#include "gpunion/coordinator/event_store.hpp"
#include "gpunion/coordinator/events.hpp"
#include "gpunion/coordinator/policy.hpp"
#include "gpunion/core/state_machine.hpp"
#include "gpunion/core/time.hpp"
#include "gpunion/resilience/migration.hpp"

namespace gpunion::coord {

enum class VolatilityInput { Interruption, DayElapsed };

inline constexpr std::int64_t kMsPerDay = 86'400'000;

// Scheduler and registry. Not thread-safe: callers serialize access (the
// HTTP server runs every mutation on one command thread).
class Coordinator {
 public:
  struct Options {
    bool record_log = true;
    std::optional<std::uint64_t> token_seed;  // unset: tokens from the OS CSPRNG
    std::shared_ptr<const SchedulePolicy> policy;  // default ScoredRoundRobinPolicy
    EventStore* store = nullptr;                   // replayed on construction
    std::function<void(const EventLogEntry&)> observer;
  };

  Coordinator(CoordinatorConfig config, const Clock& clock);
  Coordinator(CoordinatorConfig config, const Clock& clock, Options options);

  RegistrationResponse register_node(const RegistrationRequest& request);
  HeartbeatAck process_heartbeat(const HeartbeatRequest& request, std::string_view token);
  // Final word from a departing agent. Returns the plans for displaced jobs.
  std::vector<resilience::MigrationPlan> receive_departure(const DepartureNotice& notice,
                                                           std::string_view token);

  std::vector<NodeId> detect_failures(Timestamp now);
  JobId enqueue_job(const JobSpec& spec);
  std::vector<Allocation> schedule_tick(Timestamp now);
  // Graceful: node enters Draining and its agent is told to checkpoint and
  // leave; jobs move when the departure notice arrives. Emergency: node
  // leaves now and jobs restart from their latest checkpoint.
  std::vector<resilience::MigrationPlan> handle_departure(const NodeId& node, DepartureKind kind,
                                                          std::optional<Duration> grace = {});
  double update_volatility(const NodeId& node, VolatilityInput input);

  // Returns false when the node already was in the requested state.
  bool pause_node(const NodeId& node);
  bool resume_node(const NodeId& node);
  bool drain_node(const NodeId& node, std::optional<Duration> grace = {});
  // Relays a kill-switch to the node's agent with its next heartbeat ack.
  void kill_node(const NodeId& node, Duration grace);
  void cancel_job(JobId job);

  // Day rollover, failure detection and scheduling, in that order.
  void tick(Timestamp now);

  const ClusterState& state() const { return state_; }
  const std::vector<EventLogEntry>& log() const { return log_; }
  const CoordinatorConfig& config() const { return config_; }
  std::uint64_t last_seq() const { return state_.last_event_seq; }

  const NodeEntry& node(const NodeId& id) const;  // throws Error(UnknownNode)
  const JobRecord& job(JobId id) const;           // throws Error(NotFound)

 private:
  void begin(Timestamp now);
  void emit(EventPayload payload);
  void maybe_schedule();
  void roll_days();
  void record_interruption(const NodeId& node);
  void set_node_state(const NodeId& node, NodeEvent event, std::string reason);
  void set_job_state(JobId job, JobEvent event, std::string reason = {});
  void grant(const JobRecord& job, const Placement& placement);
  resilience::MigrationPlan displace(JobId job, const NodeId& origin, const std::string& reason);
  std::vector<resilience::MigrationPlan> displace_all(const NodeId& node, const std::string& reason);
  void start_if_scheduled(JobId job);
  void reconcile(const NodeId& node, const WorkloadReport& report, std::vector<Directive>& immediate,
                 bool departing);
  NodeEntry& authenticate(const NodeId& node, std::string_view token);
  std::string new_token();

  CoordinatorConfig config_;
  const Clock& clock_;
  Options options_;
  std::shared_ptr<const SchedulePolicy> policy_;
  ClusterState state_;
  std::vector<EventLogEntry> log_;
  std::optional<std::mt19937_64> rng_;
  Timestamp now_;
  bool placement_stale_ = true;
};

// Read models served by the REST API and the CLI.
Json node_view(const ClusterState& state, const NodeEntry& node);
Json job_view(const JobRecord& job);
Json cluster_summary(const ClusterState& state);
std::string metrics_text(const ClusterState& state);

}  // namespace gpunion::coord
