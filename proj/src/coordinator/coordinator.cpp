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

#include "gpunion/coordinator/coordinator.hpp"

#include <openssl/rand.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "gpunion/core/digest.hpp"
#include "gpunion/core/error.hpp"
#include "gpunion/core/state_machine.hpp"
#include "gpunion/core/validation.hpp"

namespace gpunion::coord {
namespace {

std::string hex_bytes(const unsigned char* data, std::size_t n) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(kHex[data[i] >> 4]);
    out.push_back(kHex[data[i] & 0xf]);
  }
  return out;
}

std::int64_t day_of(Timestamp t) {
  std::int64_t ms = ms_since_epoch(t);
  return ms >= 0 ? ms / kMsPerDay : -((-ms + kMsPerDay - 1) / kMsPerDay);
}

bool holds_allocation_on(const JobRecord& job, const NodeId& node) {
  return job.allocation && job.allocation->node_id == node;
}

}  // namespace

Coordinator::Coordinator(CoordinatorConfig config, const Clock& clock)
    : Coordinator(std::move(config), clock, Options{}) {}

Coordinator::Coordinator(CoordinatorConfig config, const Clock& clock, Options options)
    : config_(std::move(config)), clock_(clock), options_(std::move(options)) {
  validate(config_.scheduler);
  policy_ = options_.policy ? options_.policy : std::make_shared<ScoredRoundRobinPolicy>();
  if (options_.token_seed) rng_.emplace(*options_.token_seed);
  if (options_.store) {
    for (const auto& entry : options_.store->load()) {
      apply(state_, entry);
      if (options_.record_log) log_.push_back(entry);
    }
  }
  now_ = clock_.now();
}

void Coordinator::begin(Timestamp now) {
  now_ = now;
  roll_days();
}

void Coordinator::emit(EventPayload payload) {
  EventLogEntry entry{state_.last_event_seq + 1, now_, std::move(payload)};
  apply(state_, entry);
  if (!std::holds_alternative<HeartbeatReceived>(entry.payload) &&
      !std::holds_alternative<HeartbeatMissed>(entry.payload) &&
      !std::holds_alternative<CheckpointRecorded>(entry.payload) &&
      !std::holds_alternative<VolatilityUpdated>(entry.payload) &&
      !std::holds_alternative<DayRolled>(entry.payload) &&
      !std::holds_alternative<DirectiveQueued>(entry.payload) &&
      !std::holds_alternative<DirectivesDelivered>(entry.payload)) {
    placement_stale_ = true;
  }
  if (options_.store) options_.store->append(entry);
  if (options_.observer) options_.observer(entry);
  if (options_.record_log) log_.push_back(std::move(entry));
}

std::string Coordinator::new_token() {
  unsigned char bytes[32];
  if (rng_) {
    for (std::size_t i = 0; i < sizeof bytes; i += 8) {
      std::uint64_t v = (*rng_)();
      for (std::size_t b = 0; b < 8; ++b) bytes[i + b] = static_cast<unsigned char>(v >> (8 * b));
    }
  } else if (RAND_bytes(bytes, sizeof bytes) != 1) {
    throw Error(ErrorCode::RegistrationRejected, "no entropy for token generation");
  }
  return hex_bytes(bytes, sizeof bytes);
}

const NodeEntry& Coordinator::node(const NodeId& id) const {
  auto it = state_.nodes.find(id);
  if (it == state_.nodes.end()) throw Error(ErrorCode::UnknownNode, "unknown node " + id.to_hex());
  return it->second;
}

const JobRecord& Coordinator::job(JobId id) const {
  auto it = state_.jobs.find(id);
  if (it == state_.jobs.end()) throw Error(ErrorCode::NotFound, "no job " + to_string(id));
  return it->second;
}

NodeEntry& Coordinator::authenticate(const NodeId& id, std::string_view token) {
  auto it = state_.nodes.find(id);
  if (it == state_.nodes.end()) throw Error(ErrorCode::UnknownNode, "unknown node " + id.to_hex());
  const auto& hash = it->second.record.auth_token_hash;
  if (hash.empty() || sha256_hex(token) != hash) {
    throw Error(ErrorCode::Unauthorized, "bad token for node " + id.to_hex());
  }
  return it->second;
}

void Coordinator::set_node_state(const NodeId& id, NodeEvent event, std::string reason) {
  NodeState from = node(id).record.state;
  NodeState to = transition(from, event);
  emit(NodeStateChanged{id, from, to, std::move(reason)});
}

void Coordinator::set_job_state(JobId id, JobEvent event, std::string reason) {
  JobState from = job(id).state;
  JobState to = transition(from, event);
  emit(JobStateChanged{id, from, to, std::move(reason)});
}

// ---- volatility ----

void Coordinator::roll_days() {
  std::int64_t today = day_of(now_);
  if (today <= state_.current_day) return;
  std::int64_t elapsed = today - state_.current_day;
  double alpha = config_.scheduler.volatility_alpha;
  for (const auto& [id, n] : state_.nodes) {
    // The finished day contributes its count; any further whole days were
    // empty.
    double score = (1.0 - alpha) * n.record.volatility_score +
                   alpha * static_cast<double>(n.interruptions_today);
    if (elapsed > 1) score *= std::pow(1.0 - alpha, static_cast<double>(elapsed - 1));
    emit(VolatilityUpdated{id, score, 0});
  }
  emit(DayRolled{today});
}

void Coordinator::record_interruption(const NodeId& id) {
  const auto& n = node(id);
  emit(VolatilityUpdated{id, n.record.volatility_score, n.interruptions_today + 1});
}

double Coordinator::update_volatility(const NodeId& id, VolatilityInput input) {
  node(id);
  if (input == VolatilityInput::Interruption) {
    begin(clock_.now());
    record_interruption(id);
  } else {
    // Close the current day as if the clock had crossed midnight.
    now_ = std::max(clock_.now(), at_ms((state_.current_day + 1) * kMsPerDay));
    roll_days();
  }
  return node(id).record.volatility_score;
}

// ---- registration and heartbeats ----

RegistrationResponse Coordinator::register_node(const RegistrationRequest& request) {
  if (request.gpus.empty()) throw Error(ErrorCode::EmptyGpuList, "registration lists no GPUs");
  for (const auto& gpu : request.gpus) {
    if (!validate_gpu(gpu)) {
      throw Error(ErrorCode::ValidationFailed, "invalid GPU descriptor at index " + std::to_string(gpu.index));
    }
  }
  if (request.latency_ms < 0.0 || !std::isfinite(request.latency_ms)) {
    throw Error(ErrorCode::ValidationFailed, "latency_ms must be a nonnegative number");
  }
  begin(clock_.now());

  NodeRecord record;
  std::optional<NodeState> prior_state;
  if (request.prior_id) {
    if (request.prior_id->is_nil()) throw Error(ErrorCode::ValidationFailed, "nil node id");
    record.id = *request.prior_id;
    if (auto it = state_.nodes.find(record.id); it != state_.nodes.end()) {
      prior_state = it->second.record.state;
      if (*prior_state == NodeState::Active || *prior_state == NodeState::Paused ||
          *prior_state == NodeState::Draining) {
        throw Error(ErrorCode::DuplicateActiveNode, "node " + record.id.to_hex() + " is already live");
      }
      record.volatility_score = it->second.record.volatility_score;
      record.last_heartbeat_seq = it->second.record.last_heartbeat_seq;
    }
  } else {
    do {
      record.id = rng_ ? NodeId::random(*rng_) : NodeId::generate();
    } while (record.id.is_nil() || state_.nodes.contains(record.id));
  }
  if (!prior_state) record.volatility_score = config_.scheduler.volatility_prior;

  std::string token = new_token();
  record.gpus = request.gpus;
  record.latency_ms = request.latency_ms;
  record.auth_token_hash = sha256_hex(token);
  if (prior_state == NodeState::Unavailable) {
    record.state = NodeState::Unavailable;
    record.missed_heartbeats = kMissThreshold;
    emit(NodeRegistered{record, true});
    set_node_state(record.id, NodeEvent::Reconnect, "reconnect");
  } else {
    record.state = NodeState::Registering;
    emit(NodeRegistered{record, prior_state.has_value()});
    set_node_state(record.id, NodeEvent::Activate, prior_state ? "rejoin" : "registered");
  }
  maybe_schedule();
  return RegistrationResponse{record.id, token};
}

HeartbeatAck Coordinator::process_heartbeat(const HeartbeatRequest& request,
                                            std::string_view token) {
  NodeEntry& entry = authenticate(request.node_id, token);
  if (request.seq <= entry.record.last_heartbeat_seq) {
    throw Error(ErrorCode::StaleSequence, "heartbeat seq " + std::to_string(request.seq) +
                                              " <= " + std::to_string(entry.record.last_heartbeat_seq));
  }
  const NodeId id = request.node_id;
  begin(clock_.now());
  emit(HeartbeatReceived{id, request.seq, request.telemetry, request.latency_ms});

  if (node(id).record.state == NodeState::Unavailable) {
    set_node_state(id, NodeEvent::Reconnect, "reconnect");
  }
  if (request.draining) {
    NodeState s = node(id).record.state;
    if (s == NodeState::Active || s == NodeState::Paused) {
      set_node_state(id, NodeEvent::Drain, "provider-drain");
    }
  } else if (request.pause_request) {
    NodeState s = node(id).record.state;
    if (*request.pause_request && s == NodeState::Active) {
      set_node_state(id, NodeEvent::Pause, "provider");
    } else if (!*request.pause_request && s == NodeState::Paused) {
      set_node_state(id, NodeEvent::Resume, "provider");
    }
  }

  std::vector<Directive> immediate;
  std::set<JobId> reported;
  for (const auto& report : request.workloads) {
    reported.insert(report.job_id);
    reconcile(id, report, immediate, false);
  }
  std::vector<JobId> vanished;
  for (const auto& [jid, job] : state_.jobs) {
    if (holds_allocation_on(job, id) && job.launch_delivered && !reported.contains(jid)) {
      vanished.push_back(jid);
    }
  }
  for (JobId jid : vanished) displace(jid, id, "workload-vanished");

  maybe_schedule();

  HeartbeatAck ack;
  ack.directives = std::move(immediate);
  std::vector<JobId> launched;
  for (const auto& d : node(id).outbox) {
    if (const auto* launch = std::get_if<LaunchDirective>(&d)) {
      // Skip launches whose allocation was withdrawn before delivery.
      const auto& job = state_.jobs.at(launch->job_id);
      if (!holds_allocation_on(job, id)) continue;
      launched.push_back(launch->job_id);
    }
    ack.directives.push_back(d);
  }
  if (!node(id).outbox.empty()) emit(DirectivesDelivered{id, std::move(launched)});
  ack.node_state = node(id).record.state;
  return ack;
}

void Coordinator::start_if_scheduled(JobId id) {
  const JobRecord& job = this->job(id);
  if (job.state == JobState::Scheduled) {
    bool migrating = job.migrating;
    NodeId to = job.allocation->node_id;
    bool returned = job.displaced_from && *job.displaced_from == to;
    set_job_state(id, JobEvent::Start);
    if (migrating) emit(MigrationCompleted{id, to, returned});
  } else if (job.state == JobState::Checkpointing) {
    set_job_state(id, JobEvent::EndCheckpoint);
  }
}

void Coordinator::reconcile(const NodeId& node_id, const WorkloadReport& report,
                            std::vector<Directive>& immediate, bool departing) {
  auto it = state_.jobs.find(report.job_id);
  // Reports from an earlier launch of the job on this node are stale.
  if (it == state_.jobs.end() || !holds_allocation_on(it->second, node_id) ||
      (report.attempt != 0 && report.attempt != it->second.history.size())) {
    if (!departing && report.phase != WorkloadPhase::Exited) {
      immediate.push_back(TerminateDirective{report.job_id, Duration{0}, report.attempt});
    }
    return;
  }
  const JobId id = report.job_id;
  for (const auto& m : report.new_manifests) {
    const auto& cps = job(id).checkpoints;
    if (m.job_id == id && (cps.empty() || m.seq > cps.back().seq)) emit(CheckpointRecorded{m});
  }
  switch (report.phase) {
    case WorkloadPhase::Starting:
    case WorkloadPhase::Terminating:
      break;
    case WorkloadPhase::Running:
      if (!departing) start_if_scheduled(id);
      break;
    case WorkloadPhase::Checkpointing:
      if (departing) break;
      if (job(id).state == JobState::Scheduled) start_if_scheduled(id);
      if (job(id).state == JobState::Running) set_job_state(id, JobEvent::BeginCheckpoint);
      break;
    case WorkloadPhase::Exited:
      if (report.exit_code == 0 && report.error.empty()) {
        start_if_scheduled(id);
        set_job_state(id, JobEvent::Complete, "exit 0");
        emit(AllocationReleased{id});
      } else if (!departing) {
        if (job(id).state == JobState::Checkpointing) set_job_state(id, JobEvent::EndCheckpoint);
        std::string reason = report.error.empty()
                                 ? "exit code " + std::to_string(report.exit_code)
                                 : report.error;
        set_job_state(id, JobEvent::Fail, reason);
        emit(AllocationReleased{id});
      }
      break;
  }
}

std::vector<resilience::MigrationPlan> Coordinator::receive_departure(const DepartureNotice& notice,
                                                                      std::string_view token) {
  authenticate(notice.node_id, token);
  begin(clock_.now());
  const NodeId id = notice.node_id;
  NodeState s = node(id).record.state;
  if (s != NodeState::Active && s != NodeState::Paused && s != NodeState::Draining) return {};
  const bool graceful = notice.kind == DepartureKind::Graceful;
  if (s != NodeState::Draining) {
    set_node_state(id, NodeEvent::Drain, graceful ? "graceful-departure" : "emergency-departure");
  }
  std::vector<Directive> ignored;
  for (const auto& report : notice.workloads) reconcile(id, report, ignored, true);
  auto plans = displace_all(id, graceful ? "graceful-departure" : "emergency-departure");
  set_node_state(id, NodeEvent::Depart, graceful ? "graceful-departure" : "emergency-departure");
  record_interruption(id);
  return plans;
}

// ---- failure detection, departures, migration ----

std::vector<NodeId> Coordinator::detect_failures(Timestamp now) {
  begin(now);
  const auto interval = config_.scheduler.heartbeat_interval.count();
  std::vector<NodeId> newly_unavailable;
  std::vector<NodeId> silent;
  for (const auto& [id, n] : state_.nodes) {
    NodeState s = n.record.state;
    if (s != NodeState::Active && s != NodeState::Paused && s != NodeState::Draining) continue;
    auto elapsed = (now - n.last_heartbeat_at).count();
    auto missed = static_cast<std::uint32_t>(
        std::min<std::int64_t>(elapsed > 0 ? elapsed / interval : 0, kMissThreshold));
    if (missed > n.record.missed_heartbeats) silent.push_back(id);
  }
  for (const NodeId& id : silent) {
    const auto& n = node(id);
    auto elapsed = (now - n.last_heartbeat_at).count();
    auto missed = static_cast<std::uint32_t>(std::min<std::int64_t>(elapsed / interval, kMissThreshold));
    emit(HeartbeatMissed{id, missed});
    if (missed < kMissThreshold) continue;
    if (n.record.state == NodeState::Draining) {
      // The agent never confirmed its departure.
      displace_all(id, "drain-timeout");
      set_node_state(id, NodeEvent::Depart, "drain-timeout");
    } else {
      set_node_state(id, NodeEvent::HeartbeatLost, "heartbeat-loss");
      displace_all(id, "heartbeat-loss");
      newly_unavailable.push_back(id);
    }
    record_interruption(id);
  }
  return newly_unavailable;
}

std::vector<resilience::MigrationPlan> Coordinator::handle_departure(const NodeId& id,
                                                                     DepartureKind kind,
                                                                     std::optional<Duration> grace) {
  begin(clock_.now());
  NodeState s = node(id).record.state;
  if (kind == DepartureKind::Graceful) {
    if (s != NodeState::Draining) set_node_state(id, NodeEvent::Drain, "drain-requested");
    emit(DirectiveQueued{id, DrainDirective{grace.value_or(config_.scheduler.grace_default)}});
    return {};
  }
  if (s != NodeState::Draining) set_node_state(id, NodeEvent::Drain, "emergency-departure");
  auto plans = displace_all(id, "emergency-departure");
  set_node_state(id, NodeEvent::Depart, "emergency-departure");
  record_interruption(id);
  return plans;
}

std::vector<resilience::MigrationPlan> Coordinator::displace_all(const NodeId& id,
                                                                 const std::string& reason) {
  std::vector<JobId> jobs;
  for (const auto& [jid, job] : state_.jobs) {
    if (holds_allocation_on(job, id)) jobs.push_back(jid);
  }
  std::vector<resilience::MigrationPlan> plans;
  for (JobId jid : jobs) plans.push_back(displace(jid, id, reason));
  return plans;
}

resilience::MigrationPlan Coordinator::displace(JobId id, const NodeId& origin,
                                                const std::string& reason) {
  const JobRecord& job = this->job(id);
  Duration window = job.spec.affinity_window.value_or(config_.scheduler.affinity_window_default);
  const bool executing = job.state == JobState::Running || job.state == JobState::Checkpointing;
  set_job_state(id, JobEvent::Migrate, reason);
  emit(MigrationStarted{id, origin, reason, AffinityTag{origin, now_ + window}, executing});
  emit(AllocationReleased{id});

  auto plan = resilience::plan_migration(this->job(id), state_, *policy_, config_.scheduler, now_);
  switch (plan.outcome) {
    case resilience::MigrationOutcome::Lost:
      set_job_state(id, JobEvent::Lose, "no checkpoint to restore");
      break;
    case resilience::MigrationOutcome::Migrate:
      grant(this->job(id), *plan.target);
      break;
    case resilience::MigrationOutcome::Requeue:
      emit(JobRequeued{id});
      set_job_state(id, JobEvent::Requeue, "no eligible node");
      break;
  }
  return plan;
}

// ---- jobs and scheduling ----

JobId Coordinator::enqueue_job(const JobSpec& spec) {
  if (auto rejection = validate_job_spec(spec, config_.allow_list)) {
    throw Error(rejection->code, rejection->detail);
  }
  begin(clock_.now());
  JobId id{state_.next_job_id};
  emit(JobEnqueued{id, spec, state_.next_enqueue_seq});
  schedule_tick(now_);
  return id;
}

void Coordinator::grant(const JobRecord& job, const Placement& placement) {
  const JobId id = job.id;
  emit(AllocationGranted{Allocation{id, placement.node, placement.gpu_indices, now_},
                         placement.via_affinity});
  set_job_state(id, JobEvent::Schedule);
  const JobRecord& j = this->job(id);
  emit(DirectiveQueued{placement.node,
                       LaunchDirective{id, j.spec, placement.gpu_indices, !j.checkpoints.empty(),
                                       static_cast<std::uint32_t>(j.history.size())}});
}

std::vector<Allocation> Coordinator::schedule_tick(Timestamp now) {
  begin(now);
  std::vector<Allocation> granted;
  for (JobId id : state_.pending.ordered()) {
    const JobRecord& job = this->job(id);
    auto placement = policy_->place(job, state_, config_.scheduler, now_);
    if (!placement) continue;
    grant(job, *placement);
    granted.push_back(*this->job(id).allocation);
  }
  // Grants only shrink capacity, so every job left pending still has no
  // candidate until a node, allocation or queue change.
  placement_stale_ = false;
  return granted;
}

void Coordinator::maybe_schedule() {
  if (placement_stale_ && !state_.pending.empty()) schedule_tick(now_);
}

void Coordinator::tick(Timestamp now) {
  detect_failures(now);
  maybe_schedule();
}

// ---- operator controls ----

bool Coordinator::pause_node(const NodeId& id) {
  begin(clock_.now());
  if (node(id).record.state == NodeState::Paused) return false;
  set_node_state(id, NodeEvent::Pause, "operator");
  return true;
}

bool Coordinator::resume_node(const NodeId& id) {
  begin(clock_.now());
  if (node(id).record.state == NodeState::Active) return false;
  set_node_state(id, NodeEvent::Resume, "operator");
  maybe_schedule();
  return true;
}

bool Coordinator::drain_node(const NodeId& id, std::optional<Duration> grace) {
  if (node(id).record.state == NodeState::Draining) return false;
  handle_departure(id, DepartureKind::Graceful, grace);
  return true;
}

void Coordinator::kill_node(const NodeId& id, Duration grace) {
  begin(clock_.now());
  NodeState s = node(id).record.state;
  if (s == NodeState::Departed || s == NodeState::Registering) {
    throw Error(ErrorCode::IllegalTransition,
                "IllegalTransition(" + std::string(to_string(s)) + ", Kill)");
  }
  if (grace.count() < 0) throw Error(ErrorCode::ValidationFailed, "grace must be nonnegative");
  emit(DirectiveQueued{id, KillDirective{grace}});
}

void Coordinator::cancel_job(JobId id) {
  begin(clock_.now());
  const JobRecord& job = this->job(id);
  std::optional<NodeId> holder;
  if (job.allocation) holder = job.allocation->node_id;
  set_job_state(id, JobEvent::Cancel, "cancelled");
  if (holder) {
    emit(AllocationReleased{id});
    emit(DirectiveQueued{*holder, TerminateDirective{id, Duration{0},
                                                     static_cast<std::uint32_t>(job.history.size())}});
  }
}

// ---- read models ----

Json node_view(const ClusterState& state, const NodeEntry& n) {
  Json j = n.record;
  j.erase("auth_token_hash");
  j["registered_at"] = encode_time(n.registered_at);
  j["last_heartbeat_at"] = encode_time(n.last_heartbeat_at);
  j["interruptions_today"] = n.interruptions_today;
  j["telemetry"] = n.telemetry;
  auto busy = state.busy_gpus(n.record.id);
  j["busy_gpus"] = std::vector<std::uint32_t>(busy.begin(), busy.end());
  return j;
}

Json job_view(const JobRecord& job) { return job; }

Json cluster_summary(const ClusterState& state) {
  Json nodes = Json::object();
  for (auto s : {NodeState::Registering, NodeState::Active, NodeState::Paused, NodeState::Draining,
                 NodeState::Unavailable, NodeState::Departed}) {
    nodes[std::string(to_string(s))] = 0;
  }
  Json jobs = Json::object();
  for (auto s : {JobState::Pending, JobState::Scheduled, JobState::Running, JobState::Checkpointing,
                 JobState::Migrating, JobState::Completed, JobState::Failed, JobState::Lost}) {
    jobs[std::string(to_string(s))] = 0;
  }
  std::uint64_t gpus_total = 0, gpus_busy = 0;
  for (const auto& [id, n] : state.nodes) {
    nodes[std::string(to_string(n.record.state))] = nodes[std::string(to_string(n.record.state))].get<int>() + 1;
    if (n.record.state != NodeState::Departed) gpus_total += n.record.gpus.size();
  }
  for (const auto& [id, job] : state.jobs) {
    jobs[std::string(to_string(job.state))] = jobs[std::string(to_string(job.state))].get<int>() + 1;
    if (job.allocation) gpus_busy += job.allocation->gpu_indices.size();
  }
  return Json{{"nodes", nodes},
              {"jobs", jobs},
              {"gpus_total", gpus_total},
              {"gpus_busy", gpus_busy},
              {"pending", state.pending.size()},
              {"migrations_total", state.counters.migrations_total},
              {"heartbeat_misses_total", state.counters.heartbeat_misses_total},
              {"checkpoint_bytes_total", state.counters.checkpoint_bytes_total},
              {"last_event_seq", state.last_event_seq}};
}

std::string metrics_text(const ClusterState& state) {
  std::ostringstream out;
  double util_sum = 0.0;
  std::size_t samples = 0;
  std::ostringstream per_gpu;
  for (const auto& [id, n] : state.nodes) {
    if (n.record.state == NodeState::Departed) continue;
    for (const auto& t : n.telemetry) {
      util_sum += t.util_pct;
      ++samples;
      per_gpu << "gpu_util_pct{node=\"" << id.to_hex() << "\",gpu=\"" << t.gpu_index << "\"} "
              << t.util_pct << "\n";
    }
  }
  std::size_t running = 0;
  for (const auto& [id, job] : state.jobs) {
    if (job.state == JobState::Running || job.state == JobState::Checkpointing) ++running;
  }
  out << "# TYPE gpu_util_pct gauge\n";
  out << "gpu_util_pct " << (samples ? util_sum / static_cast<double>(samples) : 0.0) << "\n";
  out << per_gpu.str();
  out << "# TYPE jobs_running gauge\njobs_running " << running << "\n";
  out << "# TYPE migrations_total counter\nmigrations_total " << state.counters.migrations_total << "\n";
  out << "# TYPE heartbeat_misses_total counter\nheartbeat_misses_total "
      << state.counters.heartbeat_misses_total << "\n";
  out << "# TYPE checkpoint_bytes_total counter\ncheckpoint_bytes_total "
      << state.counters.checkpoint_bytes_total << "\n";
  return out.str();
}

}  // namespace gpunion::coord
