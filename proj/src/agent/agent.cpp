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

#include "gpunion/agent/agent.hpp"

#include <algorithm>

#include "gpunion/core/state_machine.hpp"
#include "gpunion/resilience/restore.hpp"

namespace gpunion::agent {

namespace {

constexpr Duration kMaxBackoff = std::chrono::seconds(60);
constexpr int kExitDigestMismatch = 125;
constexpr int kExitLaunchFailed = 126;
constexpr int kExitKilled = 137;

bool live(WorkloadPhase phase) { return phase != WorkloadPhase::Exited && phase != WorkloadPhase::Terminating; }

std::optional<Timestamp> earliest(std::optional<Timestamp> a, std::optional<Timestamp> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

}  // namespace

LaunchRequest build_launch_request(JobId job, const JobSpec& spec,
                                   const std::vector<std::uint32_t>& gpu_indices) {
  LaunchRequest r;
  r.job = job;
  r.image_ref = spec.image_ref;
  r.image_digest = spec.image_digest;
  r.mode = spec.mode;
  r.gpu_indices = gpu_indices;
  r.estimated_duration = spec.estimated_duration;
  std::string visible;
  for (auto g : gpu_indices) {
    if (!visible.empty()) visible += ',';
    visible += std::to_string(g);
  }
  r.env["NVIDIA_VISIBLE_DEVICES"] = visible;
  if (spec.mode == JobMode::Interactive) {
    r.entrypoint = {"jupyter", "lab", "--ip=0.0.0.0", "--port=" + std::to_string(kNotebookPort),
                    "--no-browser"};
    r.published_port = kNotebookPort;
  } else {
    r.entrypoint = spec.entrypoint;
  }
  return r;
}

std::string_view to_string(AgentEventKind kind) {
  switch (kind) {
    case AgentEventKind::Registered: return "Registered";
    case AgentEventKind::RegistrationFailed: return "RegistrationFailed";
    case AgentEventKind::HeartbeatFailed: return "HeartbeatFailed";
    case AgentEventKind::Launched: return "Launched";
    case AgentEventKind::LaunchFailed: return "LaunchFailed";
    case AgentEventKind::Started: return "Started";
    case AgentEventKind::CheckpointDurable: return "CheckpointDurable";
    case AgentEventKind::CheckpointSkipped: return "CheckpointSkipped";
    case AgentEventKind::FinalCheckpointDurable: return "FinalCheckpointDurable";
    case AgentEventKind::FinalCheckpointMissed: return "FinalCheckpointMissed";
    case AgentEventKind::Terminated: return "Terminated";
    case AgentEventKind::Completed: return "Completed";
    case AgentEventKind::Suspended: return "Suspended";
    case AgentEventKind::Woke: return "Woke";
    case AgentEventKind::Departed: return "Departed";
  }
  return "?";
}

Agent::Agent(AgentConfig config, AgentDeps deps, std::function<void(const AgentEvent&)> trace)
    : config_(std::move(config)), deps_(deps), trace_(std::move(trace)) {
  validate(config_);
  if (deps_.ledger) {
    ledger_ = deps_.ledger;
  } else {
    own_ledger_ = std::make_unique<resilience::TransferLedger>(config_.link_bandwidth_mbps);
    ledger_ = own_ledger_.get();
  }
}

void Agent::join(Timestamp now) {
  now_ = now;
  if (session_) return;
  node_id_ = deps_.identity.load_or_create();
  session_ = true;
  suspended_ = false;
  registered_ = false;
  local_state_ = NodeState::Registering;
  departure_.reset();
  announce_drain_ = false;
  pending_pause_.reset();
  backoff_ = std::chrono::seconds(1);
  next_heartbeat_.reset();
  next_registration_.reset();
  if (auto token = deps_.identity.token()) {
    // Resume the stored session; a rejected token falls back to registration.
    token_ = *token;
    registered_ = true;
    token_unverified_ = true;
    next_heartbeat_ = now;
  } else {
    next_registration_ = now;
  }
  step(now);
}

void Agent::advance_to(Timestamp now) {
  now_ = std::max(now_, now);
  if (!session_ || suspended_) return;
  step(now_);
}

std::optional<Timestamp> Agent::next_deadline() const {
  if (!session_ || suspended_) return std::nullopt;
  std::optional<Timestamp> best = next_registration_;
  if (registered_) best = earliest(best, next_heartbeat_);
  for (const auto& [_, w] : workloads_) best = earliest(best, workload_deadline(w));
  return best;
}

std::optional<Timestamp> Agent::workload_deadline(const Workload& w) const {
  std::optional<Timestamp> best = w.stop_deadline;
  if (w.upload) best = earliest(best, w.upload->done_at);
  if (w.container.empty() || w.frozen) return best;
  if (w.phase == WorkloadPhase::Starting) return earliest(best, w.start_at);
  if (w.phase != WorkloadPhase::Running && w.phase != WorkloadPhase::Checkpointing) return best;
  const auto done = progress(w, now_);
  const auto duration = deps_.runtime.state_model(w.container).duration;
  best = earliest(best, now_ + std::max(Duration{0}, duration - done));
  if (!w.upload && w.next_capture) best = earliest(best, now_ + std::max(Duration{0}, *w.next_capture - done));
  return best;
}

Duration Agent::progress(const Workload& w, Timestamp now) const {
  if (w.container.empty()) return Duration{0};
  return deps_.runtime.status(w.container, now).progress;
}

void Agent::step(Timestamp now) {
  if (next_registration_ && *next_registration_ <= now) attempt_registration(now);
  if (!session_) return;

  std::vector<JobId> jobs;
  for (const auto& [job, _] : workloads_) jobs.push_back(job);
  for (JobId job : jobs) {
    auto it = workloads_.find(job);
    if (it == workloads_.end()) continue;
    Workload& w = it->second;

    if (w.phase == WorkloadPhase::Starting && !w.frozen && !w.container.empty() && w.start_at <= now) {
      deps_.runtime.start(w.container, now);
      w.phase = WorkloadPhase::Running;
      const auto at = progress(w, now);
      plan_next_capture(w, at);
      emit({.at = now, .kind = AgentEventKind::Started, .job = job, .progress = at});
    }
    if ((w.phase == WorkloadPhase::Running || w.phase == WorkloadPhase::Checkpointing) && !w.frozen) {
      const auto status = deps_.runtime.status(w.container, now);
      if (status.phase == ContainerPhase::Exited) {
        deps_.runtime.terminate(w.container, now);
        cancel_upload(w, now);
        w.phase = WorkloadPhase::Exited;
        w.exit_code = status.exit_code;
        w.next_capture.reset();
        emit({.at = now, .kind = AgentEventKind::Completed, .job = job, .progress = status.progress});
        log(now, "job " + to_string(job) + " exited " + std::to_string(status.exit_code));
        if (registered_) next_heartbeat_ = now;
        continue;
      }
    }
    if (w.upload && w.upload->done_at <= now) finish_upload(w, now);
    if (w.stop_deadline && *w.stop_deadline <= now) {
      emit({.at = now,
            .kind = AgentEventKind::FinalCheckpointMissed,
            .job = job,
            .error = ErrorCode::RuntimeCheckpointFailure});
      stop(w, now, w.departing);
    }
    if (w.phase == WorkloadPhase::Running && !w.frozen && !w.upload && w.next_capture &&
        progress(w, now) >= *w.next_capture) {
      capture(w, now);
    }
  }
  maybe_complete_departure(now);
  if (!session_) return;

  if (registered_ && next_heartbeat_ && *next_heartbeat_ <= now) send_heartbeat(now);
}

void Agent::attempt_registration(Timestamp now) {
  next_registration_.reset();
  RegistrationRequest req{config_.gpus, config_.latency_ms, node_id_};
  RegistrationResponse resp;
  try {
    resp = deps_.client.register_node(req);
  } catch (const Error& e) {
    emit({.at = now, .kind = AgentEventKind::RegistrationFailed, .error = e.code()});
    log(now, "registration failed: " + std::string(e.what()));
    next_registration_ = now + backoff_;
    backoff_ = std::min(backoff_ * 2, kMaxBackoff);
    return;
  }
  node_id_ = resp.node_id;
  deps_.identity.save_node_id(resp.node_id);
  token_ = resp.token;
  deps_.identity.save_token(resp.token);
  registered_ = true;
  token_unverified_ = false;
  local_state_ = NodeState::Active;
  backoff_ = std::chrono::seconds(1);
  next_heartbeat_ = now + config_.heartbeat_interval;
  emit({.at = now, .kind = AgentEventKind::Registered});
  log(now, "registered as " + to_string(resp.node_id));
}

void Agent::send_heartbeat(Timestamp now) {
  HeartbeatRequest req;
  req.node_id = *node_id_;
  req.seq = std::max<std::uint64_t>(last_seq_ + 1, static_cast<std::uint64_t>(ms_since_epoch(now)));
  try {
    req.telemetry = deps_.probe.sample(*node_id_, gpu_loads(), now);
  } catch (const Error&) {
    req.telemetry.clear();
  }
  req.workloads = reports();
  req.pause_request = pending_pause_;
  req.draining = announce_drain_;
  next_heartbeat_ = now + config_.heartbeat_interval;

  HeartbeatAck ack;
  try {
    ack = deps_.client.heartbeat(req, token_);
  } catch (const Error& e) {
    emit({.at = now, .kind = AgentEventKind::HeartbeatFailed, .error = e.code()});
    switch (e.code()) {
      case ErrorCode::Unauthorized:
      case ErrorCode::UnknownNode:
        // The coordinator no longer knows this session; join again.
        registered_ = false;
        token_unverified_ = false;
        next_heartbeat_.reset();
        next_registration_ = now;
        break;
      case ErrorCode::StaleSequence:
        last_seq_ = req.seq;
        break;
      default:
        break;
    }
    return;
  }
  last_seq_ = req.seq;
  token_unverified_ = false;
  pending_pause_.reset();
  announce_drain_ = false;

  for (auto it = workloads_.begin(); it != workloads_.end();) {
    Workload& w = it->second;
    w.unreported.clear();
    if (w.phase == WorkloadPhase::Exited && !w.departing) {
      if (!w.container.empty()) deps_.runtime.remove(w.container);
      it = workloads_.erase(it);
    } else {
      ++it;
    }
  }
  if (local_state_ != NodeState::Draining && local_state_ != NodeState::Departed &&
      (ack.node_state == NodeState::Active || ack.node_state == NodeState::Paused)) {
    local_state_ = ack.node_state;
  }
  for (const auto& d : ack.directives) {
    if (!session_) break;
    handle_directive(d, now);
  }
}

void Agent::handle_directive(const Directive& directive, Timestamp now) {
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, LaunchDirective>) {
          launch(d, now);
        } else if constexpr (std::is_same_v<T, CheckpointDirective>) {
          auto it = workloads_.find(d.job_id);
          if (it != workloads_.end() && it->second.phase == WorkloadPhase::Running &&
              !it->second.frozen && !it->second.upload) {
            capture(it->second, now);
          }
        } else if constexpr (std::is_same_v<T, TerminateDirective>) {
          auto it = workloads_.find(d.job_id);
          if (it == workloads_.end()) return;
          if (d.attempt != 0 && d.attempt != it->second.attempt) return;
          if (d.grace <= Duration{0}) {
            stop(it->second, now, false);
          } else {
            begin_final(it->second, now + d.grace, true, now);
          }
        } else if constexpr (std::is_same_v<T, DrainDirective>) {
          if (!departure_) drain(now, d.grace);
        } else if constexpr (std::is_same_v<T, KillDirective>) {
          kill_switch(now, d.grace);
        }
      },
      directive);
}

void Agent::launch(const LaunchDirective& d, Timestamp now) {
  if (departure_ || local_state_ == NodeState::Draining || local_state_ == NodeState::Departed) return;
  Workload w;
  if (auto old = workloads_.find(d.job_id); old != workloads_.end()) {
    if (d.attempt == 0 || d.attempt <= old->second.attempt) return;
    // Superseded by a newer allocation on this node: retire the old run
    // without reporting it.
    stop(old->second, now, false);
    if (!old->second.container.empty()) deps_.runtime.remove(old->second.container);
    w.unreported = std::move(old->second.unreported);
    workloads_.erase(old);
  }
  w.job = d.job_id;
  w.attempt = d.attempt;
  w.spec = d.spec;
  w.gpus = d.gpu_indices;
  auto failed = [&](const Error& e, int code) {
    w.phase = WorkloadPhase::Exited;
    w.exit_code = code;
    w.error = std::string(to_string(e.code()));
    emit({.at = now, .kind = AgentEventKind::LaunchFailed, .job = d.job_id, .error = e.code()});
    log(now, "launch of job " + to_string(d.job_id) + " failed: " + e.what());
    workloads_.emplace(d.job_id, std::move(w));
    next_heartbeat_ = now;
  };
  try {
    deps_.runtime.pull_verify(d.spec.image_ref, d.spec.image_digest);
  } catch (const Error& e) {
    failed(e, kExitDigestMismatch);
    return;
  }

  const auto listing = deps_.store.list(d.spec.storage_target, d.job_id);
  w.next_seq = listing.empty() ? 0 : listing.back().seq + 1;
  const auto restored = resilience::restore(deps_.store, d.spec.storage_target, d.job_id);
  const auto request = build_launch_request(d.job_id, d.spec, d.gpu_indices);
  try {
    w.container = restored.stateless() ? deps_.runtime.launch(request, now)
                                       : deps_.runtime.restore(request, restored.progress, now);
  } catch (const Error& e) {
    failed(e, kExitLaunchFailed);
    return;
  }
  w.lineage = restored.chain;
  w.start_at = now;
  if (!restored.stateless()) {
    const auto id = ledger_->reserve(*node_id_, d.job_id, resilience::TransferKind::Restore, now,
                                     restored.transfer_bytes);
    w.start_at = ledger_->get(id).end + config_.restore_overhead;
  }
  w.phase = WorkloadPhase::Starting;
  emit({.at = now,
        .kind = AgentEventKind::Launched,
        .job = d.job_id,
        .container = w.container,
        .bytes = restored.transfer_bytes,
        .progress = restored.progress,
        .error = restored.fault});
  workloads_.emplace(d.job_id, std::move(w));
}

void Agent::capture(Workload& w, Timestamp now) {
  const auto policy = resilience::policy_for(w.spec);
  auto skip = [&](ErrorCode code) {
    emit({.at = now, .kind = AgentEventKind::CheckpointSkipped, .job = w.job, .error = code});
    w.next_capture = progress(w, now) + policy.interval;
  };
  if (!deps_.store.available(w.spec.storage_target)) {
    skip(ErrorCode::StorageTargetUnavailable);
    return;
  }
  StateCapture cap;
  try {
    cap = deps_.runtime.checkpoint(w.container, now);
  } catch (const Error& e) {
    skip(e.code());
    return;
  }
  auto prepared = resilience::prepare_checkpoint(w.job, w.lineage, w.next_seq, policy, cap.model,
                                                 cap.progress, now, w.spec.storage_target);
  const bool full = prepared.manifest.is_full();
  const auto id = ledger_->reserve(*node_id_, w.job, resilience::TransferKind::Backup, now,
                                   prepared.manifest.payload_bytes);
  w.upload = Upload{std::move(prepared), id, ledger_->get(id).end, cap.progress, full, false};
  w.phase = WorkloadPhase::Checkpointing;
}

void Agent::finish_upload(Workload& w, Timestamp now) {
  Upload u = std::move(*w.upload);
  w.upload.reset();
  const auto& m = u.prepared.manifest;
  try {
    deps_.store.put(m, u.prepared.blob);
  } catch (const Error& e) {
    if (u.final) {
      emit({.at = now, .kind = AgentEventKind::FinalCheckpointMissed, .job = w.job, .error = e.code()});
      stop(w, now, w.departing);
    } else {
      emit({.at = now, .kind = AgentEventKind::CheckpointSkipped, .job = w.job, .error = e.code()});
      w.phase = WorkloadPhase::Running;
      w.next_capture = progress(w, now) + resilience::policy_for(w.spec).interval;
    }
    return;
  }
  if (u.full) w.lineage.clear();
  w.lineage.push_back(m);
  w.next_seq = m.seq + 1;
  w.unreported.push_back(m);
  AgentEvent event{.at = now,
                   .kind = u.final ? AgentEventKind::FinalCheckpointDurable : AgentEventKind::CheckpointDurable,
                   .job = w.job,
                   .seq = m.seq,
                   .bytes = m.payload_bytes,
                   .progress = u.progress,
                   .full = u.full};
  emit(event);
  if (u.final) {
    stop(w, now, w.departing);
  } else {
    w.phase = WorkloadPhase::Running;
    plan_next_capture(w, u.progress);
  }
}

void Agent::plan_next_capture(Workload& w, Duration marker) {
  // Capture early by the expected upload time so the checkpoint is durable
  // one interval after the previous one.
  const auto policy = resilience::policy_for(w.spec);
  const auto model = deps_.runtime.state_model(w.container);
  const bool full = resilience::next_is_full(w.lineage, policy);
  const auto upload = resilience::transfer_time(resilience::payload_bytes(full, model),
                                                config_.link_bandwidth_mbps);
  const auto lead = policy.interval > upload ? policy.interval - upload : Duration{0};
  w.next_capture = marker + lead;
}

void Agent::begin_final(Workload& w, Timestamp deadline, bool allow_checkpoint, Timestamp now) {
  if (!live(w.phase)) return;
  if (w.stop_deadline) {
    // Already checkpointing for a stop; only tighten the deadline.
    w.stop_deadline = std::min(*w.stop_deadline, deadline);
    if (*w.stop_deadline <= now || !allow_checkpoint) stop(w, now, w.departing);
    return;
  }
  if (w.container.empty() || w.phase == WorkloadPhase::Starting) {
    stop(w, now, w.departing);
    return;
  }
  if (!w.frozen) {
    const auto status = deps_.runtime.status(w.container, now);
    if (status.phase == ContainerPhase::Exited) return;  // completion is picked up by step()
    deps_.runtime.freeze(w.container, now);
    w.frozen = true;
  }
  cancel_upload(w, now);
  if (!allow_checkpoint || deadline <= now) {
    stop(w, now, w.departing);
    return;
  }
  auto missed = [&](ErrorCode code) {
    emit({.at = now, .kind = AgentEventKind::FinalCheckpointMissed, .job = w.job, .error = code});
    stop(w, now, w.departing);
  };
  if (!deps_.store.available(w.spec.storage_target)) {
    missed(ErrorCode::StorageTargetUnavailable);
    return;
  }
  StateCapture cap;
  try {
    cap = deps_.runtime.checkpoint(w.container, now);
  } catch (const Error& e) {
    missed(e.code());
    return;
  }
  const bool full = w.lineage.empty() || (config_.consolidate_on_departure && w.departing);
  auto prepared = resilience::prepare_checkpoint(w.job, w.lineage, w.next_seq, resilience::policy_for(w.spec),
                                                 cap.model, cap.progress, now, w.spec.storage_target, full);
  const auto id = ledger_->reserve(*node_id_, w.job, resilience::TransferKind::Backup, now,
                                   prepared.manifest.payload_bytes);
  w.upload = Upload{std::move(prepared), id, ledger_->get(id).end, cap.progress, full, true};
  w.stop_deadline = deadline;
  w.phase = WorkloadPhase::Checkpointing;
}

void Agent::stop(Workload& w, Timestamp now, bool departing) {
  cancel_upload(w, now);
  w.stop_deadline.reset();
  w.next_capture.reset();
  w.departing = departing;
  if (w.phase == WorkloadPhase::Exited) return;
  Duration at{0};
  int code = kExitKilled;
  if (!w.container.empty()) {
    if (w.frozen) deps_.runtime.thaw(w.container, now);
    const auto status = deps_.runtime.status(w.container, now);
    at = status.progress;
    deps_.runtime.terminate(w.container, now);
    if (status.phase == ContainerPhase::Exited) code = status.exit_code;
  }
  w.frozen = false;
  w.exit_code = code;
  if (code == 0) {
    w.phase = WorkloadPhase::Exited;
    emit({.at = now, .kind = AgentEventKind::Completed, .job = w.job, .progress = at});
    return;
  }
  w.phase = departing ? WorkloadPhase::Terminating : WorkloadPhase::Exited;
  emit({.at = now, .kind = AgentEventKind::Terminated, .job = w.job, .progress = at});
}

void Agent::cancel_upload(Workload& w, Timestamp now) {
  if (!w.upload) return;
  ledger_->cancel(w.upload->transfer, now);
  w.upload.reset();
  if (w.phase == WorkloadPhase::Checkpointing) w.phase = WorkloadPhase::Running;
}

void Agent::maybe_complete_departure(Timestamp now) {
  if (!departure_) return;
  for (const auto& [_, w] : workloads_) {
    if (live(w.phase) || w.upload) return;
  }
  complete_departure(now);
}

void Agent::complete_departure(Timestamp now) {
  const auto kind = departure_ ? departure_->kind : DepartureKind::Emergency;
  if (registered_ && node_id_) {
    DepartureNotice notice{*node_id_, kind, reports()};
    try {
      deps_.client.depart(notice, token_);
    } catch (const Error& e) {
      log(now, "departure notice not delivered: " + std::string(e.what()));
    }
  }
  for (auto& [_, w] : workloads_) {
    if (w.upload) ledger_->cancel(w.upload->transfer, now);
    if (!w.container.empty()) {
      deps_.runtime.terminate(w.container, now);
      deps_.runtime.remove(w.container);
    }
  }
  workloads_.clear();
  local_state_ = NodeState::Departed;
  session_ = false;
  registered_ = false;
  departure_.reset();
  announce_drain_ = false;
  pending_pause_.reset();
  next_heartbeat_.reset();
  next_registration_.reset();
  emit({.at = now, .kind = AgentEventKind::Departed});
  log(now, std::string("departed (") + std::string(to_string(kind)) + ")");
}

bool Agent::pause(Timestamp now) {
  now_ = std::max(now_, now);
  if (local_state_ == NodeState::Paused) return false;
  local_state_ = transition(local_state_, NodeEvent::Pause);
  pending_pause_ = true;
  if (registered_) next_heartbeat_ = now;
  return true;
}

bool Agent::resume(Timestamp now) {
  now_ = std::max(now_, now);
  if (local_state_ == NodeState::Active) return false;
  local_state_ = transition(local_state_, NodeEvent::Resume);
  pending_pause_ = false;
  if (registered_) next_heartbeat_ = now;
  return true;
}

void Agent::drain(Timestamp now, std::optional<Duration> grace) {
  now_ = std::max(now_, now);
  if (departure_ || local_state_ == NodeState::Draining) return;
  if (local_state_ != NodeState::Registering) local_state_ = transition(local_state_, NodeEvent::Drain);
  if (!session_) throw Error(ErrorCode::IllegalTransition, "IllegalTransition(Departed, Drain)");
  local_state_ = NodeState::Draining;
  departure_ = Departure{DepartureKind::Graceful, now + grace.value_or(config_.grace_default)};
  announce_drain_ = true;
  for (auto& [_, w] : workloads_) {
    w.departing = true;
    begin_final(w, departure_->deadline, true, now);
  }
  maybe_complete_departure(now);
  if (session_ && registered_) {
    next_heartbeat_ = now;
    send_heartbeat(now);
  }
}

void Agent::kill_switch(Timestamp now, Duration grace, bool allow_checkpoint) {
  now_ = std::max(now_, now);
  if (!session_) return;
  const Timestamp deadline = now + std::max(Duration{0}, grace);
  if (departure_) {
    departure_->kind = DepartureKind::Emergency;
    departure_->deadline = std::min(departure_->deadline, deadline);
  } else {
    departure_ = Departure{DepartureKind::Emergency, deadline};
  }
  local_state_ = NodeState::Draining;
  const bool checkpoint = allow_checkpoint && grace > Duration{0} && !suspended_;
  for (auto& [_, w] : workloads_) {
    w.departing = true;
    if (checkpoint) {
      begin_final(w, departure_->deadline, true, now);
    } else {
      stop(w, now, true);
    }
  }
  if (suspended_ || !checkpoint) {
    complete_departure(now);
    return;
  }
  maybe_complete_departure(now);
}

void Agent::suspend(Timestamp now) {
  now_ = std::max(now_, now);
  if (!session_ || suspended_) return;
  suspended_ = true;
  suspended_at_ = now;
  for (auto& [_, w] : workloads_) {
    cancel_upload(w, now);
    if (!w.frozen && !w.container.empty() &&
        (w.phase == WorkloadPhase::Running || w.phase == WorkloadPhase::Checkpointing)) {
      deps_.runtime.freeze(w.container, now);
      w.frozen = true;
    }
  }
  emit({.at = now, .kind = AgentEventKind::Suspended});
}

void Agent::wake(Timestamp now) {
  now_ = std::max(now_, now);
  if (!suspended_) return;
  suspended_ = false;
  const Duration outage = now - suspended_at_.value_or(now);
  suspended_at_.reset();
  for (auto& [_, w] : workloads_) {
    if (w.phase == WorkloadPhase::Starting) w.start_at += outage;
    if (w.stop_deadline) {
      // The final checkpoint was cut off; retry it within what is left.
      const auto deadline = *w.stop_deadline;
      w.stop_deadline.reset();
      if (w.frozen) {
        deps_.runtime.thaw(w.container, now);
        w.frozen = false;
      }
      begin_final(w, deadline, true, now);
    } else if (w.frozen) {
      deps_.runtime.thaw(w.container, now);
      w.frozen = false;
      w.phase = WorkloadPhase::Running;
    }
  }
  emit({.at = now, .kind = AgentEventKind::Woke});
  maybe_complete_departure(now);
  if (!session_) return;
  if (registered_) {
    send_heartbeat(now);
  } else {
    next_registration_ = now;
  }
}

std::size_t Agent::live_workloads() const {
  return static_cast<std::size_t>(std::count_if(workloads_.begin(), workloads_.end(),
                                                [](const auto& kv) { return live(kv.second.phase); }));
}

std::vector<WorkloadReport> Agent::reports() const {
  std::vector<WorkloadReport> out;
  out.reserve(workloads_.size());
  for (const auto& [job, w] : workloads_) {
    WorkloadReport r;
    r.job_id = job;
    r.attempt = w.attempt;
    r.phase = w.phase;
    r.exit_code = w.phase == WorkloadPhase::Exited ? w.exit_code : 0;
    r.error = w.error;
    r.new_manifests = w.unreported;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<GpuLoad> Agent::gpu_loads() const {
  std::vector<GpuLoad> out;
  for (const auto& gpu : config_.gpus) {
    GpuLoad load{gpu, false, 0};
    for (const auto& [_, w] : workloads_) {
      if (!live(w.phase) || w.container.empty()) continue;
      if (std::find(w.gpus.begin(), w.gpus.end(), gpu.index) != w.gpus.end()) {
        load.busy = w.phase != WorkloadPhase::Starting && !w.frozen;
        load.job_memory_mib = w.spec.gpu_memory_mib_required;
      }
    }
    out.push_back(load);
  }
  return out;
}

Json Agent::status_json(Timestamp now) const {
  Json workloads = Json::array();
  for (const auto& [job, w] : workloads_) {
    workloads.push_back({{"job_id", to_string(job)},
                         {"phase", to_string(w.phase)},
                         {"container", w.container},
                         {"progress_s", to_seconds(progress(w, now))},
                         {"checkpoints", w.lineage.size()},
                         {"frozen", w.frozen}});
  }
  return {{"node_id", node_id_ ? to_string(*node_id_) : std::string()},
          {"state", to_string(local_state_)},
          {"registered", registered_},
          {"suspended", suspended_},
          {"workloads", workloads}};
}

void Agent::emit(AgentEvent event) {
  if (trace_) trace_(event);
}

void Agent::log(Timestamp now, const std::string& line) {
  deps_.identity.log(std::to_string(ms_since_epoch(now)) + " " + line);
}

}  // namespace gpunion::agent
