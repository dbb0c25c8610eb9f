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

#include "gpunion/coordinator/events.hpp"

#include <algorithm>

#include "gpunion/core/error.hpp"

namespace gpunion::coord {
namespace {

NodeEntry& node_at(ClusterState& s, const NodeId& id) {
  auto it = s.nodes.find(id);
  if (it == s.nodes.end()) throw Error(ErrorCode::CorruptEntry, "event references unknown node");
  return it->second;
}

JobRecord& job_at(ClusterState& s, JobId id) {
  auto it = s.jobs.find(id);
  if (it == s.jobs.end()) throw Error(ErrorCode::CorruptEntry, "event references unknown job");
  return it->second;
}

struct Applier {
  ClusterState& s;
  Timestamp at;

  void operator()(const NodeRegistered& e) {
    auto [it, inserted] = s.nodes.try_emplace(e.record.id);
    NodeEntry& n = it->second;
    n.record = e.record;
    n.registered_at = at;
    n.last_heartbeat_at = at;
    n.telemetry.clear();
    n.outbox.clear();
  }
  void operator()(const HeartbeatReceived& e) {
    NodeEntry& n = node_at(s, e.node);
    n.record.missed_heartbeats = 0;
    n.record.last_heartbeat_seq = e.seq;
    if (e.latency_ms) n.record.latency_ms = *e.latency_ms;
    n.last_heartbeat_at = at;
    n.telemetry = e.telemetry;
  }
  void operator()(const HeartbeatMissed& e) {
    NodeEntry& n = node_at(s, e.node);
    if (e.missed > n.record.missed_heartbeats) {
      s.counters.heartbeat_misses_total += e.missed - n.record.missed_heartbeats;
    }
    n.record.missed_heartbeats = e.missed;
  }
  void operator()(const NodeStateChanged& e) {
    NodeEntry& n = node_at(s, e.node);
    n.record.state = e.to;
    if (e.to == NodeState::Active) n.record.missed_heartbeats = 0;
    if (e.to == NodeState::Departed) {
      n.record.auth_token_hash.clear();
      n.outbox.clear();
    }
  }
  void operator()(const JobEnqueued& e) {
    JobRecord job;
    job.id = e.job;
    job.spec = e.spec;
    job.state = JobState::Pending;
    job.enqueue_seq = e.enqueue_seq;
    job.submitted_at = at;
    s.pending.push(e.job, e.spec.priority, e.enqueue_seq);
    s.jobs[e.job] = std::move(job);
    s.next_job_id = std::max(s.next_job_id, e.job.value + 1);
    s.next_enqueue_seq = std::max(s.next_enqueue_seq, e.enqueue_seq + 1);
  }
  void operator()(const JobRequeued& e) {
    JobRecord& job = job_at(s, e.job);
    s.pending.push(job.id, job.spec.priority, job.enqueue_seq);
  }
  void operator()(const AllocationGranted& e) {
    JobRecord& job = job_at(s, e.allocation.job_id);
    node_at(s, e.allocation.node_id);
    s.pending.erase(job.id, job.spec.priority, job.enqueue_seq);
    job.allocation = e.allocation;
    job.history.push_back(e.allocation);
    job.launch_delivered = false;
    job.affinity.reset();
    s.rr_cursor = e.allocation.node_id;
  }
  void operator()(const AllocationReleased& e) {
    JobRecord& job = job_at(s, e.job);
    job.allocation.reset();
    job.launch_delivered = false;
  }
  void operator()(const CheckpointRecorded& e) {
    JobRecord& job = job_at(s, e.manifest.job_id);
    job.checkpoints.push_back(e.manifest);
    s.counters.checkpoint_bytes_total += e.manifest.payload_bytes;
  }
  void operator()(const MigrationStarted& e) {
    JobRecord& job = job_at(s, e.job);
    job.migrating = true;
    job.displaced_from = e.from;
    job.affinity = e.affinity;
    if (e.interrupted) job.interruptions += 1;
    s.counters.migrations_total += 1;
  }
  void operator()(const MigrationCompleted& e) {
    JobRecord& job = job_at(s, e.job);
    job.migrating = false;
    job.displaced_from.reset();
    job.migrations += 1;
  }
  void operator()(const JobStateChanged& e) {
    JobRecord& job = job_at(s, e.job);
    job.state = e.to;
    if (!e.reason.empty()) job.reason = e.reason;
    if (is_terminal(e.to) || e.to == JobState::Migrating) {
      s.pending.erase(job.id, job.spec.priority, job.enqueue_seq);
    }
    if (is_terminal(e.to)) job.affinity.reset();
  }
  void operator()(const VolatilityUpdated& e) {
    NodeEntry& n = node_at(s, e.node);
    n.record.volatility_score = e.score;
    n.interruptions_today = e.interruptions_today;
  }
  void operator()(const DayRolled& e) { s.current_day = e.day; }
  void operator()(const DirectiveQueued& e) { node_at(s, e.node).outbox.push_back(e.directive); }
  void operator()(const DirectivesDelivered& e) {
    node_at(s, e.node).outbox.clear();
    for (JobId id : e.launched) job_at(s, id).launch_delivered = true;
  }
};

// JSON encoding of payloads.
Json payload_to_json(const EventPayload& payload) {
  Json j = std::visit(
      [](const auto& e) -> Json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, NodeRegistered>) {
          return {{"record", e.record}, {"rejoin", e.rejoin}};
        } else if constexpr (std::is_same_v<T, HeartbeatReceived>) {
          return {{"node", e.node}, {"seq", e.seq}, {"telemetry", e.telemetry},
                  {"latency_ms", e.latency_ms}};
        } else if constexpr (std::is_same_v<T, HeartbeatMissed>) {
          return {{"node", e.node}, {"missed", e.missed}};
        } else if constexpr (std::is_same_v<T, NodeStateChanged>) {
          return {{"node", e.node}, {"from", e.from}, {"to", e.to}, {"reason", e.reason}};
        } else if constexpr (std::is_same_v<T, JobEnqueued>) {
          return {{"job", e.job}, {"spec", e.spec}, {"enqueue_seq", e.enqueue_seq}};
        } else if constexpr (std::is_same_v<T, JobRequeued>) {
          return {{"job", e.job}};
        } else if constexpr (std::is_same_v<T, AllocationGranted>) {
          return {{"allocation", e.allocation}, {"via_affinity", e.via_affinity}};
        } else if constexpr (std::is_same_v<T, AllocationReleased>) {
          return {{"job", e.job}};
        } else if constexpr (std::is_same_v<T, CheckpointRecorded>) {
          return {{"manifest", e.manifest}};
        } else if constexpr (std::is_same_v<T, MigrationStarted>) {
          return {{"job", e.job},
                  {"from", e.from},
                  {"reason", e.reason},
                  {"affinity", e.affinity},
                  {"interrupted", e.interrupted}};
        } else if constexpr (std::is_same_v<T, MigrationCompleted>) {
          return {{"job", e.job}, {"to", e.to}, {"returned_to_origin", e.returned_to_origin}};
        } else if constexpr (std::is_same_v<T, JobStateChanged>) {
          return {{"job", e.job}, {"from", e.from}, {"to", e.to}, {"reason", e.reason}};
        } else if constexpr (std::is_same_v<T, VolatilityUpdated>) {
          return {{"node", e.node}, {"score", e.score},
                  {"interruptions_today", e.interruptions_today}};
        } else if constexpr (std::is_same_v<T, DayRolled>) {
          return {{"day", e.day}};
        } else if constexpr (std::is_same_v<T, DirectiveQueued>) {
          return {{"node", e.node}, {"directive", e.directive}};
        } else {
          return {{"node", e.node}, {"launched", e.launched}};
        }
      },
      payload);
  j["kind"] = std::string(event_name(payload));
  return j;
}

EventPayload payload_from_json(const Json& j) {
  const auto& kind = j.at("kind").get_ref<const std::string&>();
  if (kind == "NodeRegistered") {
    return NodeRegistered{j.at("record").get<NodeRecord>(), j.at("rejoin").get<bool>()};
  }
  if (kind == "HeartbeatReceived") {
    return HeartbeatReceived{j.at("node").get<NodeId>(), j.at("seq").get<std::uint64_t>(),
                             j.at("telemetry").get<std::vector<GpuTelemetry>>(),
                             j.at("latency_ms").get<std::optional<double>>()};
  }
  if (kind == "HeartbeatMissed") {
    return HeartbeatMissed{j.at("node").get<NodeId>(), j.at("missed").get<std::uint32_t>()};
  }
  if (kind == "NodeStateChanged") {
    return NodeStateChanged{j.at("node").get<NodeId>(), j.at("from").get<NodeState>(),
                            j.at("to").get<NodeState>(), j.at("reason").get<std::string>()};
  }
  if (kind == "JobEnqueued") {
    return JobEnqueued{j.at("job").get<JobId>(), j.at("spec").get<JobSpec>(),
                       j.at("enqueue_seq").get<std::uint64_t>()};
  }
  if (kind == "JobRequeued") return JobRequeued{j.at("job").get<JobId>()};
  if (kind == "AllocationGranted") {
    return AllocationGranted{j.at("allocation").get<Allocation>(), j.at("via_affinity").get<bool>()};
  }
  if (kind == "AllocationReleased") return AllocationReleased{j.at("job").get<JobId>()};
  if (kind == "CheckpointRecorded") {
    return CheckpointRecorded{j.at("manifest").get<CheckpointManifest>()};
  }
  if (kind == "MigrationStarted") {
    return MigrationStarted{j.at("job").get<JobId>(), j.at("from").get<NodeId>(),
                            j.at("reason").get<std::string>(),
                            j.at("affinity").get<std::optional<AffinityTag>>(),
                            j.value("interrupted", true)};
  }
  if (kind == "MigrationCompleted") {
    return MigrationCompleted{j.at("job").get<JobId>(), j.at("to").get<NodeId>(),
                              j.at("returned_to_origin").get<bool>()};
  }
  if (kind == "JobStateChanged") {
    return JobStateChanged{j.at("job").get<JobId>(), j.at("from").get<JobState>(),
                           j.at("to").get<JobState>(), j.at("reason").get<std::string>()};
  }
  if (kind == "VolatilityUpdated") {
    return VolatilityUpdated{j.at("node").get<NodeId>(), j.at("score").get<double>(),
                             j.at("interruptions_today").get<std::uint32_t>()};
  }
  if (kind == "DayRolled") return DayRolled{j.at("day").get<std::int64_t>()};
  if (kind == "DirectiveQueued") {
    return DirectiveQueued{j.at("node").get<NodeId>(), j.at("directive").get<Directive>()};
  }
  if (kind == "DirectivesDelivered") {
    return DirectivesDelivered{j.at("node").get<NodeId>(),
                               j.at("launched").get<std::vector<JobId>>()};
  }
  throw Error(ErrorCode::CorruptEntry, "unknown event kind '" + kind + "'");
}

}  // namespace

std::string_view event_name(const EventPayload& payload) {
  static constexpr std::string_view kNames[] = {
      "NodeRegistered",     "HeartbeatReceived", "HeartbeatMissed",    "NodeStateChanged",
      "JobEnqueued",        "JobRequeued",       "AllocationGranted",  "AllocationReleased",
      "CheckpointRecorded", "MigrationStarted",  "MigrationCompleted", "JobStateChanged",
      "VolatilityUpdated",  "DayRolled",         "DirectiveQueued",    "DirectivesDelivered"};
  static_assert(std::size(kNames) == std::variant_size_v<EventPayload>);
  return kNames[payload.index()];
}

void apply(ClusterState& state, const EventLogEntry& entry) {
  if (entry.seq != state.last_event_seq + 1) {
    throw Error(ErrorCode::GapInLog, "expected seq " + std::to_string(state.last_event_seq + 1) +
                                         ", got " + std::to_string(entry.seq));
  }
  std::visit(Applier{state, entry.at}, entry.payload);
  state.last_event_seq = entry.seq;
}

ClusterState replay_log(std::span<const EventLogEntry> entries) {
  ClusterState state;
  for (const auto& entry : entries) apply(state, entry);
  return state;
}

Json to_json(const EventLogEntry& entry) {
  return Json{{"seq", entry.seq},
              {"at", encode_time(entry.at)},
              {"payload", payload_to_json(entry.payload)}};
}

EventLogEntry event_from_json(const Json& j) {
  try {
    EventLogEntry entry;
    entry.seq = j.at("seq").get<std::uint64_t>();
    entry.at = decode_time(j.at("at"));
    entry.payload = payload_from_json(j.at("payload"));
    return entry;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptEntry) throw;
    throw Error(ErrorCode::CorruptEntry, e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::CorruptEntry, e.what());
  }
}

}  // namespace gpunion::coord
