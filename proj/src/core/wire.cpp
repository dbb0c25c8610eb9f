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

#include "gpunion/core/wire.hpp"

#include <array>
#include <string>

#include "gpunion/core/error.hpp"

namespace gpunion {
namespace {

template <typename E, std::size_t N>
Json encode_kind(E value, const std::array<E, N>& all) {
  for (E e : all) {
    if (e == value) return Json{{"kind", std::string(to_string(e))}};
  }
  throw Error(ErrorCode::ValidationFailed, "unencodable enum value");
}

template <typename E, std::size_t N>
E decode_kind(const Json& j, const std::array<E, N>& all) {
  const auto& kind = j.at("kind").get_ref<const std::string&>();
  for (E e : all) {
    if (to_string(e) == kind) return e;
  }
  throw Error(ErrorCode::ValidationFailed, "unknown kind '" + kind + "'");
}

constexpr std::array kNodeStates{NodeState::Registering, NodeState::Active,
                                 NodeState::Paused,      NodeState::Draining,
                                 NodeState::Unavailable, NodeState::Departed};
constexpr std::array kJobStates{JobState::Pending,   JobState::Scheduled, JobState::Running,
                                JobState::Checkpointing, JobState::Migrating,
                                JobState::Completed, JobState::Failed,    JobState::Lost};
constexpr std::array kJobModes{JobMode::Interactive, JobMode::Batch};
constexpr std::array kCheckpointModes{CheckpointMode::Full, CheckpointMode::Incremental};
constexpr std::array kInterruptionKinds{InterruptionKind::ScheduledDeparture,
                                        InterruptionKind::EmergencyDeparture,
                                        InterruptionKind::TemporaryUnavailability};
constexpr std::array kWorkloadPhases{WorkloadPhase::Starting, WorkloadPhase::Running,
                                     WorkloadPhase::Checkpointing, WorkloadPhase::Terminating,
                                     WorkloadPhase::Exited};
constexpr std::array kDepartureKinds{DepartureKind::Graceful, DepartureKind::Emergency};

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

}  // namespace

void to_json(Json& j, const NodeId& v) { j = v.to_hex(); }
void from_json(const Json& j, NodeId& v) { v = NodeId::from_hex(j.get<std::string>()); }
void to_json(Json& j, const JobId& v) { j = v.value; }
void from_json(const Json& j, JobId& v) { v.value = j.get<std::uint64_t>(); }

void to_json(Json& j, const ComputeCapability& v) {
  j = Json{{"major", v.major}, {"minor", v.minor}};
}
void from_json(const Json& j, ComputeCapability& v) {
  v.major = j.at("major").get<int>();
  v.minor = j.at("minor").get<int>();
}

void to_json(Json& j, const GpuDescriptor& v) {
  j = Json{{"index", v.index},
           {"model", v.model},
           {"memory_mib", v.memory_mib},
           {"compute_capability", v.compute_capability}};
}
void from_json(const Json& j, GpuDescriptor& v) {
  v.index = j.at("index").get<std::uint32_t>();
  v.model = get_or<std::string>(j, "model", "");
  v.memory_mib = j.at("memory_mib").get<std::int64_t>();
  v.compute_capability = j.at("compute_capability").get<ComputeCapability>();
}

void to_json(Json& j, const NodeState& v) { j = encode_kind(v, kNodeStates); }
void from_json(const Json& j, NodeState& v) { v = decode_kind(j, kNodeStates); }

void to_json(Json& j, const NodeRecord& v) {
  j = Json{{"id", v.id},
           {"gpus", v.gpus},
           {"state", v.state},
           {"latency_ms", v.latency_ms},
           {"volatility_score", v.volatility_score},
           {"last_heartbeat_seq", v.last_heartbeat_seq},
           {"missed_heartbeats", v.missed_heartbeats},
           {"auth_token_hash", v.auth_token_hash}};
}
void from_json(const Json& j, NodeRecord& v) {
  v.id = j.at("id").get<NodeId>();
  v.gpus = j.at("gpus").get<std::vector<GpuDescriptor>>();
  v.state = j.at("state").get<NodeState>();
  v.latency_ms = j.at("latency_ms").get<double>();
  v.volatility_score = j.at("volatility_score").get<double>();
  v.last_heartbeat_seq = j.at("last_heartbeat_seq").get<std::uint64_t>();
  v.missed_heartbeats = j.at("missed_heartbeats").get<std::uint32_t>();
  v.auth_token_hash = j.at("auth_token_hash").get<std::string>();
}

void to_json(Json& j, const GpuTelemetry& v) {
  j = Json{{"node", v.node},           {"gpu_index", v.gpu_index}, {"util_pct", v.util_pct},
           {"mem_used_mib", v.mem_used_mib}, {"temp_c", v.temp_c}, {"power_w", v.power_w},
           {"sampled_at", encode_time(v.sampled_at)}};
}
void from_json(const Json& j, GpuTelemetry& v) {
  v.node = j.at("node").get<NodeId>();
  v.gpu_index = j.at("gpu_index").get<std::uint32_t>();
  v.util_pct = j.at("util_pct").get<double>();
  v.mem_used_mib = j.at("mem_used_mib").get<std::int64_t>();
  v.temp_c = j.at("temp_c").get<std::int64_t>();
  v.power_w = j.at("power_w").get<double>();
  v.sampled_at = decode_time(j.at("sampled_at"));
}

void to_json(Json& j, const JobMode& v) { j = encode_kind(v, kJobModes); }
void from_json(const Json& j, JobMode& v) { v = decode_kind(j, kJobModes); }
void to_json(Json& j, const CheckpointMode& v) { j = encode_kind(v, kCheckpointModes); }
void from_json(const Json& j, CheckpointMode& v) { v = decode_kind(j, kCheckpointModes); }

void to_json(Json& j, const StorageTarget& v) {
  std::visit(
      [&j](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, SharedFsTarget>) {
          j = Json{{"kind", "SharedFs"}, {"path", t.path}};
        } else if constexpr (std::is_same_v<T, NodeTarget>) {
          j = Json{{"kind", "Node"}, {"node", t.node}, {"path", t.path}};
        } else {
          j = Json{{"kind", "Local"}, {"path", t.path}};
        }
      },
      v);
}
void from_json(const Json& j, StorageTarget& v) {
  const auto& kind = j.at("kind").get_ref<const std::string&>();
  auto path = j.at("path").get<std::string>();
  if (kind == "SharedFs") {
    v = SharedFsTarget{path};
  } else if (kind == "Node") {
    v = NodeTarget{j.at("node").get<NodeId>(), path};
  } else if (kind == "Local") {
    v = LocalTarget{path};
  } else {
    throw Error(ErrorCode::ValidationFailed, "unknown storage target kind '" + kind + "'");
  }
}

void to_json(Json& j, const JobSpec& v) {
  j = Json{{"image_ref", v.image_ref},
           {"image_digest", v.image_digest},
           {"mode", v.mode},
           {"entrypoint", v.entrypoint},
           {"gpu_memory_mib_required", v.gpu_memory_mib_required},
           {"min_compute_capability", v.min_compute_capability},
           {"priority", v.priority},
           {"checkpoint_interval_s", encode_seconds(v.checkpoint_interval)},
           {"checkpoint_mode", v.checkpoint_mode},
           {"storage_target", v.storage_target},
           {"estimated_duration_s", encode_seconds(v.estimated_duration)},
           {"affinity_window_s",
            v.affinity_window ? encode_seconds(*v.affinity_window) : Json(nullptr)}};
}
void from_json(const Json& j, JobSpec& v) {
  // Only the image and the memory requirement are mandatory; the rest
  // default as in JobSpec.
  const JobSpec d;
  v.image_ref = j.at("image_ref").get<std::string>();
  v.image_digest = j.at("image_digest").get<std::string>();
  v.mode = get_or<JobMode>(j, "mode", d.mode);
  v.entrypoint = get_or<std::vector<std::string>>(j, "entrypoint", {});
  v.gpu_memory_mib_required = j.at("gpu_memory_mib_required").get<std::int64_t>();
  v.min_compute_capability = get_or<ComputeCapability>(j, "min_compute_capability", d.min_compute_capability);
  v.priority = get_or<std::int64_t>(j, "priority", 0);
  v.checkpoint_interval = j.contains("checkpoint_interval_s") ? decode_seconds(j["checkpoint_interval_s"])
                                                              : d.checkpoint_interval;
  v.checkpoint_mode = get_or<CheckpointMode>(j, "checkpoint_mode", d.checkpoint_mode);
  v.storage_target = get_or<StorageTarget>(j, "storage_target", d.storage_target);
  v.estimated_duration = j.contains("estimated_duration_s") ? decode_seconds(j["estimated_duration_s"])
                                                            : d.estimated_duration;
  auto it = j.find("affinity_window_s");
  if (it != j.end() && !it->is_null()) {
    v.affinity_window = decode_seconds(*it);
  } else {
    v.affinity_window.reset();
  }
}

void to_json(Json& j, const JobState& v) { j = encode_kind(v, kJobStates); }
void from_json(const Json& j, JobState& v) { v = decode_kind(j, kJobStates); }

void to_json(Json& j, const Allocation& v) {
  j = Json{{"job_id", v.job_id},
           {"node_id", v.node_id},
           {"gpu_indices", v.gpu_indices},
           {"granted_at", encode_time(v.granted_at)}};
}
void from_json(const Json& j, Allocation& v) {
  v.job_id = j.at("job_id").get<JobId>();
  v.node_id = j.at("node_id").get<NodeId>();
  v.gpu_indices = j.at("gpu_indices").get<std::vector<std::uint32_t>>();
  v.granted_at = decode_time(j.at("granted_at"));
}

void to_json(Json& j, const CheckpointManifest& v) {
  j = Json{{"job_id", v.job_id},
           {"seq", v.seq},
           {"parent_seq", v.parent_seq},
           {"created_at", encode_time(v.created_at)},
           {"payload_bytes", v.payload_bytes},
           {"content_hash", v.content_hash},
           {"target", v.target}};
}
void from_json(const Json& j, CheckpointManifest& v) {
  v.job_id = j.at("job_id").get<JobId>();
  v.seq = j.at("seq").get<std::uint64_t>();
  v.parent_seq = j.at("parent_seq").get<std::optional<std::uint64_t>>();
  v.created_at = decode_time(j.at("created_at"));
  v.payload_bytes = j.at("payload_bytes").get<std::uint64_t>();
  v.content_hash = j.at("content_hash").get<std::string>();
  v.target = j.at("target").get<StorageTarget>();
}

void to_json(Json& j, const InterruptionKind& v) { j = encode_kind(v, kInterruptionKinds); }
void from_json(const Json& j, InterruptionKind& v) { v = decode_kind(j, kInterruptionKinds); }

void to_json(Json& j, const InterruptionEvent& v) {
  Json kind = v.kind;
  if (v.kind == InterruptionKind::TemporaryUnavailability) {
    kind["duration_s"] = encode_seconds(v.duration);
  }
  j = Json{{"kind", kind}, {"node", v.node}, {"at", encode_time(v.at)}};
}
void from_json(const Json& j, InterruptionEvent& v) {
  const auto& kind = j.at("kind");
  v.kind = kind.get<InterruptionKind>();
  v.duration = v.kind == InterruptionKind::TemporaryUnavailability
                   ? decode_seconds(kind.at("duration_s"))
                   : Duration::zero();
  v.node = j.at("node").get<NodeId>();
  v.at = decode_time(j.at("at"));
}

void to_json(Json& j, const AffinityTag& v) {
  j = Json{{"node", v.node}, {"expires_at", encode_time(v.expires_at)}};
}
void from_json(const Json& j, AffinityTag& v) {
  v.node = j.at("node").get<NodeId>();
  v.expires_at = decode_time(j.at("expires_at"));
}

void to_json(Json& j, const JobRecord& v) {
  j = Json{{"id", v.id},
           {"spec", v.spec},
           {"state", v.state},
           {"enqueue_seq", v.enqueue_seq},
           {"submitted_at", encode_time(v.submitted_at)},
           {"allocation", v.allocation},
           {"history", v.history},
           {"affinity", v.affinity},
           {"checkpoints", v.checkpoints},
           {"launch_delivered", v.launch_delivered},
           {"migrating", v.migrating},
           {"displaced_from", v.displaced_from},
           {"interruptions", v.interruptions},
           {"migrations", v.migrations},
           {"reason", v.reason}};
}
void from_json(const Json& j, JobRecord& v) {
  v.id = j.at("id").get<JobId>();
  v.spec = j.at("spec").get<JobSpec>();
  v.state = j.at("state").get<JobState>();
  v.enqueue_seq = j.at("enqueue_seq").get<std::uint64_t>();
  v.submitted_at = decode_time(j.at("submitted_at"));
  v.allocation = j.at("allocation").get<std::optional<Allocation>>();
  v.history = j.at("history").get<std::vector<Allocation>>();
  v.affinity = j.at("affinity").get<std::optional<AffinityTag>>();
  v.checkpoints = j.at("checkpoints").get<std::vector<CheckpointManifest>>();
  v.launch_delivered = j.at("launch_delivered").get<bool>();
  v.migrating = j.at("migrating").get<bool>();
  v.displaced_from = j.at("displaced_from").get<std::optional<NodeId>>();
  v.interruptions = j.at("interruptions").get<std::uint32_t>();
  v.migrations = j.at("migrations").get<std::uint32_t>();
  v.reason = j.at("reason").get<std::string>();
}

void to_json(Json& j, const RegistrationRequest& v) {
  j = Json{{"gpus", v.gpus}, {"latency_ms", v.latency_ms}, {"prior_id", v.prior_id}};
}
void from_json(const Json& j, RegistrationRequest& v) {
  v.gpus = j.at("gpus").get<std::vector<GpuDescriptor>>();
  v.latency_ms = get_or<double>(j, "latency_ms", 0.0);
  v.prior_id = get_or<std::optional<NodeId>>(j, "prior_id", std::nullopt);
}

void to_json(Json& j, const RegistrationResponse& v) {
  j = Json{{"node_id", v.node_id}, {"token", v.token}};
}
void from_json(const Json& j, RegistrationResponse& v) {
  v.node_id = j.at("node_id").get<NodeId>();
  v.token = j.at("token").get<std::string>();
}

void to_json(Json& j, const WorkloadPhase& v) { j = encode_kind(v, kWorkloadPhases); }
void from_json(const Json& j, WorkloadPhase& v) { v = decode_kind(j, kWorkloadPhases); }

void to_json(Json& j, const WorkloadReport& v) {
  Json phase = v.phase;
  if (v.phase == WorkloadPhase::Exited) phase["code"] = v.exit_code;
  j = Json{{"job_id", v.job_id},
           {"phase", phase},
           {"error", v.error},
           {"new_manifests", v.new_manifests},
           {"attempt", v.attempt}};
}
void from_json(const Json& j, WorkloadReport& v) {
  const auto& phase = j.at("phase");
  v.job_id = j.at("job_id").get<JobId>();
  v.phase = phase.get<WorkloadPhase>();
  v.exit_code = v.phase == WorkloadPhase::Exited ? phase.at("code").get<int>() : 0;
  v.error = get_or<std::string>(j, "error", "");
  v.new_manifests = get_or<std::vector<CheckpointManifest>>(j, "new_manifests", {});
  v.attempt = get_or<std::uint32_t>(j, "attempt", 0);
}

void to_json(Json& j, const HeartbeatRequest& v) {
  j = Json{{"node_id", v.node_id},
           {"seq", v.seq},
           {"telemetry", v.telemetry},
           {"workloads", v.workloads},
           {"pause_request", v.pause_request},
           {"draining", v.draining},
           {"latency_ms", v.latency_ms}};
}
void from_json(const Json& j, HeartbeatRequest& v) {
  v.node_id = j.at("node_id").get<NodeId>();
  v.seq = j.at("seq").get<std::uint64_t>();
  v.telemetry = get_or<std::vector<GpuTelemetry>>(j, "telemetry", {});
  v.workloads = get_or<std::vector<WorkloadReport>>(j, "workloads", {});
  v.pause_request = get_or<std::optional<bool>>(j, "pause_request", std::nullopt);
  v.draining = get_or<bool>(j, "draining", false);
  v.latency_ms = get_or<std::optional<double>>(j, "latency_ms", std::nullopt);
}

void to_json(Json& j, const Directive& v) {
  std::visit(
      [&j](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, LaunchDirective>) {
          j = Json{{"kind", "launch"},
                   {"job_id", d.job_id},
                   {"spec", d.spec},
                   {"gpu_indices", d.gpu_indices},
                   {"restore", d.restore},
                   {"attempt", d.attempt}};
        } else if constexpr (std::is_same_v<T, CheckpointDirective>) {
          j = Json{{"kind", "checkpoint"}, {"job_id", d.job_id}};
        } else if constexpr (std::is_same_v<T, TerminateDirective>) {
          j = Json{{"kind", "terminate"},
                   {"job_id", d.job_id},
                   {"grace_s", encode_seconds(d.grace)},
                   {"attempt", d.attempt}};
        } else if constexpr (std::is_same_v<T, DrainDirective>) {
          j = Json{{"kind", "drain"}, {"grace_s", encode_seconds(d.grace)}};
        } else {
          j = Json{{"kind", "kill"}, {"grace_s", encode_seconds(d.grace)}};
        }
      },
      v);
}
void from_json(const Json& j, Directive& v) {
  const auto& kind = j.at("kind").get_ref<const std::string&>();
  if (kind == "launch") {
    v = LaunchDirective{j.at("job_id").get<JobId>(), j.at("spec").get<JobSpec>(),
                        j.at("gpu_indices").get<std::vector<std::uint32_t>>(),
                        j.at("restore").get<bool>(), get_or<std::uint32_t>(j, "attempt", 0)};
  } else if (kind == "checkpoint") {
    v = CheckpointDirective{j.at("job_id").get<JobId>()};
  } else if (kind == "terminate") {
    v = TerminateDirective{j.at("job_id").get<JobId>(), decode_seconds(j.at("grace_s")),
                           get_or<std::uint32_t>(j, "attempt", 0)};
  } else if (kind == "drain") {
    v = DrainDirective{decode_seconds(j.at("grace_s"))};
  } else if (kind == "kill") {
    v = KillDirective{decode_seconds(j.at("grace_s"))};
  } else {
    throw Error(ErrorCode::ValidationFailed, "unknown directive kind '" + kind + "'");
  }
}

void to_json(Json& j, const HeartbeatAck& v) {
  j = Json{{"ack", v.ack}, {"node_state", v.node_state}, {"directives", v.directives}};
}
void from_json(const Json& j, HeartbeatAck& v) {
  v.ack = j.at("ack").get<bool>();
  v.node_state = j.at("node_state").get<NodeState>();
  v.directives = j.at("directives").get<std::vector<Directive>>();
}

void to_json(Json& j, const DepartureKind& v) { j = encode_kind(v, kDepartureKinds); }
void from_json(const Json& j, DepartureKind& v) { v = decode_kind(j, kDepartureKinds); }

void to_json(Json& j, const DepartureNotice& v) {
  j = Json{{"node_id", v.node_id}, {"kind", v.kind}, {"workloads", v.workloads}};
}
void from_json(const Json& j, DepartureNotice& v) {
  v.node_id = j.at("node_id").get<NodeId>();
  v.kind = j.at("kind").get<DepartureKind>();
  v.workloads = get_or<std::vector<WorkloadReport>>(j, "workloads", {});
}

}  // namespace gpunion
