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

#include "json.hpp"

#include "gpunion/core/protocol.hpp"
#include "gpunion/core/types.hpp"

// Canonical JSON encoding: snake_case fields, enums as {"kind": ...} objects,
// timestamps as integer milliseconds, `_s` fields as seconds.
namespace nlohmann {
template <typename T>
struct adl_serializer<std::optional<T>> {
  static void to_json(json& j, const std::optional<T>& v) {
    if (v) {
      j = *v;
    } else {
      j = nullptr;
    }
  }
  static void from_json(const json& j, std::optional<T>& v) {
    if (j.is_null()) {
      v.reset();
    } else {
      v = j.get<T>();
    }
  }
};
}  // namespace nlohmann

namespace gpunion {

using Json = nlohmann::json;

void to_json(Json& j, const NodeId& v);
void from_json(const Json& j, NodeId& v);
void to_json(Json& j, const JobId& v);
void from_json(const Json& j, JobId& v);

void to_json(Json& j, const ComputeCapability& v);
void from_json(const Json& j, ComputeCapability& v);
void to_json(Json& j, const GpuDescriptor& v);
void from_json(const Json& j, GpuDescriptor& v);
void to_json(Json& j, const NodeState& v);
void from_json(const Json& j, NodeState& v);
void to_json(Json& j, const NodeRecord& v);
void from_json(const Json& j, NodeRecord& v);
void to_json(Json& j, const GpuTelemetry& v);
void from_json(const Json& j, GpuTelemetry& v);
void to_json(Json& j, const JobMode& v);
void from_json(const Json& j, JobMode& v);
void to_json(Json& j, const CheckpointMode& v);
void from_json(const Json& j, CheckpointMode& v);
void to_json(Json& j, const StorageTarget& v);
void from_json(const Json& j, StorageTarget& v);
void to_json(Json& j, const JobSpec& v);
void from_json(const Json& j, JobSpec& v);
void to_json(Json& j, const JobState& v);
void from_json(const Json& j, JobState& v);
void to_json(Json& j, const Allocation& v);
void from_json(const Json& j, Allocation& v);
void to_json(Json& j, const CheckpointManifest& v);
void from_json(const Json& j, CheckpointManifest& v);
void to_json(Json& j, const InterruptionKind& v);
void from_json(const Json& j, InterruptionKind& v);
void to_json(Json& j, const InterruptionEvent& v);
void from_json(const Json& j, InterruptionEvent& v);
void to_json(Json& j, const AffinityTag& v);
void from_json(const Json& j, AffinityTag& v);
void to_json(Json& j, const JobRecord& v);
void from_json(const Json& j, JobRecord& v);

void to_json(Json& j, const RegistrationRequest& v);
void from_json(const Json& j, RegistrationRequest& v);
void to_json(Json& j, const RegistrationResponse& v);
void from_json(const Json& j, RegistrationResponse& v);
void to_json(Json& j, const WorkloadPhase& v);
void from_json(const Json& j, WorkloadPhase& v);
void to_json(Json& j, const WorkloadReport& v);
void from_json(const Json& j, WorkloadReport& v);
void to_json(Json& j, const HeartbeatRequest& v);
void from_json(const Json& j, HeartbeatRequest& v);
void to_json(Json& j, const Directive& v);
void from_json(const Json& j, Directive& v);
void to_json(Json& j, const HeartbeatAck& v);
void from_json(const Json& j, HeartbeatAck& v);
void to_json(Json& j, const DepartureKind& v);
void from_json(const Json& j, DepartureKind& v);
void to_json(Json& j, const DepartureNotice& v);
void from_json(const Json& j, DepartureNotice& v);

// Timestamps and durations are not ADL-visible through std::chrono, so
// encoders go through these helpers.
inline Json encode_time(Timestamp t) { return ms_since_epoch(t); }
inline Timestamp decode_time(const Json& j) { return at_ms(j.get<std::int64_t>()); }
inline Json encode_seconds(Duration d) { return to_seconds(d); }
inline Duration decode_seconds(const Json& j) { return from_seconds(j.get<double>()); }

}  // namespace gpunion
