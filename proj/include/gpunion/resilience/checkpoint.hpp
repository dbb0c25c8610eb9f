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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpunion/core/types.hpp"

namespace gpunion::resilience {

inline constexpr std::uint64_t kManifestOverheadBytes = 4096;
inline constexpr std::uint32_t kDefaultFullEveryN = 10;

struct CheckpointPolicy {
  Duration interval{std::chrono::minutes(10)};
  CheckpointMode mode = CheckpointMode::Incremental;
  std::uint32_t full_every_n = kDefaultFullEveryN;
};

// Throws Error(InvalidConfig).
void validate(const CheckpointPolicy& policy);
CheckpointPolicy policy_for(const JobSpec& spec);

// Simulated workload: how much state it carries and how much of it changes
// per checkpoint interval.
struct WorkloadStateModel {
  std::uint64_t total_state_bytes = 0;
  double dirty_fraction = 0.10;
  Duration duration{std::chrono::hours(1)};
};

void validate(const WorkloadStateModel& model);  // throws Error(InvalidConfig)

std::uint64_t payload_bytes(bool full, const WorkloadStateModel& model);

// Whether the next checkpoint on top of `lineage` must be Full. In
// Incremental mode every full_every_n-th checkpoint is Full again.
bool next_is_full(std::span<const CheckpointManifest> lineage, const CheckpointPolicy& policy);

// The opaque blob stored next to a manifest. Its SHA-256 is the manifest's
// content_hash, and it embeds the parent's content_hash, so verifying blobs
// from the Full forward verifies the chain.
struct CheckpointBlob {
  JobId job_id;
  std::uint64_t seq = 0;
  std::optional<std::uint64_t> parent_seq;
  std::string parent_hash;
  Duration progress{0};  // progress marker at capture start
  bool operator==(const CheckpointBlob&) const = default;
};

std::string encode_blob(const CheckpointBlob& blob);
CheckpointBlob decode_blob(const std::string& bytes);  // throws Error(HashMismatch)

struct PreparedCheckpoint {
  CheckpointManifest manifest;
  std::string blob;
};

// Builds checkpoint `seq` on top of `lineage`, the verified chain (Full
// first) the live state descends from. `full` overrides the policy's choice;
// an empty lineage always yields a Full. The payload is durable only once
// stored.
PreparedCheckpoint prepare_checkpoint(JobId job, std::span<const CheckpointManifest> lineage,
                                      std::uint64_t seq, const CheckpointPolicy& policy,
                                      const WorkloadStateModel& model, Duration progress,
                                      Timestamp now, const StorageTarget& target,
                                      std::optional<bool> full = std::nullopt);

// Manifests needed to restore `tail`: the nearest Full at or before it and
// every delta after it, oldest first. Throws Error(BrokenChain).
std::vector<CheckpointManifest> restore_chain(std::span<const CheckpointManifest> manifests,
                                              std::uint64_t tail_seq);

// Lost work for a workload stopped at `progress_at_stop` and restored to
// `restored_progress`.
Duration lost_work(Duration progress_at_stop, Duration restored_progress);

}  // namespace gpunion::resilience
