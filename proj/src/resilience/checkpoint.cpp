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

#include "gpunion/resilience/checkpoint.hpp"

#include <cmath>
#include <map>

#include "gpunion/core/digest.hpp"
#include "gpunion/core/error.hpp"
#include "gpunion/core/wire.hpp"

namespace gpunion::resilience {

void validate(const CheckpointPolicy& policy) {
  if (policy.interval.count() <= 0) {
    throw Error(ErrorCode::InvalidConfig, "checkpoint interval must be positive");
  }
  if (policy.full_every_n < 1) throw Error(ErrorCode::InvalidConfig, "full_every_n must be >= 1");
}

CheckpointPolicy policy_for(const JobSpec& spec) {
  return CheckpointPolicy{spec.checkpoint_interval, spec.checkpoint_mode, kDefaultFullEveryN};
}

void validate(const WorkloadStateModel& model) {
  if (!(model.dirty_fraction > 0.0 && model.dirty_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "dirty_fraction must be in (0, 1]");
  }
  if (model.duration.count() <= 0) {
    throw Error(ErrorCode::InvalidConfig, "workload duration must be positive");
  }
}

std::uint64_t payload_bytes(bool full, const WorkloadStateModel& model) {
  if (full) return model.total_state_bytes;
  auto dirty = static_cast<std::uint64_t>(
      std::ceil(model.dirty_fraction * static_cast<double>(model.total_state_bytes)));
  return dirty + kManifestOverheadBytes;
}

bool next_is_full(std::span<const CheckpointManifest> lineage, const CheckpointPolicy& policy) {
  if (policy.mode == CheckpointMode::Full || lineage.empty()) return true;
  std::uint32_t since_full = 0;
  for (auto it = lineage.rbegin(); it != lineage.rend() && !it->is_full(); ++it) ++since_full;
  return since_full + 1 >= policy.full_every_n;
}

std::string encode_blob(const CheckpointBlob& blob) {
  Json j{{"job_id", blob.job_id},
         {"seq", blob.seq},
         {"parent_seq", blob.parent_seq},
         {"parent_hash", blob.parent_hash},
         {"progress_ms", blob.progress.count()}};
  return j.dump();
}

CheckpointBlob decode_blob(const std::string& bytes) {
  Json j = Json::parse(bytes, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::HashMismatch, "checkpoint payload is not decodable");
  }
  try {
    CheckpointBlob blob;
    blob.job_id = j.at("job_id").get<JobId>();
    blob.seq = j.at("seq").get<std::uint64_t>();
    blob.parent_seq = j.at("parent_seq").get<std::optional<std::uint64_t>>();
    blob.parent_hash = j.at("parent_hash").get<std::string>();
    blob.progress = Duration{j.at("progress_ms").get<std::int64_t>()};
    return blob;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::HashMismatch, e.what());
  }
}

PreparedCheckpoint prepare_checkpoint(JobId job, std::span<const CheckpointManifest> lineage,
                                      std::uint64_t seq, const CheckpointPolicy& policy,
                                      const WorkloadStateModel& model, Duration progress,
                                      Timestamp now, const StorageTarget& target,
                                      std::optional<bool> full_override) {
  bool full = lineage.empty() || full_override.value_or(next_is_full(lineage, policy));
  CheckpointBlob blob{job, seq, std::nullopt, "", progress};
  if (!full) {
    blob.parent_seq = lineage.back().seq;
    blob.parent_hash = lineage.back().content_hash;
  }
  PreparedCheckpoint out;
  out.blob = encode_blob(blob);
  out.manifest.job_id = job;
  out.manifest.seq = seq;
  out.manifest.parent_seq = blob.parent_seq;
  out.manifest.created_at = now;
  out.manifest.payload_bytes = payload_bytes(full, model);
  out.manifest.content_hash = sha256_hex(out.blob);
  out.manifest.target = target;
  return out;
}

std::vector<CheckpointManifest> restore_chain(std::span<const CheckpointManifest> manifests,
                                              std::uint64_t tail_seq) {
  std::map<std::uint64_t, const CheckpointManifest*> by_seq;
  for (const auto& m : manifests) by_seq[m.seq] = &m;
  std::vector<CheckpointManifest> chain;
  auto it = by_seq.find(tail_seq);
  if (it == by_seq.end()) {
    throw Error(ErrorCode::BrokenChain, "no manifest with seq " + std::to_string(tail_seq));
  }
  const CheckpointManifest* cur = it->second;
  while (true) {
    chain.push_back(*cur);
    if (cur->is_full()) break;
    std::uint64_t parent = *cur->parent_seq;
    if (parent >= cur->seq) {
      throw Error(ErrorCode::BrokenChain, "parent_seq does not precede seq " + std::to_string(cur->seq));
    }
    auto p = by_seq.find(parent);
    if (p == by_seq.end()) {
      throw Error(ErrorCode::BrokenChain, "missing parent manifest " + std::to_string(parent));
    }
    cur = p->second;
  }
  return {chain.rbegin(), chain.rend()};
}

Duration lost_work(Duration progress_at_stop, Duration restored_progress) {
  return progress_at_stop > restored_progress ? progress_at_stop - restored_progress : Duration{0};
}

}  // namespace gpunion::resilience
