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

#include "gpunion/core/validation.hpp"

#include <algorithm>

namespace gpunion {

bool is_sha256_hex(std::string_view digest) {
  return digest.size() == 64 && std::all_of(digest.begin(), digest.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

std::optional<Rejection> validate_job_spec(const JobSpec& spec, const DigestAllowList& allow_list) {
  if (!is_sha256_hex(spec.image_digest)) {
    return Rejection{ErrorCode::MalformedDigest, "image_digest must be 64 lowercase hex chars"};
  }
  if (spec.gpu_memory_mib_required <= 0) {
    return Rejection{ErrorCode::NonPositiveResource, "gpu_memory_mib_required must be > 0"};
  }
  if (spec.checkpoint_interval <= Duration::zero()) {
    return Rejection{ErrorCode::NonPositiveResource, "checkpoint_interval_s must be > 0"};
  }
  if (spec.estimated_duration <= Duration::zero()) {
    return Rejection{ErrorCode::NonPositiveResource, "estimated_duration_s must be > 0"};
  }
  if (spec.affinity_window && *spec.affinity_window < Duration::zero()) {
    return Rejection{ErrorCode::NonPositiveResource, "affinity_window_s must be >= 0"};
  }
  if (spec.min_compute_capability.major < 1 || spec.min_compute_capability.minor < 0) {
    return Rejection{ErrorCode::ValidationFailed, "min_compute_capability must be >= (1,0)"};
  }
  if (spec.image_ref.empty()) {
    return Rejection{ErrorCode::ValidationFailed, "image_ref must be nonempty"};
  }
  if (storage_path(spec.storage_target).empty()) {
    return Rejection{ErrorCode::ValidationFailed, "storage target path must be nonempty"};
  }
  if (spec.mode == JobMode::Interactive && !spec.entrypoint.empty()) {
    return Rejection{ErrorCode::ValidationFailed, "entrypoint applies to Batch jobs only"};
  }
  if (!allow_list.contains(spec.image_digest)) {
    return Rejection{ErrorCode::DigestNotTrusted, "image digest is not on the allow-list"};
  }
  return std::nullopt;
}

bool validate_gpu(const GpuDescriptor& gpu) {
  return gpu.memory_mib > 0 && gpu.compute_capability.major >= 1 &&
         gpu.compute_capability.minor >= 0;
}

}  // namespace gpunion
