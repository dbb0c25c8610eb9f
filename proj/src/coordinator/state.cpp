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

#include "gpunion/coordinator/state.hpp"

namespace gpunion::coord {

void PendingQueue::push(JobId job, std::int64_t priority, std::uint64_t enqueue_seq) {
  keys_.insert(Key{-priority, enqueue_seq, job});
}

bool PendingQueue::erase(JobId job, std::int64_t priority, std::uint64_t enqueue_seq) {
  return keys_.erase(Key{-priority, enqueue_seq, job}) > 0;
}

std::optional<JobId> PendingQueue::pop() {
  if (keys_.empty()) return std::nullopt;
  JobId job = keys_.begin()->job;
  keys_.erase(keys_.begin());
  return job;
}

std::vector<JobId> PendingQueue::ordered() const {
  std::vector<JobId> out;
  out.reserve(keys_.size());
  for (const Key& k : keys_) out.push_back(k.job);
  return out;
}

std::set<std::uint32_t> ClusterState::busy_gpus(const NodeId& node) const {
  std::set<std::uint32_t> busy;
  for (const auto& [id, job] : jobs) {
    if (job.allocation && job.allocation->node_id == node) {
      busy.insert(job.allocation->gpu_indices.begin(), job.allocation->gpu_indices.end());
    }
  }
  return busy;
}

}  // namespace gpunion::coord
