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

#include <map>
#include <optional>
#include <vector>

#include "gpunion/coordinator/config.hpp"
#include "gpunion/coordinator/state.hpp"

namespace gpunion::coord {

// An Active node that can host a job right now, with the GPU it would get.
struct Candidate {
  NodeId node;
  std::uint32_t gpu_index = 0;
  double volatility = 0.0;
  double latency_ms = 0.0;
};

struct Placement {
  NodeId node;
  std::vector<std::uint32_t> gpu_indices;
  bool via_affinity = false;
};

// Active nodes with a free GPU whose memory and compute capability satisfy
// the job. Each node contributes its lowest free qualifying GPU. Sorted by
// NodeId.
std::vector<Candidate> eligible_candidates(const JobSpec& spec, const ClusterState& state);

// s = w_v * (1 - vol_norm) + w_l * (1 - lat_norm), min-max normalized over
// the candidate set; a zero range normalizes to 0.
std::vector<double> score_candidates(const std::vector<Candidate>& candidates,
                                     const SchedulerConfig& config);

// Index of the first node after `cursor` in NodeId order among `tied`
// (sorted by NodeId), wrapping to the smallest.
std::size_t round_robin_pick(const std::vector<NodeId>& tied, const std::optional<NodeId>& cursor);

class SchedulePolicy {
 public:
  virtual ~SchedulePolicy() = default;
  virtual std::optional<Placement> place(const JobRecord& job, const ClusterState& state,
                                         const SchedulerConfig& config, Timestamp now) const = 0;
};

// Default policy: affinity first, then best score, ties by round-robin cursor.
class ScoredRoundRobinPolicy final : public SchedulePolicy {
 public:
  std::optional<Placement> place(const JobRecord& job, const ClusterState& state,
                                 const SchedulerConfig& config, Timestamp now) const override;
};

// Baseline without sharing: a job may only run on its owner's node.
class StaticOwnershipPolicy final : public SchedulePolicy {
 public:
  explicit StaticOwnershipPolicy(std::map<JobId, NodeId> owners) : owners_(std::move(owners)) {}
  std::optional<Placement> place(const JobRecord& job, const ClusterState& state,
                                 const SchedulerConfig& config, Timestamp now) const override;

 private:
  std::map<JobId, NodeId> owners_;
};

}  // namespace gpunion::coord
