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

#include "gpunion/coordinator/policy.hpp"

#include <algorithm>

namespace gpunion::coord {
namespace {

constexpr double kScoreTie = 1e-9;

std::optional<std::uint32_t> free_gpu(const NodeEntry& node, const JobSpec& spec,
                                      const std::set<std::uint32_t>& busy) {
  std::optional<std::uint32_t> best;
  for (const auto& gpu : node.record.gpus) {
    if (busy.contains(gpu.index)) continue;
    if (gpu.memory_mib < spec.gpu_memory_mib_required) continue;
    if (gpu.compute_capability < spec.min_compute_capability) continue;
    if (!best || gpu.index < *best) best = gpu.index;
  }
  return best;
}

std::vector<double> min_max(const std::vector<double>& xs) {
  std::vector<double> out(xs.size(), 0.0);
  if (xs.empty()) return out;
  auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  double range = *hi - *lo;
  if (range <= 0.0) return out;
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - *lo) / range;
  return out;
}

}  // namespace

std::vector<Candidate> eligible_candidates(const JobSpec& spec, const ClusterState& state) {
  std::map<NodeId, std::set<std::uint32_t>> busy;
  for (const auto& [id, job] : state.jobs) {
    if (job.allocation) {
      auto& b = busy[job.allocation->node_id];
      b.insert(job.allocation->gpu_indices.begin(), job.allocation->gpu_indices.end());
    }
  }
  static const std::set<std::uint32_t> kNone;
  std::vector<Candidate> out;
  for (const auto& [id, node] : state.nodes) {
    if (node.record.state != NodeState::Active) continue;
    auto it = busy.find(id);
    auto gpu = free_gpu(node, spec, it == busy.end() ? kNone : it->second);
    if (!gpu) continue;
    out.push_back(Candidate{id, *gpu, node.record.volatility_score, node.record.latency_ms});
  }
  return out;
}

std::vector<double> score_candidates(const std::vector<Candidate>& candidates,
                                     const SchedulerConfig& config) {
  std::vector<double> vol, lat;
  vol.reserve(candidates.size());
  lat.reserve(candidates.size());
  for (const auto& c : candidates) {
    vol.push_back(c.volatility);
    lat.push_back(c.latency_ms);
  }
  auto vn = min_max(vol);
  auto ln = min_max(lat);
  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scores[i] = config.weight_volatility * (1.0 - vn[i]) + config.weight_latency * (1.0 - ln[i]);
  }
  return scores;
}

std::size_t round_robin_pick(const std::vector<NodeId>& tied, const std::optional<NodeId>& cursor) {
  if (!cursor) return 0;
  auto it = std::upper_bound(tied.begin(), tied.end(), *cursor);
  return it == tied.end() ? 0 : static_cast<std::size_t>(it - tied.begin());
}

std::optional<Placement> ScoredRoundRobinPolicy::place(const JobRecord& job,
                                                       const ClusterState& state,
                                                       const SchedulerConfig& config,
                                                       Timestamp now) const {
  auto candidates = eligible_candidates(job.spec, state);
  if (candidates.empty()) return std::nullopt;

  if (job.affinity && job.affinity->expires_at > now) {
    for (const auto& c : candidates) {
      if (c.node == job.affinity->node) return Placement{c.node, {c.gpu_index}, true};
    }
  }

  auto scores = score_candidates(candidates, config);
  double best = *std::max_element(scores.begin(), scores.end());
  std::vector<NodeId> tied;
  std::vector<std::uint32_t> gpus;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (scores[i] >= best - kScoreTie) {
      tied.push_back(candidates[i].node);
      gpus.push_back(candidates[i].gpu_index);
    }
  }
  std::size_t pick = round_robin_pick(tied, state.rr_cursor);
  return Placement{tied[pick], {gpus[pick]}, false};
}

std::optional<Placement> StaticOwnershipPolicy::place(const JobRecord& job,
                                                      const ClusterState& state,
                                                      const SchedulerConfig&, Timestamp) const {
  auto owner = owners_.find(job.id);
  if (owner == owners_.end()) return std::nullopt;
  for (const auto& c : eligible_candidates(job.spec, state)) {
    if (c.node == owner->second) return Placement{c.node, {c.gpu_index}, false};
  }
  return std::nullopt;
}

}  // namespace gpunion::coord
