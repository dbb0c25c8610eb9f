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

#include "gpunion/agent/runtime.hpp"

#include <algorithm>

#include "gpunion/core/error.hpp"

namespace gpunion::agent {
namespace {
constexpr int kKilledExitCode = 137;
}

void SimulatedRuntime::set_workload(JobId job, resilience::WorkloadStateModel model) {
  catalog_[job] = model;
}

void SimulatedRuntime::set_image(const std::string& image_ref, const std::string& digest) {
  images_[image_ref] = digest;
}

void SimulatedRuntime::pull_verify(const std::string& image_ref, const std::string& digest) {
  auto it = images_.find(image_ref);
  if (it != images_.end() && it->second != digest) {
    throw Error(ErrorCode::DigestMismatch,
                image_ref + " resolves to sha256:" + it->second + ", expected sha256:" + digest);
  }
}

std::string SimulatedRuntime::launch(const LaunchRequest& request, Timestamp now) {
  return restore(request, Duration{0}, now);
}

std::string SimulatedRuntime::restore(const LaunchRequest& request, Duration progress,
                                      Timestamp now) {
  if (fail_launches_) throw Error(ErrorCode::RuntimeFailure, "simulated launch failure");
  Container c;
  c.request = request;
  auto it = catalog_.find(request.job);
  if (it != catalog_.end()) {
    c.model = it->second;
  } else {
    c.model = default_model_;
    c.model.duration = request.estimated_duration;
  }
  c.progress = std::min(progress, c.model.duration);
  c.since = now;
  std::string id = "sim-" + std::to_string(next_id_++);
  containers_.emplace(id, std::move(c));
  return id;
}

SimulatedRuntime::Container& SimulatedRuntime::get(const std::string& id) {
  auto it = containers_.find(id);
  if (it == containers_.end()) throw Error(ErrorCode::RuntimeFailure, "no container " + id);
  return it->second;
}

const SimulatedRuntime::Container& SimulatedRuntime::get(const std::string& id) const {
  auto it = containers_.find(id);
  if (it == containers_.end()) throw Error(ErrorCode::RuntimeFailure, "no container " + id);
  return it->second;
}

Duration SimulatedRuntime::progress_at(const Container& c, Timestamp now) const {
  if (c.phase != ContainerPhase::Running) return c.progress;
  return std::min(c.model.duration, c.progress + std::max(Duration{0}, now - c.since));
}

void SimulatedRuntime::settle(const std::string& id, Container& c, Timestamp now,
                              ContainerPhase next) {
  if (c.phase != ContainerPhase::Running) {
    if (c.phase != ContainerPhase::Exited) c.phase = next;
    return;
  }
  Timestamp finish = c.since + (c.model.duration - c.progress);
  Timestamp end = std::min(now, finish);
  Duration reached = c.progress + (end - c.since);
  if (segment_sink_ && end > c.since) {
    segment_sink_(RunSegment{c.request.job, id, c.since, end, c.progress, reached});
  }
  c.progress = reached;
  c.since = end;
  if (finish <= now) {
    c.phase = ContainerPhase::Exited;
    c.exit_code = 0;
  } else {
    c.phase = next;
  }
}

void SimulatedRuntime::start(const std::string& id, Timestamp now) {
  Container& c = get(id);
  if (c.phase != ContainerPhase::Created) return;
  c.phase = ContainerPhase::Running;
  c.since = now;
}

StateCapture SimulatedRuntime::checkpoint(const std::string& id, Timestamp now) {
  const Container& c = get(id);
  if (fail_checkpoints_) throw Error(ErrorCode::RuntimeCheckpointFailure, "simulated capture failure");
  if (c.phase == ContainerPhase::Exited) {
    throw Error(ErrorCode::RuntimeCheckpointFailure, "container " + id + " has exited");
  }
  return StateCapture{c.model, progress_at(c, now)};
}

void SimulatedRuntime::freeze(const std::string& id, Timestamp now) {
  Container& c = get(id);
  settle(id, c, now, ContainerPhase::Frozen);
}

void SimulatedRuntime::thaw(const std::string& id, Timestamp now) {
  Container& c = get(id);
  if (c.phase != ContainerPhase::Frozen) return;
  c.phase = ContainerPhase::Running;
  c.since = now;
}

void SimulatedRuntime::terminate(const std::string& id, Timestamp now) {
  Container& c = get(id);
  if (c.phase == ContainerPhase::Exited) return;
  settle(id, c, now, ContainerPhase::Exited);
  if (c.progress < c.model.duration) c.exit_code = kKilledExitCode;
  c.phase = ContainerPhase::Exited;
}

void SimulatedRuntime::remove(const std::string& id) {
  auto it = containers_.find(id);
  if (it != containers_.end() && it->second.phase == ContainerPhase::Exited) containers_.erase(it);
}

ContainerStatus SimulatedRuntime::status(const std::string& id, Timestamp now) const {
  const Container& c = get(id);
  ContainerStatus s{c.phase, progress_at(c, now), c.exit_code};
  if (c.phase == ContainerPhase::Running && s.progress >= c.model.duration) {
    s.phase = ContainerPhase::Exited;
    s.exit_code = 0;
  }
  return s;
}

resilience::WorkloadStateModel SimulatedRuntime::state_model(const std::string& id) const {
  return get(id).model;
}

std::optional<Timestamp> SimulatedRuntime::next_exit(Timestamp) const {
  std::optional<Timestamp> best;
  for (const auto& [id, c] : containers_) {
    if (c.phase != ContainerPhase::Running) continue;
    Timestamp finish = c.since + (c.model.duration - c.progress);
    if (!best || finish < *best) best = finish;
  }
  return best;
}

void SimulatedRuntime::flush(Timestamp now) {
  for (auto& [id, c] : containers_) settle(id, c, now, ContainerPhase::Running);
}

std::size_t SimulatedRuntime::live_containers() const {
  return static_cast<std::size_t>(std::count_if(containers_.begin(), containers_.end(), [](const auto& kv) {
    return kv.second.phase != ContainerPhase::Exited;
  }));
}

}  // namespace gpunion::agent
