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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpunion/core/types.hpp"
#include "gpunion/resilience/checkpoint.hpp"

namespace gpunion::agent {

struct LaunchRequest {
  JobId job;
  std::string image_ref;
  std::string image_digest;
  JobMode mode = JobMode::Batch;
  std::vector<std::string> entrypoint;
  std::vector<std::uint32_t> gpu_indices;
  std::map<std::string, std::string> env;
  std::optional<int> published_port;
  Duration estimated_duration{0};
};

enum class ContainerPhase { Created, Running, Frozen, Exited };

struct ContainerStatus {
  ContainerPhase phase = ContainerPhase::Created;
  Duration progress{0};
  int exit_code = 0;
};

struct StateCapture {
  resilience::WorkloadStateModel model;
  Duration progress{0};
};

// Container backend. Containers are created stopped; start() begins
// execution. All calls take the current time so simulated backends can run
// under an injected clock.
class RuntimeAdapter {
 public:
  virtual ~RuntimeAdapter() = default;
  // Throws Error(DigestMismatch) unless the image resolves to `digest`.
  virtual void pull_verify(const std::string& image_ref, const std::string& digest) = 0;
  // Throws Error(RuntimeFailure).
  virtual std::string launch(const LaunchRequest& request, Timestamp now) = 0;
  virtual std::string restore(const LaunchRequest& request, Duration progress, Timestamp now) = 0;
  virtual void start(const std::string& id, Timestamp now) = 0;
  // Copy-on-write capture; the container keeps running. Throws
  // Error(RuntimeCheckpointFailure).
  virtual StateCapture checkpoint(const std::string& id, Timestamp now) = 0;
  virtual void freeze(const std::string& id, Timestamp now) = 0;
  virtual void thaw(const std::string& id, Timestamp now) = 0;
  virtual void terminate(const std::string& id, Timestamp now) = 0;
  // Forgets an exited container.
  virtual void remove(const std::string& id) = 0;
  virtual ContainerStatus status(const std::string& id, Timestamp now) const = 0;
  virtual resilience::WorkloadStateModel state_model(const std::string& id) const = 0;
  // Earliest time a running container finishes on its own.
  virtual std::optional<Timestamp> next_exit(Timestamp now) const = 0;
};

// A stretch of uninterrupted execution.
struct RunSegment {
  JobId job;
  std::string container;
  Timestamp from;
  Timestamp to;
  Duration progress_from{0};
  Duration progress_to{0};
};

// Reference backend: a workload is a progress counter that advances in real
// (or simulated) time while running and exits 0 on reaching its duration.
class SimulatedRuntime final : public RuntimeAdapter {
 public:
  SimulatedRuntime() = default;

  // Workload model per job; jobs not listed run for their estimated
  // duration with `default_model`'s state size.
  void set_workload(JobId job, resilience::WorkloadStateModel model);
  void set_default_model(resilience::WorkloadStateModel model) { default_model_ = model; }
  // Images listed here must match their digest; unlisted images verify.
  void set_image(const std::string& image_ref, const std::string& digest);
  void set_checkpoint_failure(bool fail) { fail_checkpoints_ = fail; }
  void set_launch_failure(bool fail) { fail_launches_ = fail; }
  void on_segment(std::function<void(const RunSegment&)> sink) { segment_sink_ = std::move(sink); }

  void pull_verify(const std::string& image_ref, const std::string& digest) override;
  std::string launch(const LaunchRequest& request, Timestamp now) override;
  std::string restore(const LaunchRequest& request, Duration progress, Timestamp now) override;
  void start(const std::string& id, Timestamp now) override;
  StateCapture checkpoint(const std::string& id, Timestamp now) override;
  void freeze(const std::string& id, Timestamp now) override;
  void thaw(const std::string& id, Timestamp now) override;
  void terminate(const std::string& id, Timestamp now) override;
  void remove(const std::string& id) override;
  ContainerStatus status(const std::string& id, Timestamp now) const override;
  resilience::WorkloadStateModel state_model(const std::string& id) const override;
  std::optional<Timestamp> next_exit(Timestamp now) const override;

  std::size_t live_containers() const;
  // Reports running containers' segments up to `now` without stopping them.
  void flush(Timestamp now);
  const LaunchRequest& request(const std::string& id) const { return containers_.at(id).request; }

 private:
  struct Container {
    LaunchRequest request;
    resilience::WorkloadStateModel model;
    ContainerPhase phase = ContainerPhase::Created;
    Duration progress{0};  // at `since` when running
    Timestamp since;
    int exit_code = 0;
  };
  Container& get(const std::string& id);
  const Container& get(const std::string& id) const;
  Duration progress_at(const Container& c, Timestamp now) const;
  // Settles a running container up to `now`, emitting its segment.
  void settle(const std::string& id, Container& c, Timestamp now, ContainerPhase next);

  std::map<std::string, Container> containers_;
  std::map<JobId, resilience::WorkloadStateModel> catalog_;
  std::map<std::string, std::string> images_;
  resilience::WorkloadStateModel default_model_{1ULL << 30, 0.10, Duration{0}};
  std::function<void(const RunSegment&)> segment_sink_;
  std::uint64_t next_id_ = 1;
  bool fail_checkpoints_ = false;
  bool fail_launches_ = false;
};

}  // namespace gpunion::agent
