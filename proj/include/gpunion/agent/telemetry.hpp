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
#include <vector>

#include "gpunion/core/types.hpp"

namespace gpunion::agent {

// What the agent knows about a GPU when sampling it.
struct GpuLoad {
  GpuDescriptor gpu;
  bool busy = false;
  std::int64_t job_memory_mib = 0;
};

class TelemetryProbe {
 public:
  virtual ~TelemetryProbe() = default;
  // One sample per GPU. Throws Error(ProbeUnavailable).
  virtual std::vector<GpuTelemetry> sample(const NodeId& node, const std::vector<GpuLoad>& gpus,
                                           Timestamp now) = 0;
};

// util 95% on a busy GPU, memory = the job's requirement (capped at the
// GPU's memory); temp_c = 35 + util/2, power_w = 30 + 2.5 * util.
class SimulatedProbe final : public TelemetryProbe {
 public:
  std::vector<GpuTelemetry> sample(const NodeId& node, const std::vector<GpuLoad>& gpus,
                                   Timestamp now) override;
  void set_failure(bool fail) { fail_ = fail; }

 private:
  bool fail_ = false;
};

}  // namespace gpunion::agent
