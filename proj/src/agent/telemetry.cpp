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

#include "gpunion/agent/telemetry.hpp"

#include <algorithm>
#include <cmath>

#include "gpunion/core/error.hpp"

namespace gpunion::agent {

std::vector<GpuTelemetry> SimulatedProbe::sample(const NodeId& node,
                                                 const std::vector<GpuLoad>& gpus, Timestamp now) {
  if (fail_) throw Error(ErrorCode::ProbeUnavailable, "simulated probe failure");
  std::vector<GpuTelemetry> out;
  out.reserve(gpus.size());
  for (const auto& load : gpus) {
    GpuTelemetry t;
    t.node = node;
    t.gpu_index = load.gpu.index;
    t.util_pct = load.busy ? 95.0 : 0.0;
    t.mem_used_mib = load.busy ? std::min(load.job_memory_mib, load.gpu.memory_mib) : 0;
    t.temp_c = static_cast<std::int64_t>(std::lround(35.0 + 0.5 * t.util_pct));
    t.power_w = 30.0 + 2.5 * t.util_pct;
    t.sampled_at = now;
    out.push_back(t);
  }
  return out;
}

}  // namespace gpunion::agent
