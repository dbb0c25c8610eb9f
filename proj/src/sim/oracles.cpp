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

#include "gpunion/sim/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace gpunion::sim {

double expected_lost_work_s(double checkpoint_interval_s) { return checkpoint_interval_s / 2.0; }

double expected_overhead_pct(double interruptions, double lost_work_s, double restore_s,
                             double requeue_s, double base_s) {
  return 100.0 * interruptions * (lost_work_s + restore_s + requeue_s) / base_s;
}

double return_probability(double affinity_window_s, double mean_downtime_s,
                          double remaining_work_s) {
  const double horizon = std::min(affinity_window_s, remaining_work_s);
  if (std::isinf(horizon)) return 1.0;
  return 1.0 - std::exp(-horizon / mean_downtime_s);
}

double expected_event_count(double rate_per_day, double days) { return rate_per_day * days; }

double transfer_seconds(double bytes, double mbps) { return bytes * 8.0 / (mbps * 1e6); }

}  // namespace gpunion::sim
