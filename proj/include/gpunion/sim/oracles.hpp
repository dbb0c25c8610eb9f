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

#include "gpunion/core/time.hpp"

namespace gpunion::sim {

// Closed forms the simulator is checked against. They share no code with the
// coordinator, agent or resilience modules.

// Emergency departure at a uniformly distributed phase of the checkpoint
// cycle loses half an interval on average.
double expected_lost_work_s(double checkpoint_interval_s);

// n interruptions, each costing lost work + restore + requeue delay.
double expected_overhead_pct(double interruptions, double lost_work_s, double restore_s,
                             double requeue_s, double base_s);

// Probability that a displaced job returns to its original node: the node
// reconnects within the affinity window (exponential downtime with the given
// mean, memoryless past the detection delay) and before the job would have
// completed elsewhere. Pass infinity for a job that cannot run elsewhere.
double return_probability(double affinity_window_s, double mean_downtime_s,
                          double remaining_work_s);

// Expected events of a Poisson process.
double expected_event_count(double rate_per_day, double days);

// Seconds to move `bytes` over a link of `mbps` megabits per second.
double transfer_seconds(double bytes, double mbps);

}  // namespace gpunion::sim
