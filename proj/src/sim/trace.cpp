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

#include "gpunion/sim/trace.hpp"

#include <algorithm>
#include <random>

namespace gpunion::sim {

std::vector<InterruptionEvent> generate_trace(const SimConfig& config) {
  validate(config);
  std::vector<InterruptionEvent> trace;
  const double from_ms = static_cast<double>(config.interruptions_from.count());
  const double until_ms =
      static_cast<double>(config.interruptions_until.value_or(config.sim_duration).count());
  const auto& mix = config.kind_mix;
  for (std::size_t i = 0; i < config.nodes.size(); ++i) {
    const double rate_per_ms = config.interruption_rates[i] / 86'400'000.0;
    if (rate_per_ms <= 0) continue;
    // Streams are per node so adding a node leaves the others' traces intact.
    std::seed_seq seq{config.seed, static_cast<std::uint64_t>(i)};
    std::mt19937_64 rng(seq);
    std::exponential_distribution<double> gap(rate_per_ms);
    std::discrete_distribution<int> kind({mix.scheduled, mix.emergency, mix.temporary});
    std::exponential_distribution<double> downtime(1.0 / (config.temporary_duration_dist.mean_s * 1000.0));
    for (double t = from_ms + gap(rng); t < until_ms; t += gap(rng)) {
      InterruptionEvent e;
      e.node = sim_node_id(i);
      e.at = at_ms(static_cast<std::int64_t>(t));
      switch (kind(rng)) {
        case 0: e.kind = InterruptionKind::ScheduledDeparture; break;
        case 1: e.kind = InterruptionKind::EmergencyDeparture; break;
        default:
          e.kind = InterruptionKind::TemporaryUnavailability;
          e.duration = Duration{std::max<std::int64_t>(1, static_cast<std::int64_t>(downtime(rng)))};
          break;
      }
      trace.push_back(e);
    }
  }
  std::stable_sort(trace.begin(), trace.end(), [](const auto& a, const auto& b) {
    return std::tie(a.at, a.node) < std::tie(b.at, b.node);
  });
  return trace;
}

}  // namespace gpunion::sim
