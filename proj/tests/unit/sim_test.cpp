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

#include <gtest/gtest.h>

#include <cmath>

#include "gpunion/sim/config.hpp"
#include "gpunion/sim/oracles.hpp"
#include "gpunion/sim/simulator.hpp"
#include "gpunion/sim/trace.hpp"
#include "support.hpp"

namespace gpunion::sim {
namespace {

using namespace test;

SimConfig small_cluster(std::size_t nodes, double rate, std::uint64_t seed = 1) {
  SimConfig c;
  c.seed = seed;
  for (std::size_t i = 0; i < nodes; ++i) c.nodes.push_back(SimNode{"n" + std::to_string(i)});
  c.interruption_rates.assign(nodes, rate);
  c.sim_duration = std::chrono::hours(24 * 7);
  return c;
}

SimWorkload jobs(std::uint32_t count, Duration duration, std::size_t owner = 0) {
  SimWorkload w;
  w.name = "train";
  w.spec = batch_spec(duration, duration / 100);
  w.state = {200'000'000, 0.1, duration};
  w.owner = owner;
  w.count = count;
  return w;
}

TEST(Trace, PoissonMeanMatches) {
  constexpr int kSeeds = 1000;
  double total = 0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    total += static_cast<double>(generate_trace(small_cluster(1, 3.2, seed)).size());
  }
  const double mean = total / kSeeds;
  const double expected = expected_event_count(3.2, 7.0);
  EXPECT_DOUBLE_EQ(expected, 22.4);
  // Four standard errors of the sample mean.
  EXPECT_NEAR(mean, expected, 4.0 * std::sqrt(expected / kSeeds));
}

TEST(Trace, ZeroRateIsEmpty) { EXPECT_TRUE(generate_trace(small_cluster(3, 0.0)).empty()); }

TEST(Trace, SeedDeterminesTrace) {
  const auto a = generate_trace(small_cluster(4, 2.0, 5));
  EXPECT_EQ(a, generate_trace(small_cluster(4, 2.0, 5)));
  EXPECT_NE(a, generate_trace(small_cluster(4, 2.0, 6)));
  for (std::size_t i = 1; i < a.size(); ++i) {
    EXPECT_TRUE(a[i - 1].at < a[i].at || (a[i - 1].at == a[i].at && a[i - 1].node <= a[i].node));
  }
  for (const auto& e : a) {
    if (e.kind == InterruptionKind::TemporaryUnavailability) {
      EXPECT_GT(e.duration, Duration{0});
    }
  }
}

TEST(Trace, KindMixIsRespected) {
  auto c = small_cluster(4, 3.0, 9);
  c.kind_mix = {0.0, 1.0, 0.0};
  for (const auto& e : generate_trace(c)) EXPECT_EQ(e.kind, InterruptionKind::EmergencyDeparture);
}

TEST(SimConfigTest, Validation) {
  auto c = small_cluster(2, 1.0);
  EXPECT_NO_THROW(validate(c));
  c.interruption_rates = {1.0};
  EXPECT_THROW(validate(c), Error);
  c = small_cluster(2, 5.0);
  EXPECT_THROW(validate(c), Error);
  c.allow_unstudied_rates = true;
  EXPECT_NO_THROW(validate(c));
  c = small_cluster(2, 1.0);
  c.kind_mix = {0.5, 0.5, 0.5};
  EXPECT_THROW(validate(c), Error);
  c = small_cluster(2, 1.0);
  c.workloads = {jobs(1, 1h, 7)};
  EXPECT_THROW(validate(c), Error);
}

TEST(SimConfigTest, JsonRoundTrip) {
  auto c = small_cluster(3, 1.0, 42);
  c.workloads = {jobs(4, 2h, 1)};
  c.interruptions_until = std::chrono::hours(24);
  const auto back = sim_config_from_json(Json::parse(to_json(c).dump()));
  EXPECT_EQ(to_json(back), to_json(c));
  try {
    sim_config_from_json(Json{{"seed", 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
  }
}

TEST(Simulator, NoInterruptionsMeansNoOverhead) {
  auto c = small_cluster(2, 0.0);
  c.workloads = {jobs(4, 2h)};
  c.sim_duration = 12h;
  const auto report = run(c);
  ASSERT_EQ(report.jobs.size(), 4u);
  for (const auto& j : report.jobs) {
    EXPECT_EQ(j.final_state, "Completed");
    ASSERT_TRUE(j.overhead_pct);
    EXPECT_DOUBLE_EQ(*j.overhead_pct, 0.0);
    EXPECT_EQ(j.interruptions, 0u);
    EXPECT_TRUE(j.ledger_identity_ok);
    EXPECT_TRUE(j.bandwidth_ok);
  }
  EXPECT_EQ(report.cluster.jobs_completed, 4u);
  EXPECT_TRUE(report.displacements.empty());
}

TEST(Simulator, SameSeedSameReport) {
  auto c = small_cluster(3, 2.0, 77);
  c.workloads = {jobs(6, 6h)};
  c.sim_duration = 48h;
  const auto a = run(c);
  const auto b = run(c);
  EXPECT_EQ(a.trace_digest, b.trace_digest);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  c.seed = 78;
  EXPECT_NE(run(c).trace_digest, a.trace_digest);
}

TEST(Simulator, EmptyWorkloadHasZeroUtilization) {
  auto c = small_cluster(2, 1.0);
  c.sim_duration = 24h;
  const auto report = simulate(c);
  EXPECT_DOUBLE_EQ(report.cluster.utilization_pct, 0.0);
  ASSERT_TRUE(report.cluster.baseline_utilization_pct);
  EXPECT_DOUBLE_EQ(*report.cluster.baseline_utilization_pct, 0.0);
}

TEST(Simulator, SingleOwnerBaselineBound) {
  auto c = small_cluster(4, 0.0);
  c.workloads = {jobs(4, 1h, 0)};
  c.sim_duration = 2h;
  const auto report = simulate(c);
  ASSERT_TRUE(report.cluster.baseline_utilization_pct);
  EXPECT_LE(*report.cluster.baseline_utilization_pct, 100.0 / 4 + 1e-9);
  EXPECT_GE(report.cluster.utilization_pct, *report.cluster.baseline_utilization_pct);
}

TEST(Simulator, EmergencyLossBoundedByInterval) {
  auto c = small_cluster(4, 3.0, 3);
  c.kind_mix = {0.0, 1.0, 0.0};
  c.workloads = {jobs(4, 24h)};
  c.sim_duration = 72h;
  const auto report = run(c);
  std::size_t checked = 0;
  for (const auto& d : report.displacements) {
    if (d.cause != InterruptionKind::EmergencyDeparture || !d.lost_work || !d.interrupted) continue;
    EXPECT_LE(*d.lost_work, Duration{24h} / 100);
    ++checked;
  }
  EXPECT_GT(checked, 0u);
}

}  // namespace
}  // namespace gpunion::sim
