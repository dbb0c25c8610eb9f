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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>

#include "gpunion/coordinator/coordinator.hpp"
#include "gpunion/coordinator/event_store.hpp"
#include "gpunion/coordinator/events.hpp"
#include "gpunion/coordinator/policy.hpp"
#include "support.hpp"

namespace gpunion::coord {
namespace {

using namespace test;

class CoordinatorTest : public ::testing::Test {
 protected:
  ManualClock clock;
  Coordinator coordinator{coordinator_config(), clock, seeded()};

  RegistrationResponse join(std::uint32_t gpus = 1, double latency = 1.0) {
    return coordinator.register_node(registration(gpus, latency));
  }

  std::uint64_t next_seq(const NodeId& node) { return coordinator.node(node).record.last_heartbeat_seq + 1; }

  HeartbeatAck beat(const RegistrationResponse& r, std::vector<WorkloadReport> workloads = {}) {
    return coordinator.process_heartbeat(heartbeat(r.node_id, next_seq(r.node_id), std::move(workloads)),
                                         r.token);
  }

  // Launches `job` on the node and reports it running.
  void run(const RegistrationResponse& r, JobId job) {
    auto launches = directives_of<LaunchDirective>(beat(r));
    ASSERT_EQ(launches.size(), 1u);
    ASSERT_EQ(launches[0].job_id, job);
    beat(r, {WorkloadReport{job, WorkloadPhase::Running, 0, "", {}, launches[0].attempt}});
    ASSERT_EQ(coordinator.job(job).state, JobState::Running);
  }
};

TEST_F(CoordinatorTest, RegistrationActivatesNode) {
  auto r = join(2);
  const auto& n = coordinator.node(r.node_id);
  EXPECT_EQ(n.record.state, NodeState::Active);
  EXPECT_EQ(n.record.gpus.size(), 2u);
  EXPECT_EQ(n.record.auth_token_hash.size(), 64u);
  EXPECT_NE(n.record.auth_token_hash, r.token);
  EXPECT_EQ(r.token.size(), 64u);
}

TEST_F(CoordinatorTest, RegistrationRejections) {
  try {
    coordinator.register_node(RegistrationRequest{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyGpuList);
  }
  auto r = join();
  try {
    coordinator.register_node(registration(1, 1.0, r.node_id));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateActiveNode);
  }
}

TEST_F(CoordinatorTest, HeartbeatAuthAndSequence) {
  auto r = join();
  try {
    coordinator.process_heartbeat(heartbeat(r.node_id, 1), "wrong");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unauthorized);
  }
  coordinator.process_heartbeat(heartbeat(r.node_id, 5), r.token);
  for (std::uint64_t seq : {5u, 4u}) {
    try {
      coordinator.process_heartbeat(heartbeat(r.node_id, seq), r.token);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::StaleSequence);
    }
  }
  std::mt19937_64 rng(9);
  try {
    coordinator.process_heartbeat(heartbeat(NodeId::random(rng), 1), r.token);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownNode);
  }
}

TEST_F(CoordinatorTest, RejectedSpecsNeverEnterTheQueue) {
  auto spec = batch_spec();
  spec.image_digest = kOtherDigest;
  EXPECT_THROW(coordinator.enqueue_job(spec), Error);
  EXPECT_TRUE(coordinator.state().jobs.empty());
  EXPECT_TRUE(coordinator.log().empty());
}

TEST_F(CoordinatorTest, QueueOrderMatchesSortOracle) {
  std::mt19937_64 rng(11);
  std::vector<std::pair<std::int64_t, JobId>> submitted;
  for (int i = 0; i < 200; ++i) {
    auto spec = batch_spec();
    spec.priority = static_cast<std::int64_t>(rng() % 5);
    submitted.emplace_back(spec.priority, coordinator.enqueue_job(spec));
  }
  // Higher priority first, then submission order.
  std::stable_sort(submitted.begin(), submitted.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<JobId> expected;
  for (const auto& [p, id] : submitted) expected.push_back(id);
  EXPECT_EQ(coordinator.state().pending.ordered(), expected);

  // A single free GPU goes to the head of the queue.
  join();
  EXPECT_EQ(coordinator.job(expected.front()).state, JobState::Scheduled);
  EXPECT_EQ(coordinator.job(expected[1]).state, JobState::Pending);
}

TEST_F(CoordinatorTest, VolatilityEwma) {
  auto busy = join();
  auto calm = join();
  for (int i = 0; i < 3; ++i) coordinator.update_volatility(busy.node_id, VolatilityInput::Interruption);
  coordinator.update_volatility(busy.node_id, VolatilityInput::DayElapsed);
  EXPECT_NEAR(coordinator.node(busy.node_id).record.volatility_score, 0.7 * 1.0 + 0.3 * 3, 1e-12);
  EXPECT_NEAR(coordinator.node(calm.node_id).record.volatility_score, 0.7, 1e-12);
  EXPECT_EQ(coordinator.node(busy.node_id).interruptions_today, 0u);
}

TEST(Policy, PrefersLowVolatility) {
  std::mt19937_64 rng(2);
  const NodeId stable = NodeId::random(rng), flaky = NodeId::random(rng);
  const std::vector<Candidate> cands{{flaky, 0, 3.0, 1.0}, {stable, 0, 0.5, 1.0}};
  const auto scores = score_candidates(cands, SchedulerConfig{});
  // Latency ties, so its term is the full weight for both.
  EXPECT_DOUBLE_EQ(scores[0], 0.5);
  EXPECT_DOUBLE_EQ(scores[1], 1.0);
}

TEST(Policy, ZeroRangeScoresFull) {
  std::mt19937_64 rng(2);
  const std::vector<Candidate> cands{{NodeId::random(rng), 0, 1.0, 5.0}, {NodeId::random(rng), 0, 1.0, 5.0}};
  for (double s : score_candidates(cands, SchedulerConfig{})) EXPECT_DOUBLE_EQ(s, 1.0);
}

TEST(Policy, RoundRobinWraps) {
  std::vector<NodeId> tied{{0, 1}, {0, 2}, {0, 3}};
  EXPECT_EQ(round_robin_pick(tied, std::nullopt), 0u);
  EXPECT_EQ(round_robin_pick(tied, NodeId{0, 1}), 1u);
  EXPECT_EQ(round_robin_pick(tied, NodeId{0, 3}), 0u);
  EXPECT_EQ(round_robin_pick(tied, NodeId{0, 0}), 0u);
  EXPECT_EQ(round_robin_pick(tied, NodeId{0, 2}), 2u);
}

TEST_F(CoordinatorTest, VolatilityDecidesPlacement) {
  auto flaky = join();
  auto stable = join();
  for (int i = 0; i < 10; ++i) coordinator.update_volatility(flaky.node_id, VolatilityInput::Interruption);
  coordinator.update_volatility(flaky.node_id, VolatilityInput::DayElapsed);
  auto job = coordinator.enqueue_job(batch_spec());
  EXPECT_EQ(coordinator.job(job).allocation->node_id, stable.node_id);
}

TEST_F(CoordinatorTest, EqualNodesShareEvenly) {
  std::vector<NodeId> nodes;
  for (int i = 0; i < 10; ++i) nodes.push_back(join(100).node_id);
  std::map<NodeId, int> per_node;
  for (int i = 0; i < 1000; ++i) {
    auto id = coordinator.enqueue_job(batch_spec());
    ++per_node[coordinator.job(id).allocation->node_id];
  }
  ASSERT_EQ(per_node.size(), 10u);
  for (const auto& [n, count] : per_node) EXPECT_EQ(count, 100) << to_string(n);
}

TEST_F(CoordinatorTest, ComputeCapabilityAndMemoryFilter) {
  RegistrationRequest small;
  small.gpus = {gpu(0, 4096, {9, 0})};
  auto s = coordinator.register_node(small);
  RegistrationRequest old;
  old.gpus = {gpu(0, 81920, {7, 0})};
  auto o = coordinator.register_node(old);
  RegistrationRequest good;
  good.gpus = {gpu(0, 81920, {8, 0}), gpu(1, 81920, {9, 0})};
  auto g = coordinator.register_node(good);

  auto spec = batch_spec();
  spec.min_compute_capability = {8, 6};
  auto job = coordinator.enqueue_job(spec);
  const auto& alloc = *coordinator.job(job).allocation;
  EXPECT_EQ(alloc.node_id, g.node_id);
  EXPECT_EQ(alloc.gpu_indices, std::vector<std::uint32_t>{1});
  (void)s;
  (void)o;
}

TEST_F(CoordinatorTest, DetectionAtThreeMissedIntervals) {
  auto r = join();
  clock.set(at_ms(25'000));
  EXPECT_TRUE(coordinator.detect_failures(clock.now()).empty());
  EXPECT_EQ(coordinator.node(r.node_id).record.missed_heartbeats, 2u);
  EXPECT_EQ(coordinator.node(r.node_id).record.state, NodeState::Active);
  clock.set(at_ms(29'999));
  EXPECT_TRUE(coordinator.detect_failures(clock.now()).empty());
  clock.set(at_ms(30'000));
  EXPECT_EQ(coordinator.detect_failures(clock.now()), std::vector<NodeId>{r.node_id});
  EXPECT_EQ(coordinator.node(r.node_id).record.state, NodeState::Unavailable);
  EXPECT_EQ(coordinator.state().counters.heartbeat_misses_total, 3u);

  // A heartbeat brings it back.
  beat(r);
  EXPECT_EQ(coordinator.node(r.node_id).record.state, NodeState::Active);
  EXPECT_EQ(coordinator.node(r.node_id).record.missed_heartbeats, 0u);
}

TEST_F(CoordinatorTest, PausedNodeCanStillBeLost) {
  auto r = join();
  EXPECT_TRUE(coordinator.pause_node(r.node_id));
  EXPECT_FALSE(coordinator.pause_node(r.node_id));
  clock.set(at_ms(30'000));
  coordinator.detect_failures(clock.now());
  EXPECT_EQ(coordinator.node(r.node_id).record.state, NodeState::Unavailable);
}

TEST_F(CoordinatorTest, PausedNodeKeepsItsJobButTakesNoNewOnes) {
  auto r = join(2);
  auto first = coordinator.enqueue_job(batch_spec());
  run(r, first);
  coordinator.pause_node(r.node_id);
  auto second = coordinator.enqueue_job(batch_spec());
  EXPECT_EQ(coordinator.job(first).state, JobState::Running);
  EXPECT_EQ(coordinator.job(second).state, JobState::Pending);
  EXPECT_TRUE(coordinator.resume_node(r.node_id));
  EXPECT_EQ(coordinator.job(second).state, JobState::Scheduled);
}

TEST_F(CoordinatorTest, ReplayReproducesState) {
  auto r = join();
  auto job = coordinator.enqueue_job(batch_spec());
  run(r, job);
  const auto replayed = replay_log(coordinator.log());
  EXPECT_EQ(replayed, coordinator.state());
  ASSERT_EQ(replayed.jobs.size(), 1u);
  EXPECT_EQ(replayed.jobs.at(job).state, JobState::Running);

  std::vector<EventLogEntry> round_trip;
  for (const auto& e : coordinator.log()) round_trip.push_back(event_from_json(Json::parse(to_json(e).dump())));
  EXPECT_EQ(round_trip, coordinator.log());

  auto gapped = coordinator.log();
  gapped.erase(gapped.begin() + 1);
  try {
    replay_log(gapped);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GapInLog);
  }
}

TEST(EventLog, UnknownKindIsCorrupt) {
  try {
    event_from_json(Json{{"seq", 1}, {"at", 0}, {"payload", {{"kind", "Nope"}}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CorruptEntry);
  }
}

TEST_F(CoordinatorTest, StaleAttemptIsTerminated) {
  auto r = join();
  auto job = coordinator.enqueue_job(batch_spec());
  run(r, job);
  // Lost, requeued (nowhere else to go), then the node returns.
  clock.set(at_ms(30'000));
  coordinator.detect_failures(clock.now());
  EXPECT_EQ(coordinator.job(job).state, JobState::Pending);
  auto ack = beat(r, {WorkloadReport{job, WorkloadPhase::Running, 0, "", {}, 1}});
  auto terminates = directives_of<TerminateDirective>(ack);
  ASSERT_EQ(terminates.size(), 1u);
  EXPECT_EQ(terminates[0].attempt, 1u);
  auto launches = directives_of<LaunchDirective>(ack);
  ASSERT_EQ(launches.size(), 1u);
  EXPECT_EQ(launches[0].attempt, 2u);
  // The stale report must not start the new attempt.
  EXPECT_EQ(coordinator.job(job).state, JobState::Scheduled);
  beat(r, {WorkloadReport{job, WorkloadPhase::Running, 0, "", {}, 2}});
  EXPECT_EQ(coordinator.job(job).state, JobState::Running);
}

TEST_F(CoordinatorTest, KillRidesTheNextAck) {
  auto r = join();
  coordinator.kill_node(r.node_id, 0s);
  auto kills = directives_of<KillDirective>(beat(r));
  ASSERT_EQ(kills.size(), 1u);
  EXPECT_EQ(kills[0].grace, Duration{0});
  EXPECT_TRUE(directives_of<KillDirective>(beat(r)).empty());
  EXPECT_THROW(coordinator.kill_node(r.node_id, Duration{-1}), Error);
}

TEST_F(CoordinatorTest, GracefulDepartureMovesJobsWithCheckpoint) {
  auto a = join();
  auto job = coordinator.enqueue_job(batch_spec());
  run(a, job);
  auto b = join();
  coordinator.drain_node(a.node_id, 30s);
  auto drains = directives_of<DrainDirective>(beat(a, {WorkloadReport{job, WorkloadPhase::Running, 0, "", {}, 1}}));
  ASSERT_EQ(drains.size(), 1u);
  EXPECT_EQ(drains[0].grace, 30s);

  CheckpointManifest m{job, 1, std::nullopt, clock.now(), 1000, std::string(64, 'c'), SharedFsTarget{"/s"}};
  DepartureNotice notice{a.node_id, DepartureKind::Graceful,
                         {WorkloadReport{job, WorkloadPhase::Exited, 0, "Terminated", {m}, 1}}};
  auto plans = coordinator.receive_departure(notice, a.token);
  ASSERT_EQ(plans.size(), 1u);
  EXPECT_EQ(plans[0].outcome, resilience::MigrationOutcome::Migrate);
  EXPECT_EQ(plans[0].target->node, b.node_id);
  EXPECT_EQ(coordinator.node(a.node_id).record.state, NodeState::Departed);
  auto launches = directives_of<LaunchDirective>(beat(b));
  ASSERT_EQ(launches.size(), 1u);
  EXPECT_TRUE(launches[0].restore);
  EXPECT_EQ(coordinator.job(job).checkpoints.size(), 1u);
}

TEST_F(CoordinatorTest, InteractiveWithoutCheckpointIsLost) {
  auto r = join();
  auto spec = batch_spec();
  spec.mode = JobMode::Interactive;
  spec.entrypoint.clear();
  auto job = coordinator.enqueue_job(spec);
  run(r, job);
  coordinator.handle_departure(r.node_id, DepartureKind::Emergency);
  EXPECT_EQ(coordinator.job(job).state, JobState::Lost);
}

TEST_F(CoordinatorTest, CancelReleasesAndTerminates) {
  auto r = join();
  auto job = coordinator.enqueue_job(batch_spec());
  run(r, job);
  coordinator.cancel_job(job);
  EXPECT_EQ(coordinator.job(job).state, JobState::Failed);
  EXPECT_TRUE(coordinator.state().busy_gpus(r.node_id).empty());
  EXPECT_EQ(directives_of<TerminateDirective>(beat(r)).size(), 1u);
  EXPECT_THROW(coordinator.cancel_job(job), Error);
}

TEST_F(CoordinatorTest, CompletionFreesTheGpu) {
  auto r = join();
  auto job = coordinator.enqueue_job(batch_spec());
  auto next = coordinator.enqueue_job(batch_spec());
  run(r, job);
  beat(r, {WorkloadReport{job, WorkloadPhase::Exited, 0, "", {}, 1}});
  EXPECT_EQ(coordinator.job(job).state, JobState::Completed);
  EXPECT_EQ(coordinator.job(next).state, JobState::Scheduled);
}

TEST(EventStoreTest, FileStoreRestoresCoordinator) {
  const auto path = std::filesystem::temp_directory_path() / "gpunion_events_test.jsonl";
  std::filesystem::remove(path);
  ManualClock clock;
  ClusterState before;
  {
    FileEventStore store(path);
    Coordinator::Options options = seeded();
    options.store = &store;
    Coordinator c(coordinator_config(), clock, options);
    auto r = c.register_node(registration(2));
    c.enqueue_job(batch_spec());
    c.enqueue_job(batch_spec());
    c.pause_node(r.node_id);
    before = c.state();
  }
  {
    FileEventStore store(path);
    Coordinator::Options options = seeded();
    options.store = &store;
    Coordinator c(coordinator_config(), clock, options);
    EXPECT_EQ(c.state(), before);
  }
  // A hole in the file is reported, not skipped.
  {
    std::ifstream in(path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    in.close();
    std::ofstream out(path, std::ios::trunc);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (i != 2) out << lines[i] << "\n";
    }
  }
  FileEventStore broken(path);
  try {
    broken.load();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GapInLog);
  }
  std::filesystem::remove(path);
}

TEST(CoordinatorConfigTest, RejectsBadValues) {
  SchedulerConfig c;
  c.heartbeat_interval = Duration{0};
  EXPECT_THROW(validate(c), Error);
  c = SchedulerConfig{};
  c.volatility_alpha = 1.5;
  EXPECT_THROW(validate(c), Error);
  const auto parsed = coordinator_config_from_json(
      Json{{"heartbeat_interval_s", 5}, {"allow_list", {kDigest}}, {"weight_volatility", 0.8}});
  EXPECT_EQ(parsed.scheduler.heartbeat_interval, 5s);
  EXPECT_DOUBLE_EQ(parsed.scheduler.weight_latency, 0.2);
  EXPECT_TRUE(parsed.allow_list.contains(kDigest));
}

TEST_F(CoordinatorTest, ReadModels) {
  auto r = join(2);
  coordinator.enqueue_job(batch_spec());
  const auto summary = cluster_summary(coordinator.state());
  EXPECT_EQ(summary["nodes"]["Active"], 1);
  EXPECT_EQ(summary["jobs"]["Scheduled"], 1);
  EXPECT_EQ(summary["gpus_total"], 2);
  EXPECT_EQ(summary["gpus_busy"], 1);
  const auto view = node_view(coordinator.state(), coordinator.node(r.node_id));
  EXPECT_FALSE(view.contains("auth_token_hash"));
  EXPECT_EQ(view["busy_gpus"], Json::array({0}));
  EXPECT_NE(metrics_text(coordinator.state()).find("jobs_running 0"), std::string::npos);
}

}  // namespace
}  // namespace gpunion::coord
