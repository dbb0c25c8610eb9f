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

#include <random>
#include <set>
#include <tuple>

#include "gpunion/core/digest.hpp"
#include "gpunion/core/error.hpp"
#include "gpunion/core/http.hpp"
#include "gpunion/core/state_machine.hpp"
#include "gpunion/core/validation.hpp"
#include "gpunion/core/wire.hpp"
#include "support.hpp"

namespace gpunion {
namespace {

using namespace test;

// Every legal node transition, listed independently of the implementation.
const std::set<std::tuple<NodeState, NodeEvent, NodeState>> kNodeTable = {
    {NodeState::Registering, NodeEvent::Activate, NodeState::Active},
    {NodeState::Active, NodeEvent::Pause, NodeState::Paused},
    {NodeState::Paused, NodeEvent::Resume, NodeState::Active},
    {NodeState::Active, NodeEvent::Drain, NodeState::Draining},
    {NodeState::Paused, NodeEvent::Drain, NodeState::Draining},
    {NodeState::Draining, NodeEvent::Depart, NodeState::Departed},
    {NodeState::Active, NodeEvent::HeartbeatLost, NodeState::Unavailable},
    {NodeState::Paused, NodeEvent::HeartbeatLost, NodeState::Unavailable},
    {NodeState::Unavailable, NodeEvent::Reconnect, NodeState::Active},
    {NodeState::Departed, NodeEvent::Rejoin, NodeState::Registering},
};

const std::set<std::tuple<JobState, JobEvent, JobState>> kJobTable = {
    {JobState::Pending, JobEvent::Schedule, JobState::Scheduled},
    {JobState::Scheduled, JobEvent::Start, JobState::Running},
    {JobState::Running, JobEvent::BeginCheckpoint, JobState::Checkpointing},
    {JobState::Checkpointing, JobEvent::EndCheckpoint, JobState::Running},
    {JobState::Running, JobEvent::Migrate, JobState::Migrating},
    {JobState::Checkpointing, JobEvent::Migrate, JobState::Migrating},
    {JobState::Migrating, JobEvent::Schedule, JobState::Scheduled},
    {JobState::Running, JobEvent::Complete, JobState::Completed},
    {JobState::Running, JobEvent::Fail, JobState::Failed},
    {JobState::Migrating, JobEvent::Lose, JobState::Lost},
    // A launch that never reaches Running can fail or be displaced.
    {JobState::Scheduled, JobEvent::Migrate, JobState::Migrating},
    {JobState::Scheduled, JobEvent::Fail, JobState::Failed},
    // No node available for a displaced job: back to the queue.
    {JobState::Migrating, JobEvent::Requeue, JobState::Pending},
    // Cancellation from any live state.
    {JobState::Pending, JobEvent::Cancel, JobState::Failed},
    {JobState::Scheduled, JobEvent::Cancel, JobState::Failed},
    {JobState::Running, JobEvent::Cancel, JobState::Failed},
    {JobState::Checkpointing, JobEvent::Cancel, JobState::Failed},
    {JobState::Migrating, JobEvent::Cancel, JobState::Failed},
};

TEST(NodeStateMachine, ExhaustiveAgainstTable) {
  for (auto from : kAllNodeStates) {
    for (auto event : kAllNodeEvents) {
      std::optional<NodeState> expected;
      for (const auto& [f, e, t] : kNodeTable) {
        if (f == from && e == event) expected = t;
      }
      EXPECT_EQ(next_state(from, event), expected) << to_string(from) << " " << to_string(event);
      if (expected) {
        EXPECT_EQ(transition(from, event), *expected);
      } else {
        try {
          transition(from, event);
          ADD_FAILURE() << "accepted " << to_string(from) << " " << to_string(event);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::IllegalTransition);
        }
      }
    }
  }
}

TEST(JobStateMachine, ExhaustiveAgainstTable) {
  for (auto from : kAllJobStates) {
    for (auto event : kAllJobEvents) {
      std::optional<JobState> expected;
      for (const auto& [f, e, t] : kJobTable) {
        if (f == from && e == event) expected = t;
      }
      EXPECT_EQ(next_state(from, event), expected) << to_string(from) << " " << to_string(event);
      if (!expected) {
        EXPECT_THROW(transition(from, event), Error);
      }
    }
  }
}

TEST(NodeStateMachine, Examples) {
  NodeState s = NodeState::Active;
  s = transition(s, NodeEvent::HeartbeatLost);
  EXPECT_EQ(s, NodeState::Unavailable);
  EXPECT_EQ(transition(NodeState::Paused, NodeEvent::Resume), NodeState::Active);
  EXPECT_FALSE(next_state(NodeState::Departed, NodeEvent::Pause));
}

TEST(JobStateMachine, TerminalStatesAreClosed) {
  for (auto s : {JobState::Completed, JobState::Failed, JobState::Lost}) {
    EXPECT_TRUE(is_terminal(s));
    for (auto e : kAllJobEvents) EXPECT_FALSE(next_state(s, e));
  }
}

TEST(Validation, AllowListAndResources) {
  const DigestAllowList allow{kDigest};
  EXPECT_FALSE(validate_job_spec(batch_spec(), allow));

  auto untrusted = batch_spec();
  untrusted.image_digest = kOtherDigest;
  EXPECT_EQ(validate_job_spec(untrusted, allow)->code, ErrorCode::DigestNotTrusted);

  auto zero = batch_spec();
  zero.gpu_memory_mib_required = 0;
  EXPECT_EQ(validate_job_spec(zero, allow)->code, ErrorCode::NonPositiveResource);

  auto malformed = batch_spec();
  malformed.image_digest = std::string(64, 'A');
  EXPECT_EQ(validate_job_spec(malformed, allow)->code, ErrorCode::MalformedDigest);
  malformed.image_digest = "abc";
  EXPECT_EQ(validate_job_spec(malformed, allow)->code, ErrorCode::MalformedDigest);

  auto interval = batch_spec();
  interval.checkpoint_interval = Duration{0};
  EXPECT_EQ(validate_job_spec(interval, allow)->code, ErrorCode::NonPositiveResource);

  auto interactive = batch_spec();
  interactive.mode = JobMode::Interactive;
  EXPECT_EQ(validate_job_spec(interactive, allow)->code, ErrorCode::ValidationFailed);
  interactive.entrypoint.clear();
  EXPECT_FALSE(validate_job_spec(interactive, allow));
}

TEST(Validation, GpuDescriptor) {
  EXPECT_TRUE(validate_gpu(gpu(0)));
  EXPECT_FALSE(validate_gpu(gpu(0, 0)));
  EXPECT_FALSE(validate_gpu(gpu(0, 1024, {0, 5})));
}

TEST(ComputeCapability, LexicographicOrder) {
  EXPECT_GE((ComputeCapability{8, 6}), (ComputeCapability{8, 0}));
  EXPECT_GE((ComputeCapability{9, 0}), (ComputeCapability{8, 9}));
  EXPECT_LT((ComputeCapability{7, 5}), (ComputeCapability{8, 0}));
  EXPECT_EQ((ComputeCapability{8, 6}), (ComputeCapability{8, 6}));
}

TEST(NodeId, HexRoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto id = NodeId::random(rng);
    const auto hex = id.to_hex();
    EXPECT_EQ(hex.size(), 32u);
    EXPECT_EQ(NodeId::from_hex(hex), id);
  }
  EXPECT_THROW(NodeId::from_hex("xyz"), Error);
}

TEST(Digest, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  Sha256 h;
  h.update("a");
  h.update("bc");
  EXPECT_EQ(h.finish_hex(), sha256_hex("abc"));
}

template <typename T>
void expect_round_trip(const T& value) {
  const Json j = value;
  EXPECT_EQ(j.get<T>(), value) << j.dump();
  EXPECT_EQ(Json::parse(j.dump()).get<T>(), value);
}

TEST(Wire, DomainTypesRoundTrip) {
  std::mt19937_64 rng(3);
  const NodeId node = NodeId::random(rng);
  auto spec = batch_spec();
  spec.priority = 7;
  spec.affinity_window = 900s;
  spec.storage_target = NodeTarget{node, "/ckpt"};
  expect_round_trip(spec);
  spec.storage_target = LocalTarget{"/tmp/x"};
  spec.mode = JobMode::Interactive;
  spec.entrypoint.clear();
  expect_round_trip(spec);

  NodeRecord record{node, {gpu(0), gpu(1, 81920, {9, 0})}, NodeState::Paused, 3.5, 1.6, 9, 2, "hash"};
  expect_round_trip(record);

  CheckpointManifest m{JobId{4}, 3, 2, at_ms(1234), 1 << 20, std::string(64, 'c'), SharedFsTarget{"/s"}};
  expect_round_trip(m);

  JobRecord job;
  job.id = JobId{4};
  job.spec = batch_spec();
  job.state = JobState::Migrating;
  job.allocation = Allocation{JobId{4}, node, {0}, at_ms(10)};
  job.history = {*job.allocation};
  job.affinity = AffinityTag{node, at_ms(99)};
  job.checkpoints = {m};
  job.displaced_from = node;
  job.interruptions = 2;
  job.reason = "heartbeat-loss";
  expect_round_trip(job);

  InterruptionEvent ev{InterruptionKind::TemporaryUnavailability, 600s, node, at_ms(5)};
  expect_round_trip(ev);
}

TEST(Wire, ProtocolRoundTrip) {
  std::mt19937_64 rng(4);
  const NodeId node = NodeId::random(rng);
  HeartbeatRequest hb = heartbeat(node, 12);
  hb.telemetry = {GpuTelemetry{node, 0, 95.0, 8192, 82, 267.5, at_ms(77)}};
  hb.workloads = {WorkloadReport{JobId{1}, WorkloadPhase::Exited, 137, "RuntimeFailure", {}, 3}};
  hb.pause_request = true;
  hb.draining = true;
  hb.latency_ms = 2.5;
  const Json j = hb;
  const auto back = j.get<HeartbeatRequest>();
  EXPECT_EQ(back.seq, 12u);
  EXPECT_EQ(back.workloads, hb.workloads);
  EXPECT_EQ(back.telemetry, hb.telemetry);
  EXPECT_EQ(back.pause_request, hb.pause_request);
  EXPECT_TRUE(back.draining);

  HeartbeatAck ack;
  ack.node_state = NodeState::Draining;
  ack.directives = {LaunchDirective{JobId{2}, batch_spec(), {0, 1}, true, 4},
                    CheckpointDirective{JobId{2}}, TerminateDirective{JobId{3}, 30s, 2},
                    DrainDirective{60s}, KillDirective{0s}};
  const auto ack_back = Json(ack).get<HeartbeatAck>();
  EXPECT_EQ(ack_back.node_state, ack.node_state);
  EXPECT_EQ(ack_back.directives, ack.directives);

  DepartureNotice notice{node, DepartureKind::Emergency, hb.workloads};
  const auto notice_back = Json(notice).get<DepartureNotice>();
  EXPECT_EQ(notice_back.kind, DepartureKind::Emergency);
  EXPECT_EQ(notice_back.workloads, notice.workloads);
}

TEST(Wire, EnumsAreTaggedObjects) {
  EXPECT_EQ(Json(NodeState::Active), (Json{{"kind", "Active"}}));
  EXPECT_EQ(Json(JobState::Checkpointing), (Json{{"kind", "Checkpointing"}}));
  EXPECT_THROW(Json({{"kind", "Sleeping"}}).get<NodeState>(), std::exception);
}

TEST(Wire, JobSpecDefaultsOptionalFields) {
  const Json minimal = {{"image_ref", "r"}, {"image_digest", kDigest}, {"gpu_memory_mib_required", 1024}};
  const auto spec = minimal.get<JobSpec>();
  const JobSpec d;
  EXPECT_EQ(spec.mode, d.mode);
  EXPECT_EQ(spec.checkpoint_interval, d.checkpoint_interval);
  EXPECT_EQ(spec.storage_target, d.storage_target);
  EXPECT_EQ(spec.min_compute_capability, d.min_compute_capability);
  EXPECT_THROW((Json{{"image_ref", "r"}}.get<JobSpec>()), std::exception);
}

TEST(Http, ErrorMapping) {
  EXPECT_EQ(http_status(ErrorCode::DigestNotTrusted), 400);
  EXPECT_EQ(http_status(ErrorCode::Unauthorized), 401);
  EXPECT_EQ(http_status(ErrorCode::NotFound), 404);
  EXPECT_EQ(http_status(ErrorCode::IllegalTransition), 409);
  try {
    throw_http_error(400, error_body(ErrorCode::DigestNotTrusted, "nope").dump());
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DigestNotTrusted);
    EXPECT_STREQ(e.what(), "nope");
  }
  try {
    throw_http_error(404, "not json");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFound);
  }
}

TEST(Time, SecondsConversion) {
  EXPECT_EQ(from_seconds(1.5), Duration{1500});
  EXPECT_DOUBLE_EQ(to_seconds(Duration{2500}), 2.5);
  EXPECT_EQ(ms_since_epoch(at_ms(42)), 42);
}

}  // namespace
}  // namespace gpunion
