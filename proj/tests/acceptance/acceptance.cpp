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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. Tolerances are the constants below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gpunion/agent/agent.hpp"
#include "gpunion/agent/client.hpp"
#include "gpunion/coordinator/coordinator.hpp"
#include "gpunion/coordinator/policy.hpp"
#include "gpunion/core/error.hpp"
#include "gpunion/sim/config.hpp"
#include "gpunion/sim/oracles.hpp"
#include "gpunion/sim/simulator.hpp"

namespace {

using namespace gpunion;
using namespace std::chrono_literals;

// ---- pinned tolerances ----
constexpr int kDetectionTrials = 200;
constexpr int kGracefulSeeds = 50;
constexpr double kGracefulMinPct = 90.0;
constexpr double kGracefulMaxRunSeconds = 30.0;
constexpr std::size_t kEmergencyMinSamples = 500;
constexpr double kEmergencyMeanRelTol = 0.10;
constexpr int kOverheadSeeds = 20;
constexpr std::size_t kOverheadMinJobs = 10;
constexpr double kOverheadLowPct = 3.0;
constexpr double kOverheadHighPct = 7.0;
constexpr double kOverheadOracleTolPp = 1.0;
constexpr int kReturnSeeds = 500;
constexpr double kReturnTolPoints = 5.0;
constexpr double kBandwidthMaxPct = 2.0;
constexpr int kFullOnlySeeds = 10;
constexpr int kUtilizationSeeds = 5;
constexpr double kUtilizationMinRatio = 1.5;
constexpr int kRandomScenarios = 1000;
constexpr int kKillTrials = 50;
constexpr Duration kKillNowBound = 1s;
constexpr int kScaleTrials = 1000;

const std::string kDigest(64, 'a');

std::filesystem::path scenario(const std::string& name) {
  return std::filesystem::path(GPUNION_SCENARIO_DIR) / (name + ".json");
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 3) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(precision);
  out << v;
  return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

GpuDescriptor gpu(std::uint32_t index, std::int64_t memory_mib = 24576) {
  return GpuDescriptor{index, "sim-gpu", memory_mib, ComputeCapability{8, 6}};
}

JobSpec batch_spec(Duration duration, Duration interval, CheckpointMode mode) {
  JobSpec s;
  s.image_ref = "registry.local/train:1";
  s.image_digest = kDigest;
  s.entrypoint = {"python", "train.py"};
  s.gpu_memory_mib_required = 8192;
  s.checkpoint_interval = interval;
  s.checkpoint_mode = mode;
  s.estimated_duration = duration;
  return s;
}

coord::CoordinatorConfig coordinator_config(Duration heartbeat = 10s) {
  coord::CoordinatorConfig c;
  c.scheduler.heartbeat_interval = heartbeat;
  c.allow_list = {kDigest};
  return c;
}

// Coordinator plus in-process agents on simulated runtimes, stepped like the
// churn simulator: coordinator tick, then agents whose deadline is due.
class Rig {
 public:
  struct Node {
    agent::SimulatedRuntime runtime;
    agent::SimulatedProbe probe;
    agent::MemoryIdentityStore identity;
    std::unique_ptr<agent::InProcessClient> client;
    std::unique_ptr<agent::Agent> agent;
  };
  struct Traced {
    std::size_t node = 0;
    agent::AgentEvent event;
  };

  explicit Rig(std::uint64_t seed, Duration heartbeat = 10s) : ledger_(1000.0) {
    coord::Coordinator::Options options;
    options.token_seed = seed;
    coordinator_ = std::make_unique<coord::Coordinator>(coordinator_config(heartbeat), clock_, options);
  }

  Node& add_node(std::vector<GpuDescriptor> gpus, double latency_ms = 1.0,
                 resilience::WorkloadStateModel model = {500'000'000, 0.1, 1h}) {
    auto node = std::make_unique<Node>();
    node->runtime.set_default_model(model);
    node->client = std::make_unique<agent::InProcessClient>(*coordinator_);
    agent::AgentConfig ac;
    ac.heartbeat_interval = coordinator_->config().scheduler.heartbeat_interval;
    ac.gpus = std::move(gpus);
    ac.latency_ms = latency_ms;
    const std::size_t index = nodes_.size();
    agent::AgentDeps deps{*node->client, node->runtime, node->probe, store_, node->identity, &ledger_};
    node->agent = std::make_unique<agent::Agent>(
        ac, deps, [this, index](const agent::AgentEvent& e) { events_.push_back({index, e}); });
    nodes_.push_back(std::move(node));
    return *nodes_.back();
  }

  void run_until(Timestamp end, const std::function<void(Timestamp)>& after_tick = {}) {
    const Duration tick = coordinator_->config().scheduler.heartbeat_interval;
    std::vector<std::optional<Timestamp>> deadlines(nodes_.size());
    for (;;) {
      Timestamp t = next_tick_;
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        deadlines[i] = nodes_[i]->agent->next_deadline();
        if (deadlines[i]) t = std::min(t, *deadlines[i]);
      }
      if (t > end) break;
      clock_.set(t);
      if (next_tick_ <= t) {
        coordinator_->tick(t);
        next_tick_ += tick;
        if (after_tick) after_tick(t);
      }
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (deadlines[i] && *deadlines[i] <= t) nodes_[i]->agent->advance_to(t);
      }
    }
    clock_.set(end);
  }

  Timestamp now() const { return clock_.now(); }
  coord::Coordinator& coordinator() { return *coordinator_; }
  std::vector<std::unique_ptr<Node>>& nodes() { return nodes_; }
  const std::vector<Traced>& events() const { return events_; }

 private:
  ManualClock clock_;
  resilience::MemoryCheckpointStore store_;
  resilience::TransferLedger ledger_;
  std::unique_ptr<coord::Coordinator> coordinator_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::vector<Traced> events_;
  Timestamp next_tick_ = kEpoch;
};

// ---- 1: failure detection ----

Outcome failure_detection() {
  std::mt19937_64 rng(101);
  const std::vector<Duration> intervals = {1s, 5s, 10s, 15s, 30s};
  int exact = 0;
  std::string first_failure;
  for (int trial = 0; trial < kDetectionTrials; ++trial) {
    const Duration interval = intervals[rng() % intervals.size()];
    ManualClock clock;
    coord::Coordinator c(coordinator_config(interval), clock, {false, trial + 1u, {}, nullptr, {}});
    const auto reg = c.register_node(RegistrationRequest{{gpu(0)}, 1.0, std::nullopt});
    // Ticks on a grid with a random phase; heartbeats at random gaps below
    // three intervals, so partial misses happen but never reach the threshold.
    const Duration phase{static_cast<std::int64_t>(rng() % interval.count())};
    Timestamp next_tick = kEpoch + phase;
    std::uniform_int_distribution<std::int64_t> gap(1, 3 * interval.count() - 1);
    const int beats = 1 + static_cast<int>(rng() % 40);
    Timestamp hb = kEpoch;
    std::uint64_t seq = 0;
    std::optional<Timestamp> declared;
    auto tick_until = [&](Timestamp limit) {
      while (next_tick < limit && !declared) {
        clock.set(next_tick);
        c.tick(next_tick);
        if (c.node(reg.node_id).record.state == NodeState::Unavailable) declared = next_tick;
        next_tick += interval;
      }
    };
    for (int b = 0; b < beats && !declared; ++b) {
      hb += Duration{gap(rng)};
      tick_until(hb);
      if (declared) break;
      clock.set(hb);
      c.process_heartbeat(HeartbeatRequest{reg.node_id, ++seq, {}, {}, std::nullopt, false, std::nullopt},
                          reg.token);
    }
    const Timestamp onset = hb;
    tick_until(onset + 10 * interval);
    Timestamp expected = kEpoch + phase;
    while (expected < onset + 3 * interval) expected += interval;
    if (declared && *declared == expected) {
      ++exact;
    } else if (first_failure.empty()) {
      first_failure = "trial " + std::to_string(trial) + ": onset " +
                      std::to_string(ms_since_epoch(onset)) + " ms, expected " +
                      std::to_string(ms_since_epoch(expected)) + " ms, got " +
                      (declared ? std::to_string(ms_since_epoch(*declared)) + " ms" : "none");
    }
  }
  Outcome o;
  o.pass = exact == kDetectionTrials;
  o.detail = std::to_string(exact) + "/" + std::to_string(kDetectionTrials) + " onsets declared at the exact tick";
  if (!first_failure.empty()) o.detail += "; " + first_failure;
  return o;
}

// ---- 2 and 6: campus week ----

struct CampusWeek {
  std::vector<double> graceful_pct;
  std::vector<double> share_pct;
  Duration lost_max{0};
  std::uint64_t attempts = 0;
  std::uint64_t unresolved = 0;
  double slowest_run_s = 0.0;
  double total_s = 0.0;
};

CampusWeek run_campus_week(const sim::SimConfig& base) {
  CampusWeek w;
  const auto all = std::chrono::steady_clock::now();
  for (int seed = 1; seed <= kGracefulSeeds; ++seed) {
    auto config = base;
    config.seed = static_cast<std::uint64_t>(seed);
    const auto start = std::chrono::steady_clock::now();
    const auto report = sim::run(config);
    w.slowest_run_s = std::max(w.slowest_run_s, seconds_since(start));
    const auto& cl = report.cluster;
    if (cl.graceful_migration_success_pct) w.graceful_pct.push_back(*cl.graceful_migration_success_pct);
    w.lost_max = std::max(w.lost_max, cl.graceful_success_lost_max);
    w.attempts += cl.graceful_attempts;
    w.unresolved += cl.graceful_unresolved;
    w.share_pct.push_back(cl.backup_bandwidth_share_pct);
  }
  w.total_s = seconds_since(all);
  return w;
}

Outcome graceful_success(const CampusWeek& w) {
  Outcome o;
  if (w.graceful_pct.empty()) {
    o.detail = "no seed produced a graceful departure";
    return o;
  }
  double mean = 0;
  for (double p : w.graceful_pct) mean += p;
  mean /= static_cast<double>(w.graceful_pct.size());
  o.pass = mean >= kGracefulMinPct && w.lost_max == Duration{0} && w.slowest_run_s < kGracefulMaxRunSeconds;
  o.detail = "mean success " + fmt(mean, 2) + "% over " + std::to_string(w.graceful_pct.size()) +
             " seeds (" + std::to_string(w.attempts) + " departures, " + std::to_string(w.unresolved) +
             " unresolved), max lost after final checkpoint " + fmt(to_seconds(w.lost_max)) +
             " s, slowest run " + fmt(w.slowest_run_s, 2) + " s, all seeds " + fmt(w.total_s, 1) + " s";
  return o;
}

Outcome bandwidth_share(const sim::SimConfig& base, const CampusWeek& w) {
  const double peak = *std::max_element(w.share_pct.begin(), w.share_pct.end());
  int greater = 0;
  double full_min = std::numeric_limits<double>::infinity();
  for (int seed = 1; seed <= kFullOnlySeeds; ++seed) {
    auto config = base;
    config.seed = static_cast<std::uint64_t>(seed);
    for (auto& wl : config.workloads) wl.spec.checkpoint_mode = CheckpointMode::Full;
    const double full = sim::run(config).cluster.backup_bandwidth_share_pct;
    full_min = std::min(full_min, full);
    if (full > w.share_pct[static_cast<std::size_t>(seed - 1)]) ++greater;
  }
  Outcome o;
  o.pass = peak < kBandwidthMaxPct && greater == kFullOnlySeeds;
  o.detail = "incremental peak share " + fmt(peak, 4) + "% (max over " +
             std::to_string(w.share_pct.size()) + " seeds); Full-only greater on " +
             std::to_string(greater) + "/" + std::to_string(kFullOnlySeeds) + " seeds, min " +
             fmt(full_min, 4) + "%";
  return o;
}

// ---- 3: emergency work loss ----

Outcome emergency_loss() {
  const auto base = sim::load_sim_config(scenario("emergency_loss"));
  const Duration interval = base.workloads.front().spec.checkpoint_interval;
  for (const auto& wl : base.workloads) {
    if (wl.spec.checkpoint_interval != interval) return {false, "scenario mixes checkpoint intervals"};
  }
  std::vector<double> samples;
  Duration max_lost{0};
  std::uint64_t seed = 1;
  for (; samples.size() < kEmergencyMinSamples && seed <= 1000; ++seed) {
    auto config = base;
    config.seed = seed;
    const auto report = sim::run(config);
    for (const auto& d : report.displacements) {
      if (d.cause != InterruptionKind::EmergencyDeparture || !d.interrupted || !d.lost_work) continue;
      samples.push_back(to_seconds(*d.lost_work));
      max_lost = std::max(max_lost, *d.lost_work);
    }
  }
  double mean = 0;
  for (double s : samples) mean += s;
  mean /= std::max<std::size_t>(samples.size(), 1);
  const double oracle = sim::expected_lost_work_s(to_seconds(interval));
  Outcome o;
  o.pass = samples.size() >= kEmergencyMinSamples && max_lost <= interval &&
           std::abs(mean - oracle) <= kEmergencyMeanRelTol * oracle;
  o.detail = std::to_string(samples.size()) + " interruptions over " + std::to_string(seed - 1) +
             " seeds: max " + fmt(to_seconds(max_lost)) + " s (bound " + fmt(to_seconds(interval), 0) +
             " s), mean " + fmt(mean, 1) + " s (oracle " + fmt(oracle, 1) + " s +/- " +
             fmt(kEmergencyMeanRelTol * 100, 0) + "%)";
  return o;
}

// ---- 4: training-time inflation ----

Outcome training_overhead() {
  const auto base = sim::load_sim_config(scenario("training_overhead"));
  const auto& wl = base.workloads.front();
  const double tick_s = to_seconds(base.scheduler.heartbeat_interval);
  const double full_s = sim::transfer_seconds(static_cast<double>(wl.state.total_state_bytes),
                                              base.link_bandwidth_mbps);
  // Per interruption: no lost work (final checkpoint within grace), the
  // consolidated final upload, the restore download plus fixed overhead, and
  // on average half a scheduler tick before the relaunch.
  const double restore_s = full_s + to_seconds(base.scheduler.restore_overhead);
  const double requeue_s = full_s + tick_s / 2.0;
  const double ratio = to_seconds(wl.spec.checkpoint_interval) / to_seconds(wl.spec.estimated_duration);
  std::size_t relevant = 0;
  std::size_t in_band = 0;
  std::size_t matched = 0;
  double worst_dev = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int seed = 1; seed <= kOverheadSeeds; ++seed) {
    auto config = base;
    config.seed = static_cast<std::uint64_t>(seed);
    const auto report = sim::run(config);
    for (const auto& job : report.jobs) {
      if (job.interruptions < 2 || job.interruptions > 4 || !job.overhead_pct) continue;
      ++relevant;
      const double sim_pct = *job.overhead_pct;
      const double oracle = sim::expected_overhead_pct(job.interruptions, 0.0, restore_s, requeue_s,
                                                       to_seconds(job.base_time));
      const double dev = std::abs(sim_pct - oracle);
      worst_dev = std::max(worst_dev, dev);
      lo = std::min(lo, sim_pct);
      hi = std::max(hi, sim_pct);
      if (sim_pct >= kOverheadLowPct && sim_pct <= kOverheadHighPct) ++in_band;
      if (dev <= kOverheadOracleTolPp) ++matched;
    }
  }
  Outcome o;
  o.pass = relevant >= kOverheadMinJobs && in_band == relevant && matched == relevant &&
           std::abs(ratio - 0.01) < 1e-9;
  o.detail = std::to_string(relevant) + " jobs with 2-4 interruptions: overhead " + fmt(lo, 2) + ".." +
             fmt(hi, 2) + "%, " + std::to_string(in_band) + " in [3,7], worst deviation from oracle " +
             fmt(worst_dev, 3) + " pp (tolerance " + fmt(kOverheadOracleTolPp, 1) +
             " pp); interval/duration " + fmt(ratio, 4);
  return o;
}

// ---- 5: return migration ----

Outcome return_migration() {
  const auto base = sim::load_sim_config(scenario("return_migration"));
  const auto& spec = base.workloads.front().spec;
  const double window_s =
      to_seconds(spec.affinity_window.value_or(base.scheduler.affinity_window_default));
  const bool single_node = base.nodes.size() == 1;
  const double oracle = 100.0 * sim::return_probability(
                                    window_s, base.temporary_duration_dist.mean_s,
                                    single_node ? std::numeric_limits<double>::infinity()
                                                : to_seconds(spec.estimated_duration));
  std::uint64_t resolved = 0;
  std::uint64_t returned = 0;
  for (int seed = 1; seed <= kReturnSeeds; ++seed) {
    auto config = base;
    config.seed = static_cast<std::uint64_t>(seed);
    const auto report = sim::run(config);
    for (const auto& d : report.displacements) {
      if (d.cause != InterruptionKind::TemporaryUnavailability || !d.relaunched_at) continue;
      ++resolved;
      if (d.returned) ++returned;
    }
  }
  const double pct = resolved ? 100.0 * static_cast<double>(returned) / static_cast<double>(resolved) : 0.0;
  Outcome o;
  o.pass = resolved > 0 && std::abs(pct - oracle) <= kReturnTolPoints;
  o.detail = fmt(pct, 2) + "% returned (" + std::to_string(returned) + "/" + std::to_string(resolved) +
             " displacements, " + std::to_string(kReturnSeeds) + " seeds), oracle " + fmt(oracle, 2) +
             "% +/- " + fmt(kReturnTolPoints, 0) + " points";
  return o;
}

// ---- 7: utilization against static ownership ----

Outcome utilization() {
  const auto base = sim::load_sim_config(scenario("ownership_skew"));
  int ok = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::string first;
  for (int seed = 1; seed <= kUtilizationSeeds; ++seed) {
    auto config = base;
    config.seed = static_cast<std::uint64_t>(seed);
    const auto report = sim::simulate(config);
    const double shared = report.cluster.utilization_pct;
    const double baseline = report.cluster.baseline_utilization_pct.value_or(0.0);
    const double ratio = baseline > 0 ? shared / baseline : std::numeric_limits<double>::infinity();
    if (ratio >= kUtilizationMinRatio) ++ok;
    if (ratio < worst) {
      worst = ratio;
      first = fmt(shared, 2) + "% vs " + fmt(baseline, 2) + "%";
    }
  }
  Outcome o;
  o.pass = ok == kUtilizationSeeds;
  o.detail = std::to_string(ok) + "/" + std::to_string(kUtilizationSeeds) + " seeds at >= " +
             fmt(kUtilizationMinRatio, 1) + "x baseline; worst ratio " + fmt(worst, 2) + " (" + first + ")";
  return o;
}

// ---- randomized clusters for 8 and 10 ----

struct RandomRun {
  bool replay_ok = true;
  bool invariant_ok = true;
  std::string failure;
  std::uint64_t events = 0;
  std::uint64_t allocations = 0;
};

// Every GPU backs at most one allocation, allocations reference existing
// GPUs, and only jobs bound to a node carry one.
std::optional<std::string> single_allocation_violation(const coord::ClusterState& s) {
  std::set<std::pair<NodeId, std::uint32_t>> used;
  const auto queued = s.pending.ordered();
  const std::set<JobId> pending(queued.begin(), queued.end());
  for (const auto& [id, job] : s.jobs) {
    if (job.state == JobState::Pending && !pending.contains(id)) return "pending job missing from queue";
    if (job.state != JobState::Pending && pending.contains(id)) return "non-pending job queued";
    if (!job.allocation) continue;
    if (job.state == JobState::Pending || is_terminal(job.state)) {
      return "job " + std::to_string(id.value) + " in " + std::string(to_string(job.state)) +
             " holds an allocation";
    }
    const auto node = s.nodes.find(job.allocation->node_id);
    if (node == s.nodes.end()) return "allocation on unknown node";
    for (auto g : job.allocation->gpu_indices) {
      const auto& gpus = node->second.record.gpus;
      if (std::none_of(gpus.begin(), gpus.end(), [g](const GpuDescriptor& d) { return d.index == g; })) {
        return "allocation on missing GPU";
      }
      if (!used.insert({job.allocation->node_id, g}).second) {
        return "GPU " + std::to_string(g) + " on " + to_string(job.allocation->node_id) + " allocated twice";
      }
    }
  }
  return std::nullopt;
}

RandomRun random_cluster(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint64_t n) { return rng() % n; };
  Rig rig(seed);
  RandomRun out;
  const std::size_t node_count = 1 + pick(5);
  for (std::size_t i = 0; i < node_count; ++i) {
    std::vector<GpuDescriptor> gpus;
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(pick(4));
    for (std::uint32_t g = 0; g < n; ++g) gpus.push_back(gpu(g, pick(2) ? 24576 : 81920));
    rig.add_node(std::move(gpus), 0.5 + static_cast<double>(pick(20)));
  }
  for (auto& n : rig.nodes()) n->agent->join(kEpoch);

  auto check = [&](Timestamp) {
    if (!out.invariant_ok) return;
    if (auto v = single_allocation_violation(rig.coordinator().state())) {
      out.invariant_ok = false;
      out.failure = "seed " + std::to_string(seed) + ": " + *v;
    }
  };
  auto random_spec = [&] {
    JobSpec s = batch_spec(std::chrono::minutes(5 + pick(60)), std::chrono::seconds(30 + pick(300)),
                           pick(2) ? CheckpointMode::Full : CheckpointMode::Incremental);
    s.gpu_memory_mib_required = pick(4) == 0 ? 40000 : 8192;
    s.priority = static_cast<std::int64_t>(pick(3));
    if (pick(10) == 0) {
      s.mode = JobMode::Interactive;
      s.entrypoint.clear();
    }
    return s;
  };

  Timestamp t = kEpoch;
  const int ops = 20 + static_cast<int>(pick(60));
  for (int op = 0; op < ops && out.invariant_ok; ++op) {
    t += std::chrono::seconds(pick(240));
    rig.run_until(t, check);
    auto& node = *rig.nodes()[pick(rig.nodes().size())];
    auto& agent = *node.agent;
    auto& c = rig.coordinator();
    const auto target = agent.node_id();
    try {
      switch (pick(14)) {
        case 0:
        case 1:
        case 2:
        case 3:
          c.enqueue_job(random_spec());
          break;
        case 4:
          agent.kill_switch(t, pick(2) ? Duration{0} : 30s);
          break;
        case 5:
          agent.drain(t, std::chrono::seconds(pick(120)));
          break;
        case 6:
          if (pick(2)) agent.pause(t); else agent.resume(t);
          break;
        case 7:
          if (agent.suspended()) agent.wake(t); else agent.suspend(t);
          break;
        case 8:
          node.client->set_reachable(!node.client->reachable());
          break;
        case 9:
          if (!agent.in_session()) agent.join(t);
          break;
        case 10:
          if (target) {
            switch (pick(4)) {
              case 0: c.pause_node(*target); break;
              case 1: c.resume_node(*target); break;
              case 2: c.drain_node(*target, std::chrono::seconds(pick(120))); break;
              default: c.kill_node(*target, std::chrono::seconds(pick(30))); break;
            }
          }
          break;
        case 11:
          if (!c.state().jobs.empty()) {
            auto it = c.state().jobs.begin();
            std::advance(it, static_cast<long>(pick(c.state().jobs.size())));
            c.cancel_job(it->first);
          }
          break;
        case 12:
          if (target) c.handle_departure(*target, DepartureKind::Emergency);
          break;
        default:
          if (target) c.handle_departure(*target, DepartureKind::Graceful, std::chrono::seconds(pick(90)));
          break;
      }
    } catch (const Error&) {
      // Rejected operations leave state untouched; the replay check covers it.
    }
    check(t);
  }
  rig.run_until(t + 1h, check);

  const auto& log = rig.coordinator().log();
  out.events = log.size();
  for (const auto& e : log) {
    if (std::holds_alternative<coord::AllocationGranted>(e.payload)) ++out.allocations;
  }
  if (coord::replay_log(log) != rig.coordinator().state()) {
    out.replay_ok = false;
    out.failure = "seed " + std::to_string(seed) + ": replay differs from live state";
    return out;
  }
  std::vector<coord::EventLogEntry> decoded;
  decoded.reserve(log.size());
  for (const auto& e : log) decoded.push_back(coord::event_from_json(Json::parse(coord::to_json(e).dump())));
  if (decoded != log || coord::replay_log(decoded) != rig.coordinator().state()) {
    out.replay_ok = false;
    out.failure = "seed " + std::to_string(seed) + ": serialized log does not replay to live state";
  }
  return out;
}

struct RandomBatch {
  int replay_ok = 0;
  int invariant_ok = 0;
  int crashed = 0;
  std::uint64_t events = 0;
  std::uint64_t allocations = 0;
  std::string replay_failure;
  std::string invariant_failure;
};

RandomBatch random_clusters() {
  RandomBatch b;
  for (int i = 0; i < kRandomScenarios; ++i) {
    const std::uint64_t seed = 10'000 + static_cast<std::uint64_t>(i);
    try {
      const auto r = random_cluster(seed);
      b.events += r.events;
      b.allocations += r.allocations;
      if (r.replay_ok) ++b.replay_ok; else if (b.replay_failure.empty()) b.replay_failure = r.failure;
      if (r.invariant_ok) ++b.invariant_ok; else if (b.invariant_failure.empty()) b.invariant_failure = r.failure;
    } catch (const std::exception& e) {
      ++b.crashed;
      const std::string msg = "seed " + std::to_string(seed) + ": unexpected " + e.what();
      if (b.replay_failure.empty()) b.replay_failure = msg;
      if (b.invariant_failure.empty()) b.invariant_failure = msg;
    }
  }
  return b;
}

// ---- 8: determinism and event sourcing ----

Outcome determinism(const RandomBatch& batch) {
  auto config = sim::load_sim_config(scenario("campus_week"));
  config.seed = 7;
  const auto a = sim::run(config);
  const auto b = sim::run(config);
  config.seed = 8;
  const auto other = sim::run(config);
  const bool same = a.trace_digest == b.trace_digest && sim::to_json(a).dump() == sim::to_json(b).dump();
  Outcome o;
  o.pass = same && batch.replay_ok == kRandomScenarios;
  o.detail = std::string("repeat run digest ") + (same ? "identical" : "DIFFERS") + " (" +
             a.trace_digest.substr(0, 12) + ", other seed " + other.trace_digest.substr(0, 12) + "); " +
             std::to_string(batch.replay_ok) + "/" + std::to_string(kRandomScenarios) +
             " random sequences replay exactly (" + std::to_string(batch.events) + " events)";
  if (!batch.replay_failure.empty()) o.detail += "; " + batch.replay_failure;
  return o;
}

// ---- 9: kill-switch with the coordinator unreachable ----

struct KillTrial {
  bool ok = true;
  std::string failure;
};

KillTrial kill_trial(std::uint64_t seed, Duration grace) {
  std::mt19937_64 rng(seed);
  Rig rig(seed);
  // 20 s per checkpoint: 2.5 GB over the 1000 Mbit/s link, Full every time.
  auto& node = rig.add_node({gpu(0), gpu(1)}, 1.0, {2'500'000'000, 0.1, 10h});
  node.agent->join(kEpoch);
  auto& c = rig.coordinator();
  const std::size_t jobs = 2;
  for (std::size_t j = 0; j < jobs; ++j) c.enqueue_job(batch_spec(10h, 120s, CheckpointMode::Full));
  const Timestamp kill_at = kEpoch + 200s + std::chrono::milliseconds(rng() % 600'000);
  rig.run_until(kill_at);
  KillTrial out;
  auto fail = [&](const std::string& why) {
    if (out.ok) out.failure = "seed " + std::to_string(seed) + ": " + why;
    out.ok = false;
  };
  if (node.agent->live_workloads() != jobs) {
    fail("expected " + std::to_string(jobs) + " live workloads before the kill, saw " +
         std::to_string(node.agent->live_workloads()));
    return out;
  }
  const std::size_t mark = rig.events().size();
  node.client->set_reachable(false);
  node.agent->kill_switch(kill_at, grace);
  const Duration bound = grace == Duration{0} ? kKillNowBound : grace;
  rig.run_until(kill_at + bound);
  if (node.agent->live_workloads() != 0 || node.runtime.live_containers() != 0) {
    fail(std::to_string(node.runtime.live_containers()) + " containers alive " +
         fmt(to_seconds(bound)) + " s after the kill");
  }
  std::map<JobId, Timestamp> durable;
  std::map<JobId, Timestamp> terminated;
  for (std::size_t i = mark; i < rig.events().size(); ++i) {
    const auto& e = rig.events()[i].event;
    if (e.at > kill_at + bound) break;
    switch (e.kind) {
      case agent::AgentEventKind::FinalCheckpointDurable:
        if (terminated.contains(e.job)) fail("final checkpoint after termination");
        durable.emplace(e.job, e.at);
        break;
      case agent::AgentEventKind::FinalCheckpointMissed:
        if (grace > Duration{0}) fail("final checkpoint missed for job " + std::to_string(e.job.value));
        break;
      case agent::AgentEventKind::Terminated:
        terminated.emplace(e.job, e.at);
        break;
      default:
        break;
    }
  }
  if (terminated.size() != jobs) fail(std::to_string(terminated.size()) + " terminations traced");
  if (grace > Duration{0}) {
    for (const auto& [job, at] : terminated) {
      const auto d = durable.find(job);
      if (d == durable.end()) fail("job " + std::to_string(job.value) + " terminated without checkpoint");
      else if (d->second > at) fail("job " + std::to_string(job.value) + " checkpoint after terminate");
    }
  } else if (!durable.empty()) {
    fail("checkpoint taken under grace 0");
  }
  return out;
}

Outcome kill_switch() {
  int now_ok = 0;
  int grace_ok = 0;
  std::string failure;
  for (int i = 0; i < kKillTrials; ++i) {
    const auto a = kill_trial(500 + static_cast<std::uint64_t>(i), Duration{0});
    const auto b = kill_trial(900 + static_cast<std::uint64_t>(i), 60s);
    now_ok += a.ok;
    grace_ok += b.ok;
    if (failure.empty()) failure = !a.ok ? "grace 0 " + a.failure : (!b.ok ? "grace 60 " + b.failure : "");
  }
  Outcome o;
  o.pass = now_ok == kKillTrials && grace_ok == kKillTrials;
  o.detail = "grace 0: " + std::to_string(now_ok) + "/" + std::to_string(kKillTrials) +
             " trials ended every workload within 1 s; grace 60 with 20 s checkpoints: " +
             std::to_string(grace_ok) + "/" + std::to_string(kKillTrials) +
             " trials made each final checkpoint durable before terminating";
  if (!failure.empty()) o.detail += "; " + failure;
  return o;
}

// ---- 10: scheduler properties ----

std::optional<std::string> round_robin_fairness() {
  for (std::size_t k : {2u, 3u, 5u}) {
    for (std::size_t jobs = 1; jobs <= 4 * k; ++jobs) {
      ManualClock clock;
      coord::Coordinator c(coordinator_config(), clock, {false, 1, {}, nullptr, {}});
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<GpuDescriptor> gpus;
        for (std::uint32_t g = 0; g < 8; ++g) gpus.push_back(gpu(g));
        c.register_node(RegistrationRequest{gpus, 2.0, std::nullopt});
      }
      for (std::size_t j = 0; j < jobs; ++j) c.enqueue_job(batch_spec(1h, 600s, CheckpointMode::Incremental));
      c.tick(clock.now());
      std::map<NodeId, std::size_t> counts;
      for (const auto& [id, n] : c.state().nodes) counts[id] = 0;
      for (const auto& [id, job] : c.state().jobs) {
        if (job.allocation) ++counts[job.allocation->node_id];
      }
      std::size_t lo = jobs, hi = 0, total = 0;
      for (const auto& [id, n] : counts) {
        lo = std::min(lo, n);
        hi = std::max(hi, n);
        total += n;
      }
      if (total != jobs || hi - lo > 1) {
        return "k=" + std::to_string(k) + " jobs=" + std::to_string(jobs) + ": counts spread " +
               std::to_string(lo) + ".." + std::to_string(hi) + ", placed " + std::to_string(total);
      }
    }
  }
  return std::nullopt;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::distance(v.begin(), std::max_element(v.begin(), v.end())));
}

std::optional<std::string> latency_scale_invariance() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<double> factors = {1.0 / 1024, 0.5, 2.0, 10.0, 1000.0};
  for (int trial = 0; trial < kScaleTrials; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    coord::SchedulerConfig config;
    config.weight_volatility = unit(rng);
    config.weight_latency = 1.0 - config.weight_volatility;
    std::vector<coord::Candidate> cands;
    for (std::size_t i = 0; i < n; ++i) {
      cands.push_back({sim::sim_node_id(i), 0, 5.0 * unit(rng), 0.1 + 100.0 * unit(rng)});
    }
    const auto best = argmax(coord::score_candidates(cands, config));
    for (double f : factors) {
      auto scaled = cands;
      for (auto& c : scaled) c.latency_ms *= f;
      const auto got = argmax(coord::score_candidates(scaled, config));
      if (got != best) {
        return "trial " + std::to_string(trial) + ": argmax moved from " + std::to_string(best) + " to " +
               std::to_string(got) + " at scale " + fmt(f, 4);
      }
    }
    // End to end: the same cluster with every advertised latency scaled picks
    // the same node.
    if (trial % 10 == 0) {
      std::optional<NodeId> chosen[2];
      for (int s = 0; s < 2; ++s) {
        ManualClock clock;
        coord::Coordinator c(coordinator_config(), clock, {false, 1, {}, nullptr, {}});
        for (const auto& cand : cands) {
          c.register_node(RegistrationRequest{{gpu(0)}, cand.latency_ms * (s ? 10.0 : 1.0), std::nullopt});
        }
        const auto job = c.enqueue_job(batch_spec(1h, 600s, CheckpointMode::Incremental));
        c.tick(clock.now());
        if (const auto& a = c.job(job).allocation) chosen[s] = a->node_id;
      }
      if (!chosen[0] || chosen[0] != chosen[1]) return "trial " + std::to_string(trial) + ": placement moved";
    }
  }
  return std::nullopt;
}

Outcome scheduler_properties(const RandomBatch& batch) {
  const auto fairness = round_robin_fairness();
  const auto scale = latency_scale_invariance();
  Outcome o;
  o.pass = batch.invariant_ok == kRandomScenarios && !fairness && !scale;
  o.detail = std::to_string(batch.invariant_ok) + "/" + std::to_string(kRandomScenarios) +
             " random scenarios keep one allocation per GPU after every tick (" +
             std::to_string(batch.allocations) + " grants); round-robin " +
             (fairness ? "FAILS: " + *fairness : std::string("within 1 on k=2,3,5")) + "; latency scaling " +
             (scale ? "FAILS: " + *scale : "keeps the argmax in " + std::to_string(kScaleTrials) + " trials");
  if (!batch.invariant_failure.empty()) o.detail += "; " + batch.invariant_failure;
  return o;
}

}  // namespace

int main() {
  struct Row {
    int id;
    std::string name;
    std::function<Outcome()> check;
  };
  std::optional<sim::SimConfig> campus;
  std::optional<CampusWeek> week;
  std::optional<RandomBatch> batch;
  auto campus_week = [&]() -> const CampusWeek& {
    if (!week) {
      campus = sim::load_sim_config(scenario("campus_week"));
      week = run_campus_week(*campus);
    }
    return *week;
  };
  auto random_batch = [&]() -> const RandomBatch& {
    if (!batch) batch = random_clusters();
    return *batch;
  };
  const std::vector<Row> rows = {
      {1, "failure-detection", failure_detection},
      {2, "graceful-departure", [&] { return graceful_success(campus_week()); }},
      {3, "emergency-work-loss", emergency_loss},
      {4, "training-overhead", training_overhead},
      {5, "return-migration", return_migration},
      {6, "bandwidth-share",
       [&] {
         const auto& w = campus_week();
         return bandwidth_share(*campus, w);
       }},
      {7, "utilization", utilization},
      {8, "determinism-replay", [&] { return determinism(random_batch()); }},
      {9, "kill-switch", kill_switch},
      {10, "scheduler-properties", [&] { return scheduler_properties(random_batch()); }},
  };
  int failed = 0;
  for (const auto& row : rows) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = row.check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %-21s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", row.id, row.name.c_str(),
                o.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(rows.size()) - failed, rows.size());
  return failed == 0 ? 0 : 1;
}
