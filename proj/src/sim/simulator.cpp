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

#include "gpunion/sim/simulator.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <random>
#include <sstream>

#include "gpunion/agent/agent.hpp"
#include "gpunion/agent/client.hpp"
#include "gpunion/coordinator/coordinator.hpp"
#include "gpunion/core/digest.hpp"
#include "gpunion/sim/trace.hpp"

namespace gpunion::sim {

namespace {

enum class Presence { Online, Suspended, Away };

struct SimNodeState {
  std::size_t index = 0;
  NodeId id;
  std::unique_ptr<agent::SimulatedRuntime> runtime;
  agent::SimulatedProbe probe;
  std::unique_ptr<agent::MemoryIdentityStore> identity;
  std::unique_ptr<agent::InProcessClient> client;
  std::unique_ptr<agent::Agent> agent;
  Presence presence = Presence::Online;
  std::optional<InterruptionKind> cause;
};

struct ContainerTrack {
  std::size_t node = 0;
  std::string id;
  Duration restored{0};
  Duration peak{0};
};

struct JobTrack {
  std::string workload;
  resilience::WorkloadStateModel model;
  std::vector<agent::RunSegment> segments;
  std::vector<ContainerTrack> containers;
  std::optional<std::size_t> open_displacement;
};

struct Scheduled {
  Timestamp at;
  std::uint64_t seq;
  std::function<void()> action;
  bool operator>(const Scheduled& o) const { return std::tie(at, seq) > std::tie(o.at, o.seq); }
};

std::uint64_t rejoin_seed(std::uint64_t seed) {
  std::seed_seq seq{seed, std::uint64_t{0xbeef}};
  std::uint64_t out;
  seq.generate(reinterpret_cast<std::uint32_t*>(&out), reinterpret_cast<std::uint32_t*>(&out) + 2);
  return out;
}

std::string node_label(const NodeId& id) { return id.to_hex().substr(24); }

class Simulation {
 public:
  Simulation(const SimConfig& config, bool baseline)
      : config_(config),
        store_([this](const StorageTarget& t) { return target_available(t); }),
        ledger_(config.link_bandwidth_mbps),
        trace_rng_(rejoin_seed(config.seed)) {
    validate(config_);
    coord::CoordinatorConfig cc;
    cc.scheduler = config_.scheduler;
    cc.scheduler.link_bandwidth_mbps = config_.link_bandwidth_mbps;
    for (const auto& w : config_.workloads) cc.allow_list.insert(w.spec.image_digest);

    // Job ids follow submission order, so ownership is known up front.
    std::vector<std::size_t> order(config_.workloads.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return config_.workloads[a].submit_at < config_.workloads[b].submit_at;
    });
    std::uint64_t next_job = 1;
    std::map<JobId, NodeId> owners;
    for (std::size_t w : order) {
      for (std::uint32_t k = 0; k < config_.workloads[w].count; ++k) {
        JobId job{next_job++};
        submissions_.push_back({w, job});
        owners[job] = sim_node_id(config_.workloads[w].owner);
      }
    }

    coord::Coordinator::Options options;
    options.record_log = false;
    options.token_seed = config_.seed;
    if (baseline) options.policy = std::make_shared<coord::StaticOwnershipPolicy>(owners);
    options.observer = [this](const coord::EventLogEntry& e) { on_coordinator_event(e); };
    coordinator_ = std::make_unique<coord::Coordinator>(cc, clock_, std::move(options));

    nodes_.reserve(config_.nodes.size());
    for (std::size_t i = 0; i < config_.nodes.size(); ++i) add_node(i);
  }

  SimReport run() {
    const Timestamp end = kEpoch + config_.sim_duration;
    for (const auto& [w, job] : submissions_) {
      schedule(kEpoch + config_.workloads[w].submit_at, [this, w = w, job = job] { submit(w, job); });
    }
    for (const auto& e : generate_trace(config_)) {
      schedule(e.at, [this, e] { interrupt(e); });
    }
    for (auto& n : nodes_) n.agent->join(kEpoch);

    Timestamp next_tick = kEpoch;
    const Duration tick = config_.scheduler.heartbeat_interval;
    // Agents only change through their own calls, so deadlines read at the
    // top of an iteration hold through the tick.
    std::vector<std::optional<Timestamp>> deadlines(nodes_.size());
    for (;;) {
      Timestamp t = next_tick;
      if (!queue_.empty()) t = std::min(t, queue_.top().at);
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        deadlines[i] = nodes_[i].agent->next_deadline();
        if (deadlines[i]) t = std::min(t, *deadlines[i]);
      }
      if (t > end) break;
      clock_.set(t);
      if (next_tick <= t) {
        coordinator_->tick(t);
        next_tick += tick;
      }
      // Agents settle work due now (finished uploads first) before the
      // interruptions scheduled for the same instant.
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (deadlines[i] && *deadlines[i] <= t) nodes_[i].agent->advance_to(t);
      }
      while (!queue_.empty() && queue_.top().at <= t) {
        auto action = queue_.top().action;
        queue_.pop();
        action();
      }
    }
    clock_.set(end);
    for (auto& n : nodes_) n.runtime->flush(end);
    return report(end);
  }

 private:
  void add_node(std::size_t i) {
    const auto& spec = config_.nodes[i];
    SimNodeState n;
    n.index = i;
    n.id = sim_node_id(i);
    n.runtime = std::make_unique<agent::SimulatedRuntime>();
    n.runtime->on_segment([this, i](const agent::RunSegment& s) { on_segment(i, s); });
    n.identity = std::make_unique<agent::MemoryIdentityStore>(n.id);
    n.client = std::make_unique<agent::InProcessClient>(*coordinator_);

    agent::AgentConfig ac;
    ac.heartbeat_interval = config_.scheduler.heartbeat_interval;
    ac.grace_default = config_.grace;
    ac.latency_ms = spec.latency_ms;
    ac.link_bandwidth_mbps = config_.link_bandwidth_mbps;
    ac.restore_overhead = config_.scheduler.restore_overhead;
    ac.consolidate_on_departure = config_.consolidate_on_departure;
    for (std::uint32_t g = 0; g < spec.gpu_count; ++g) {
      ac.gpus.push_back(GpuDescriptor{g, spec.gpu_model, spec.gpu_memory_mib, spec.capability});
    }
    nodes_.push_back(std::move(n));
    auto& node = nodes_.back();
    agent::AgentDeps deps{*node.client, *node.runtime, node.probe, store_, *node.identity, &ledger_};
    node.agent = std::make_unique<agent::Agent>(
        ac, deps, [this, i](const agent::AgentEvent& e) { on_agent_event(i, e); });
    node_index_[node.id] = i;
  }

  void schedule(Timestamp at, std::function<void()> action) {
    queue_.push(Scheduled{at, next_event_seq_++, std::move(action)});
  }

  bool target_available(const StorageTarget& target) const {
    if (const auto* node = std::get_if<NodeTarget>(&target)) {
      auto it = node_index_.find(node->node);
      if (it == node_index_.end()) return false;
      const auto& n = nodes_[it->second];
      return n.presence == Presence::Online && n.agent->in_session();
    }
    return true;
  }

  void submit(std::size_t w, JobId job) {
    const auto& wl = config_.workloads[w];
    for (auto& n : nodes_) n.runtime->set_workload(job, wl.state);
    JobTrack track;
    track.workload = wl.name;
    track.model = wl.state;
    jobs_[job] = std::move(track);
    row("JobSubmitted", {}, to_string(job), wl.name);
    if (coordinator_->enqueue_job(wl.spec) != job) {
      throw Error(ErrorCode::CorruptEntry, "job ids out of submission order");
    }
  }

  void interrupt(const InterruptionEvent& e) {
    auto& n = nodes_.at(node_index_.at(e.node));
    auto& stats = kinds_[e.kind];
    const bool away = n.presence != Presence::Online || !n.agent->in_session() ||
                      n.agent->local_state() == NodeState::Draining;
    if (away) {
      ++stats.skipped;
      row("InterruptionSkipped", n.id, {}, std::string(to_string(e.kind)));
      return;
    }
    ++stats.events;
    n.cause = e.kind;
    const Timestamp now = clock_.now();
    row("Interruption", n.id, {},
        std::string(to_string(e.kind)) +
            (e.kind == InterruptionKind::TemporaryUnavailability
                 ? " duration_s=" + std::to_string(to_seconds(e.duration))
                 : ""));
    switch (e.kind) {
      case InterruptionKind::ScheduledDeparture:
        n.agent->drain(now, config_.grace);
        break;
      case InterruptionKind::EmergencyDeparture:
        // Power loss: the departure notice never leaves the machine.
        n.client->set_reachable(false);
        n.agent->kill_switch(now, Duration{0});
        break;
      case InterruptionKind::TemporaryUnavailability: {
        n.presence = Presence::Suspended;
        n.agent->suspend(now);
        const std::size_t i = n.index;
        schedule(now + e.duration, [this, i] {
          auto& node = nodes_[i];
          node.presence = Presence::Online;
          node.agent->wake(clock_.now());
        });
        break;
      }
    }
  }

  void on_departed(std::size_t i) {
    auto& n = nodes_[i];
    n.presence = Presence::Away;
    std::exponential_distribution<double> delay(1.0 / static_cast<double>(config_.rejoin_delay_mean.count()));
    const Timestamp back = clock_.now() + Duration{std::max<std::int64_t>(1, static_cast<std::int64_t>(delay(trace_rng_)))};
    schedule(back, [this, i] {
      auto& node = nodes_[i];
      node.presence = Presence::Online;
      node.client->set_reachable(true);
      node.agent->join(clock_.now());
    });
  }

  void on_segment(std::size_t node, const agent::RunSegment& s) {
    auto it = jobs_.find(s.job);
    if (it == jobs_.end()) return;
    it->second.segments.push_back(s);
    for (auto& c : it->second.containers) {
      if (c.node == node && c.id == s.container) c.peak = std::max(c.peak, s.progress_to);
    }
  }

  void on_agent_event(std::size_t i, const agent::AgentEvent& e) {
    const auto& node = nodes_[i].id;
    const std::string job = e.job.value ? to_string(e.job) : std::string();
    switch (e.kind) {
      case agent::AgentEventKind::Launched: {
        auto& track = jobs_[e.job];
        if (track.open_displacement) {
          auto& d = displacements_[*track.open_displacement];
          d.relaunched_at = e.at;
          d.relaunched_on = node;
          if (!track.containers.empty()) {
            d.lost_work = resilience::lost_work(track.containers.back().peak, e.progress);
          }
          track.open_displacement.reset();
        }
        track.containers.push_back(ContainerTrack{i, e.container, e.progress, e.progress});
        restore_bytes_[e.job] += e.bytes;
        row("Launched", node, job,
            "restored_s=" + fmt(e.progress) + " restore_bytes=" + std::to_string(e.bytes));
        break;
      }
      case agent::AgentEventKind::CheckpointDurable:
      case agent::AgentEventKind::FinalCheckpointDurable: {
        backup_bytes_[e.job] += e.bytes;
        const bool final = e.kind == agent::AgentEventKind::FinalCheckpointDurable;
        if (final) finals_[{i, e.job}] = true;
        row(final ? "FinalCheckpointDurable" : "CheckpointDurable", node, job,
            "seq=" + std::to_string(e.seq) + " bytes=" + std::to_string(e.bytes) +
                " progress_s=" + fmt(e.progress) + (e.full ? " full" : " delta"));
        break;
      }
      case agent::AgentEventKind::FinalCheckpointMissed:
        finals_.try_emplace({i, e.job}, false);
        row("FinalCheckpointMissed", node, job, e.error ? std::string(to_string(*e.error)) : "");
        break;
      case agent::AgentEventKind::Departed:
        row("Departed", node, {}, {});
        on_departed(i);
        break;
      case agent::AgentEventKind::Started:
        row("Started", node, job, "progress_s=" + fmt(e.progress));
        break;
      case agent::AgentEventKind::Terminated:
        row("Terminated", node, job, "progress_s=" + fmt(e.progress));
        break;
      case agent::AgentEventKind::Completed:
        row("Exited", node, job, "progress_s=" + fmt(e.progress));
        break;
      case agent::AgentEventKind::CheckpointSkipped:
      case agent::AgentEventKind::LaunchFailed:
      case agent::AgentEventKind::RegistrationFailed:
        row(std::string(to_string(e.kind)), node, job, e.error ? std::string(to_string(*e.error)) : "");
        break;
      case agent::AgentEventKind::Registered:
      case agent::AgentEventKind::Suspended:
      case agent::AgentEventKind::Woke:
        row(std::string(to_string(e.kind)), node, job, {});
        break;
      case agent::AgentEventKind::HeartbeatFailed:
        break;
    }
  }

  void on_coordinator_event(const coord::EventLogEntry& entry) {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, coord::MigrationStarted>) {
            Displacement d;
            d.job = p.job;
            d.from = p.from;
            d.at = entry.at;
            d.reason = p.reason;
            d.interrupted = p.interrupted;
            const std::size_t i = node_index_.at(p.from);
            d.cause = nodes_[i].cause;
            if (auto it = finals_.find({i, p.job}); it != finals_.end()) {
              d.final_attempted = true;
              d.final_durable = it->second;
              finals_.erase(it);
            }
            jobs_[p.job].open_displacement = displacements_.size();
            displacements_.push_back(d);
            row("MigrationStarted", p.from, to_string(p.job), p.reason);
          } else if constexpr (std::is_same_v<T, coord::AllocationGranted>) {
            auto& track = jobs_[p.allocation.job_id];
            if (p.via_affinity && track.open_displacement) {
              displacements_[*track.open_displacement].returned = true;
            }
            row("AllocationGranted", p.allocation.node_id, to_string(p.allocation.job_id),
                p.via_affinity ? "affinity" : "scored");
          } else if constexpr (std::is_same_v<T, coord::NodeStateChanged>) {
            row("NodeState", p.node, {},
                std::string(to_string(p.from)) + "->" + std::string(to_string(p.to)) + " " + p.reason);
          } else if constexpr (std::is_same_v<T, coord::JobStateChanged>) {
            if (is_terminal(p.to) || p.to == JobState::Migrating) {
              row("JobState", {}, to_string(p.job),
                  std::string(to_string(p.from)) + "->" + std::string(to_string(p.to)) + " " + p.reason);
            }
          }
        },
        entry.payload);
  }

  static std::string fmt(Duration d) {
    std::ostringstream out;
    out << to_seconds(d);
    return out.str();
  }

  void row(std::string event, std::optional<NodeId> node, std::string job, std::string detail) {
    trace_.push_back(TraceRow{clock_.now(), std::move(event), node ? node_label(*node) : std::string(),
                              std::move(job), std::move(detail)});
  }

  SimReport report(Timestamp end) {
    SimReport r;
    r.scenario = config_.name;
    r.seed = config_.seed;
    r.sim_duration = config_.sim_duration;
    r.displacements = displacements_;

    Duration busy{0};
    const auto& state = coordinator_->state();
    for (auto& [job, track] : jobs_) {
      const auto& record = state.jobs.at(job);
      JobReport j;
      j.job = job;
      j.workload = track.workload;
      j.final_state = std::string(to_string(record.state));
      j.interruptions = record.interruptions;
      j.migrations = record.migrations;
      j.base_time = track.model.duration;
      for (const auto& d : displacements_) {
        if (d.job != job) continue;
        if (d.returned) ++j.returns;
        if (d.lost_work) j.lost_work += *d.lost_work;
      }
      auto segments = track.segments;
      std::sort(segments.begin(), segments.end(),
                [](const auto& a, const auto& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
      Duration gaps{0};
      std::optional<Timestamp> covered;
      for (const auto& s : segments) {
        j.run_time += s.to - s.from;
        if (covered && s.from > *covered) gaps += s.from - *covered;
        covered = covered ? std::max(*covered, s.to) : s.to;
      }
      busy += j.run_time;
      if (record.state == JobState::Completed && !segments.empty()) {
        j.total_time = *covered - segments.front().from;
        j.down_time = gaps;
        j.overhead_pct = 100.0 * to_seconds(*j.total_time - j.base_time) / to_seconds(j.base_time);
        j.ledger_identity_ok = j.base_time + j.lost_work + gaps == *j.total_time;
      }
      j.backup_bytes = backup_bytes_[job];
      j.restore_bytes = restore_bytes_[job];
      j.bandwidth_ok = j.backup_bytes == ledger_.completed_bytes(job, resilience::TransferKind::Backup) &&
                       j.restore_bytes == ledger_.completed_bytes(job, resilience::TransferKind::Restore);
      auto& c = r.cluster;
      ++c.jobs_total;
      if (record.state == JobState::Completed) ++c.jobs_completed;
      if (record.state == JobState::Lost) ++c.jobs_lost;
      c.backup_bytes += j.backup_bytes;
      c.restore_bytes += j.restore_bytes;
      r.jobs.push_back(std::move(j));
    }

    auto& c = r.cluster;
    c.by_kind = kinds_;
    Duration lost_sum{0};
    std::uint64_t resolved = 0, returned = 0;
    for (const auto& d : displacements_) {
      if (d.cause) {
        auto& k = c.by_kind[*d.cause];
        ++k.displaced;
        if (d.returned) ++k.returned;
        if (d.lost_work) {
          ++k.relaunched;
          k.lost_total += *d.lost_work;
          k.lost_max = std::max(k.lost_max, *d.lost_work);
        }
      }
      if (d.relaunched_at) {
        ++resolved;
        if (d.returned) ++returned;
        if (d.lost_work) lost_sum += *d.lost_work;
      }
      if (d.cause == InterruptionKind::ScheduledDeparture && d.final_attempted) {
        if (!d.relaunched_at) {
          ++c.graceful_unresolved;
          continue;
        }
        ++c.graceful_attempts;
        if (d.final_durable) {
          ++c.graceful_successes;
          c.graceful_success_lost_max = std::max(c.graceful_success_lost_max, d.lost_work.value_or(Duration{0}));
        }
      }
    }
    if (c.graceful_attempts) {
      c.graceful_migration_success_pct = 100.0 * static_cast<double>(c.graceful_successes) /
                                         static_cast<double>(c.graceful_attempts);
    }
    if (resolved) {
      c.return_migration_pct = 100.0 * static_cast<double>(returned) / static_cast<double>(resolved);
      c.mean_lost_work_s = to_seconds(lost_sum) / static_cast<double>(resolved);
    }
    std::uint64_t gpus = 0;
    for (const auto& n : config_.nodes) gpus += n.gpu_count;
    c.utilization_pct = 100.0 * static_cast<double>(busy.count()) /
                        (static_cast<double>(gpus) * static_cast<double>((end - kEpoch).count()));
    r.transfers = ledger_.transfers();
    c.backup_bandwidth_share_pct = bandwidth_share(r, config_.campus_bandwidth_mbps);
    r.trace = std::move(trace_);
    r.trace_digest = sha256_hex(trace_csv(r.trace));
    return r;
  }

  const SimConfig& config_;
  ManualClock clock_;
  resilience::MemoryCheckpointStore store_;
  resilience::TransferLedger ledger_;
  std::mt19937_64 trace_rng_;
  std::unique_ptr<coord::Coordinator> coordinator_;
  std::vector<SimNodeState> nodes_;
  std::map<NodeId, std::size_t> node_index_;
  std::vector<std::pair<std::size_t, JobId>> submissions_;
  std::priority_queue<Scheduled, std::vector<Scheduled>, std::greater<>> queue_;
  std::uint64_t next_event_seq_ = 0;

  std::map<JobId, JobTrack> jobs_;
  std::map<std::pair<std::size_t, JobId>, bool> finals_;
  std::vector<Displacement> displacements_;
  std::map<InterruptionKind, KindStats> kinds_;
  std::map<JobId, std::uint64_t> backup_bytes_;
  std::map<JobId, std::uint64_t> restore_bytes_;
  std::vector<TraceRow> trace_;
};

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json optional_seconds(const std::optional<Duration>& v) {
  return v ? Json(encode_seconds(*v)) : Json(nullptr);
}

}  // namespace

SimReport run(const SimConfig& config) { return Simulation(config, false).run(); }

double run_baseline(const SimConfig& config) {
  return Simulation(config, true).run().cluster.utilization_pct;
}

SimReport simulate(const SimConfig& config) {
  SimReport report = run(config);
  report.cluster.baseline_utilization_pct = run_baseline(config);
  return report;
}

double bandwidth_share(const SimReport& report, double campus_bandwidth_mbps) {
  return resilience::peak_backup_share_pct(report.transfers, campus_bandwidth_mbps);
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::string out = "at_ms,event,node,job,detail\n";
  for (const auto& r : rows) {
    out += std::to_string(ms_since_epoch(r.at));
    for (const std::string* field : {&r.event, &r.node, &r.job, &r.detail}) {
      out += ',';
      if (field->find_first_of(",\"\n") == std::string::npos) {
        out += *field;
      } else {
        out += '"';
        for (char ch : *field) {
          if (ch == '"') out += '"';
          out += ch;
        }
        out += '"';
      }
    }
    out += '\n';
  }
  return out;
}

Json to_json(const SimReport& r) {
  Json jobs = Json::array();
  for (const auto& j : r.jobs) {
    jobs.push_back({{"job_id", j.job},
                    {"workload", j.workload},
                    {"final_state", j.final_state},
                    {"interruptions", j.interruptions},
                    {"migrations", j.migrations},
                    {"returns", j.returns},
                    {"lost_work_s", encode_seconds(j.lost_work)},
                    {"total_time_s", optional_seconds(j.total_time)},
                    {"base_time_s", encode_seconds(j.base_time)},
                    {"down_time_s", optional_seconds(j.down_time)},
                    {"run_time_s", encode_seconds(j.run_time)},
                    {"overhead_pct", optional_number(j.overhead_pct)},
                    {"ledger_identity_ok", j.ledger_identity_ok},
                    {"backup_bytes", j.backup_bytes},
                    {"restore_bytes", j.restore_bytes},
                    {"bandwidth_ok", j.bandwidth_ok}});
  }
  Json displacements = Json::array();
  for (const auto& d : r.displacements) {
    displacements.push_back(
        {{"job_id", d.job},
         {"from", d.from},
         {"at", encode_time(d.at)},
         {"cause", d.cause ? Json(*d.cause) : Json(nullptr)},
         {"reason", d.reason},
         {"interrupted", d.interrupted},
         {"final_attempted", d.final_attempted},
         {"final_durable", d.final_durable},
         {"returned", d.returned},
         {"relaunched_at", d.relaunched_at ? Json(encode_time(*d.relaunched_at)) : Json(nullptr)},
         {"relaunched_on", d.relaunched_on ? Json(*d.relaunched_on) : Json(nullptr)},
         {"lost_work_s", optional_seconds(d.lost_work)}});
  }
  const auto& c = r.cluster;
  Json kinds = Json::object();
  for (const auto& [kind, k] : c.by_kind) {
    kinds[std::string(to_string(kind))] = {
        {"events", k.events},
        {"skipped", k.skipped},
        {"displaced", k.displaced},
        {"returned", k.returned},
        {"relaunched", k.relaunched},
        {"mean_lost_work_s", k.relaunched ? Json(to_seconds(k.lost_total) / static_cast<double>(k.relaunched))
                                          : Json(nullptr)},
        {"max_lost_work_s", encode_seconds(k.lost_max)}};
  }
  Json cluster = {{"graceful_migration_success_pct", optional_number(c.graceful_migration_success_pct)},
                  {"graceful_attempts", c.graceful_attempts},
                  {"graceful_successes", c.graceful_successes},
                  {"graceful_unresolved", c.graceful_unresolved},
                  {"graceful_success_lost_max_s", encode_seconds(c.graceful_success_lost_max)},
                  {"return_migration_pct", optional_number(c.return_migration_pct)},
                  {"mean_lost_work_s", optional_number(c.mean_lost_work_s)},
                  {"backup_bandwidth_share_pct", c.backup_bandwidth_share_pct},
                  {"utilization_pct", c.utilization_pct},
                  {"baseline_utilization_pct", optional_number(c.baseline_utilization_pct)},
                  {"jobs_total", c.jobs_total},
                  {"jobs_completed", c.jobs_completed},
                  {"jobs_lost", c.jobs_lost},
                  {"backup_bytes", c.backup_bytes},
                  {"restore_bytes", c.restore_bytes},
                  {"by_kind", kinds}};
  return Json{{"schema", "gpunion.simreport/v1"},
              {"scenario", r.scenario},
              {"seed", r.seed},
              {"sim_duration_s", encode_seconds(r.sim_duration)},
              {"cluster", cluster},
              {"jobs", jobs},
              {"displacements", displacements},
              {"trace_digest", r.trace_digest}};
}

}  // namespace gpunion::sim
