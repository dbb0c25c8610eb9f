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

#include "gpunion/cli/cli.hpp"

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "httplib.h"

#include "gpunion/agent/daemon.hpp"
#include "gpunion/coordinator/server.hpp"
#include "gpunion/core/http.hpp"
#include "gpunion/core/wire.hpp"
#include "gpunion/sim/report.hpp"

namespace gpunion::cli {

namespace {

constexpr const char* kDefaultCoordinator = "http://127.0.0.1:8470";
constexpr const char* kDefaultAgent = "http://127.0.0.1:8471";
constexpr auto kRequestTimeout = std::chrono::seconds(5);

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

// Blocks until SIGINT or SIGTERM.
void wait_for_signal() {
  g_stop = false;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  std::signal(SIGINT, SIG_DFL);
  std::signal(SIGTERM, SIG_DFL);
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

struct Context {
  std::string coordinator;
  std::string token;
  std::string agent;
  bool json = false;
  std::string command;
  std::ostream& out;
  std::ostream& err;
};

// One REST endpoint family. Transport failures map to `unreachable`.
class Endpoint {
 public:
  Endpoint(std::string base, std::string token, ErrorCode unreachable)
      : base_(std::move(base)), token_(std::move(token)), unreachable_(unreachable) {
    while (!base_.empty() && base_.back() == '/') base_.pop_back();
  }

  Json get(const std::string& path) const {
    return call(path, [&](httplib::Client& c, const httplib::Headers& h) { return c.Get(path, h); });
  }
  Json post(const std::string& path, const Json& body = Json::object(),
            std::chrono::seconds timeout = kRequestTimeout) const {
    return call(
        path, [&](httplib::Client& c, const httplib::Headers& h) {
          return c.Post(path, h, body.dump(), "application/json");
        },
        timeout);
  }
  Json del(const std::string& path) const {
    return call(path, [&](httplib::Client& c, const httplib::Headers& h) { return c.Delete(path, h); });
  }

 private:
  template <typename F>
  Json call(const std::string& path, F&& send, std::chrono::seconds timeout = kRequestTimeout) const {
    httplib::Client client(base_);
    client.set_connection_timeout(kRequestTimeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(kRequestTimeout);
    httplib::Headers headers;
    if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
    auto res = send(client, headers);
    if (!res) throw Error(unreachable_, base_ + path + ": " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300) throw_http_error(res->status, res->body);
    Json j = Json::parse(res->body, nullptr, false);
    if (j.is_discarded()) throw Error(unreachable_, base_ + path + ": malformed response body");
    return j;
  }

  std::string base_;
  std::string token_;
  ErrorCode unreachable_;
};

Endpoint coordinator(const Context& ctx) {
  return Endpoint(ctx.coordinator, ctx.token, ErrorCode::CoordinatorUnreachable);
}
Endpoint local_agent(const Context& ctx) { return Endpoint(ctx.agent, "", ErrorCode::AgentNotRunning); }

void emit(const Context& ctx, const Json& result, const std::string& human) {
  if (ctx.json) {
    ctx.out << Json{{"schema", kSchema}, {"command", ctx.command}, {"ok", true}, {"result", result}}.dump(2)
            << '\n';
  } else {
    ctx.out << human;
  }
}

std::string fixed(double v, int precision = 1) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::ValidationFailed, path + " is not valid JSON");
  return j;
}

JobId parse_job_id(const std::string& text) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used == text.size()) return JobId{v};
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ValidationFailed, "malformed job id: " + text);
}

// Responses are decoded into domain records and re-encoded, so the printed
// JSON is exactly the wire schema.
JobRecord decode_job(const Json& j) {
  try {
    return j.get<JobRecord>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::CoordinatorUnreachable, std::string("unexpected job document: ") + e.what());
  }
}

std::string job_detail(const JobRecord& job) {
  std::ostringstream out;
  out << "job:           " << to_string(job.id) << '\n'
      << "state:         " << to_string(job.state) << '\n'
      << "image:         " << job.spec.image_ref << '\n'
      << "mode:          " << to_string(job.spec.mode) << '\n'
      << "priority:      " << job.spec.priority << '\n'
      << "node:          " << (job.allocation ? to_string(job.allocation->node_id) : "-") << '\n'
      << "interruptions: " << job.interruptions << '\n'
      << "migrations:    " << job.migrations << '\n'
      << "checkpoints:   " << job.checkpoints.size() << '\n';
  if (!job.reason.empty()) out << "reason:        " << job.reason << '\n';
  return out.str();
}

// ---- command bodies ----

void job_submit(Context& ctx, const std::string& file) {
  const Json doc = read_json_file(file);
  JobSpec spec;
  try {
    spec = doc.get<JobSpec>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ValidationFailed, file + ": " + e.what());
  }
  const Json res = coordinator(ctx).post("/v1/jobs", Json(spec));
  const auto id = res.at("job_id").get<JobId>();
  emit(ctx, Json{{"job_id", id}}, "submitted job " + to_string(id) + "\n");
}

void job_status(Context& ctx, const std::string& id) {
  const auto job = decode_job(coordinator(ctx).get("/v1/jobs/" + to_string(parse_job_id(id))));
  emit(ctx, Json(job), job_detail(job));
}

void job_list(Context& ctx) {
  const Json res = coordinator(ctx).get("/v1/jobs");
  Json jobs = Json::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& j : res) {
    const auto job = decode_job(j);
    jobs.push_back(job);
    rows.push_back({to_string(job.id), std::string(to_string(job.state)), std::to_string(job.spec.priority),
                    job.allocation ? to_string(job.allocation->node_id) : "-", job.spec.image_ref});
  }
  emit(ctx, jobs, sim::render_table({"job", "state", "priority", "node", "image"}, rows));
}

void job_cancel(Context& ctx, const std::string& id) {
  const auto job = decode_job(coordinator(ctx).del("/v1/jobs/" + to_string(parse_job_id(id))));
  emit(ctx, Json(job), "job " + to_string(job.id) + " " + std::string(to_string(job.state)) + "\n");
}

void job_checkpoints(Context& ctx, const std::string& id) {
  const Json res = coordinator(ctx).get("/v1/jobs/" + to_string(parse_job_id(id)) + "/checkpoints");
  const auto list = res.at("checkpoints").get<std::vector<CheckpointManifest>>();
  std::vector<std::vector<std::string>> rows;
  for (const auto& m : list) {
    rows.push_back({std::to_string(m.seq), m.is_full() ? "Full" : "Incremental",
                    m.parent_seq ? std::to_string(*m.parent_seq) : "-", std::to_string(m.payload_bytes),
                    std::to_string(ms_since_epoch(m.created_at)), m.content_hash.substr(0, 12)});
  }
  emit(ctx, Json{{"job_id", res.at("job_id").get<JobId>()}, {"checkpoints", list}},
       sim::render_table({"seq", "kind", "parent", "bytes", "created_ms", "hash"}, rows));
}

void cluster_summary(Context& ctx) {
  const Json s = coordinator(ctx).get("/v1/cluster/summary");
  std::vector<std::vector<std::string>> rows;
  for (const auto& [state, n] : s.at("nodes").items()) rows.push_back({"nodes", state, n.dump()});
  for (const auto& [state, n] : s.at("jobs").items()) rows.push_back({"jobs", state, n.dump()});
  std::ostringstream out;
  out << sim::render_table({"kind", "state", "count"}, rows);
  out << "gpus busy " << s.at("gpus_busy").dump() << "/" << s.at("gpus_total").dump() << ", pending "
      << s.at("pending").dump() << ", migrations " << s.at("migrations_total").dump() << '\n';
  emit(ctx, s, out.str());
}

std::string agent_line(const Json& a) {
  std::ostringstream out;
  out << "node " << a.value("node_id", std::string("-")) << ": " << a.value("state", std::string("-")) << ", "
      << a.value("live_workloads", 0) << " live workloads\n";
  return out.str();
}

void node_toggle(Context& ctx, const std::string& action, const char* done, const char* already) {
  const Json res = local_agent(ctx).post("/local/" + action);
  if (!res.value("changed", true)) ctx.err << "warning: node " << already << '\n';
  emit(ctx, res, std::string("node ") + (res.value("changed", true) ? done : already) + "\n");
}

void node_status(Context& ctx) {
  const Json res = local_agent(ctx).get("/local/status");
  std::ostringstream out;
  out << agent_line(res);
  std::vector<std::vector<std::string>> rows;
  for (const auto& w : res.value("workloads", Json::array())) {
    rows.push_back({w.at("job_id").get<std::string>(), w.at("phase").get<std::string>(),
                    fixed(w.at("progress_s").get<double>()), w.at("checkpoints").dump()});
  }
  if (!rows.empty()) out << sim::render_table({"job", "phase", "progress_s", "checkpoints"}, rows);
  emit(ctx, res, out.str());
}

std::string grace_query(std::optional<double> grace) {
  if (!grace) return {};
  if (*grace < 0) throw Error(ErrorCode::ValidationFailed, "grace must be >= 0");
  std::ostringstream q;
  q << "?grace=" << *grace;
  return q.str();
}

void node_drain(Context& ctx, std::optional<double> grace) {
  const Json res = local_agent(ctx).post("/local/drain" + grace_query(grace));
  emit(ctx, res, "draining; " + agent_line(res.at("agent")));
}

void node_kill(Context& ctx, double grace) {
  const auto wait = std::chrono::seconds(static_cast<long>(grace) + 15);
  const Json res = local_agent(ctx).post("/local/kill" + grace_query(grace), Json::object(), wait);
  const auto live = res.at("agent").value("live_workloads", 0);
  if (live != 0) {
    throw Error(ErrorCode::RuntimeFailure, std::to_string(live) + " workloads still alive after kill");
  }
  emit(ctx, res, "killed in " + fixed(res.value("waited_s", 0.0), 2) + " s; " + agent_line(res.at("agent")));
}

void node_join(Context& ctx, const std::string& config_path, bool coordinator_given) {
  // A running agent just rejoins.
  try {
    const Json res = local_agent(ctx).post("/local/join");
    emit(ctx, res, "rejoined; " + agent_line(res.at("agent")));
    return;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AgentNotRunning) throw;
  }
  agent::AgentConfig config = config_path.empty() ? agent::AgentConfig{}
                                                  : agent::load_agent_config(config_path);
  if (coordinator_given) config.coordinator_url = ctx.coordinator;
  if (config.gpus.empty()) config.gpus.push_back(GpuDescriptor{0, "sim-gpu", 24576, {8, 6}});
  SystemClock clock;
  agent::AgentDaemon daemon(config, clock);
  const int port = daemon.start();
  const Json started{{"control", config.control_bind + ":" + std::to_string(port)},
                     {"coordinator", config.coordinator_url},
                     {"agent", daemon.status()}};
  emit(ctx, started, "agent running; control on " + config.control_bind + ":" + std::to_string(port) +
                         "; " + agent_line(started.at("agent")));
  ctx.out.flush();
  wait_for_signal();
  daemon.stop();
}

void coordinator_serve(Context& ctx, const std::string& config_path, const std::string& bind,
                       std::optional<int> port, const std::string& ui_dir, const std::string& event_log) {
  coord::CoordinatorConfig config =
      config_path.empty() ? coord::CoordinatorConfig{} : coord::load_coordinator_config(config_path);
  if (!bind.empty()) config.bind_address = bind;
  if (port) config.port = *port;
  if (!ui_dir.empty()) config.ui_dir = ui_dir;
  if (!event_log.empty()) config.event_log_path = event_log;
  if (config.api_token.empty()) config.api_token = ctx.token;
  SystemClock clock;
  coord::CoordinatorServer server(config, clock);
  const int bound = server.start();
  emit(ctx, Json{{"listen", config.bind_address + ":" + std::to_string(bound)}},
       "coordinator listening on " + config.bind_address + ":" + std::to_string(bound) + "\n");
  ctx.out.flush();
  wait_for_signal();
  server.stop();
}

void sim_run(Context& ctx, const std::string& config_path, std::optional<std::uint64_t> seed,
             const std::string& out_dir) {
  auto config = sim::load_sim_config(config_path);
  if (seed) config.seed = *seed;
  const auto report = sim::simulate(config);
  sim::write_outputs(report, out_dir);
  const Json doc = sim::to_json(report);
  emit(ctx,
       Json{{"out", out_dir},
            {"scenario", report.scenario},
            {"seed", report.seed},
            {"trace_digest", report.trace_digest},
            {"cluster", doc.at("cluster")}},
       sim::render_tables(doc) + "wrote " + out_dir + "/report.json, trace.csv, plots/\n");
}

void report_render(Context& ctx, const std::string& path, const std::string& plots) {
  const Json doc = read_json_file(path);
  std::string tables;
  try {
    tables = sim::render_tables(doc);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ValidationFailed, path + " is not a simulation report: " + e.what());
  }
  if (!plots.empty()) sim::write_plots(doc, plots);
  emit(ctx, Json{{"report", path}, {"plots", plots.empty() ? Json() : Json(plots)}, {"tables", tables}},
       tables);
}

}  // namespace

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::DigestNotTrusted:
    case ErrorCode::MalformedDigest:
    case ErrorCode::NonPositiveResource:
    case ErrorCode::ValidationFailed:
    case ErrorCode::InvalidConfig:
    case ErrorCode::EmptyGpuList:
    case ErrorCode::IllegalTransition:
      return 2;
    case ErrorCode::NotFound:
    case ErrorCode::UnknownNode:
      return 3;
    case ErrorCode::Unauthorized:
      return 4;
    case ErrorCode::CoordinatorUnreachable:
    case ErrorCode::AgentNotRunning:
      return 5;
    default:
      return 1;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"GPUnion campus GPU sharing: coordinator, provider agent, jobs and simulator"};
  app.require_subcommand(1);
  std::string coordinator_flag;
  std::string token_flag;
  std::string agent_flag;
  std::string output = "human";
  app.add_option("--coordinator", coordinator_flag, "Coordinator URL (env GPUNION_COORDINATOR)");
  app.add_option("--token", token_flag, "Operator token (env GPUNION_TOKEN)");
  app.add_option("--agent", agent_flag, "Local agent control URL (env GPUNION_AGENT)");
  app.add_option("-o,--output", output, "Output format")->check(CLI::IsMember({"human", "json"}));

  Context ctx{"", "", "", false, "", out, err};
  bool coordinator_given = false;
  std::function<void()> action;
  auto bind = [&](CLI::App* sub, std::string name, std::function<void()> body) {
    sub->callback([&ctx, &action, name = std::move(name), body = std::move(body)] {
      ctx.command = name;
      action = body;
    });
  };

  // coordinator
  auto* coord_cmd = app.add_subcommand("coordinator", "Run the coordinator")->require_subcommand(1);
  std::string serve_config, serve_bind, serve_ui, serve_log;
  std::optional<int> serve_port;
  auto* serve = coord_cmd->add_subcommand("serve", "Serve the REST API until interrupted");
  serve->add_option("--config", serve_config, "Coordinator config JSON");
  serve->add_option("--bind", serve_bind, "Bind address");
  serve->add_option("--port", serve_port, "Port (0 picks a free one)");
  serve->add_option("--ui-dir", serve_ui, "Dashboard bundle served at /ui");
  serve->add_option("--event-log", serve_log, "Append-only event log file");
  bind(serve, "coordinator serve",
       [&] { coordinator_serve(ctx, serve_config, serve_bind, serve_port, serve_ui, serve_log); });

  // node
  auto* node = app.add_subcommand("node", "Provider controls for the local agent")->require_subcommand(1);
  std::string join_config;
  auto* join = node->add_subcommand("join", "Start the agent, or rejoin a running one");
  join->add_option("--config", join_config, "Agent config JSON");
  bind(join, "node join", [&] { node_join(ctx, join_config, coordinator_given); });
  bind(node->add_subcommand("pause", "Stop accepting new work"), "node pause",
       [&] { node_toggle(ctx, "pause", "paused", "already paused"); });
  bind(node->add_subcommand("resume", "Accept work again"), "node resume",
       [&] { node_toggle(ctx, "resume", "resumed", "already active"); });
  bind(node->add_subcommand("status", "Show the local agent"), "node status", [&] { node_status(ctx); });
  std::optional<double> drain_grace;
  auto* drain = node->add_subcommand("drain", "Checkpoint every workload and leave");
  drain->add_option("--grace", drain_grace, "Seconds allowed for final checkpoints");
  bind(drain, "node drain", [&] { node_drain(ctx, drain_grace); });
  double kill_grace = 0;
  auto* kill = node->add_subcommand("kill", "Terminate every workload now");
  kill->add_option("--grace", kill_grace, "Seconds allowed for best-effort checkpoints")->required();
  bind(kill, "node kill", [&] { node_kill(ctx, kill_grace); });

  // job
  auto* job = app.add_subcommand("job", "Submit and inspect jobs")->require_subcommand(1);
  std::string spec_file, job_id;
  auto* submit = job->add_subcommand("submit", "Submit a job spec");
  submit->add_option("-f,--file", spec_file, "JobSpec JSON")->required();
  bind(submit, "job submit", [&] { job_submit(ctx, spec_file); });
  auto* status = job->add_subcommand("status", "Show one job");
  status->add_option("id", job_id)->required();
  bind(status, "job status", [&] { job_status(ctx, job_id); });
  bind(job->add_subcommand("list", "List jobs"), "job list", [&] { job_list(ctx); });
  auto* cancel = job->add_subcommand("cancel", "Cancel a job");
  cancel->add_option("id", job_id)->required();
  bind(cancel, "job cancel", [&] { job_cancel(ctx, job_id); });
  auto* checkpoints = job->add_subcommand("checkpoints", "List a job's checkpoints");
  checkpoints->add_option("id", job_id)->required();
  bind(checkpoints, "job checkpoints", [&] { job_checkpoints(ctx, job_id); });

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Cluster views")->require_subcommand(1);
  bind(cluster->add_subcommand("summary", "Node and job counts"), "cluster summary",
       [&] { cluster_summary(ctx); });

  // sim
  auto* sim_cmd = app.add_subcommand("sim", "Churn simulator")->require_subcommand(1);
  std::string sim_config, sim_out = "simout";
  std::optional<std::uint64_t> sim_seed;
  auto* run = sim_cmd->add_subcommand("run", "Run a scenario and write report.json, trace.csv, plots/");
  run->add_option("--config", sim_config, "Scenario JSON")->required();
  run->add_option("--seed", sim_seed, "Override the scenario seed");
  run->add_option("--out", sim_out, "Output directory");
  bind(run, "sim run", [&] { sim_run(ctx, sim_config, sim_seed, sim_out); });

  // report
  auto* report = app.add_subcommand("report", "Simulation reports")->require_subcommand(1);
  std::string report_path, plots_dir;
  auto* render = report->add_subcommand("render", "Render tables and plots from report.json");
  render->add_option("report", report_path)->required();
  render->add_option("--plots", plots_dir, "Write plot files to this directory");
  bind(render, "report render", [&] { report_render(ctx, report_path, plots_dir); });

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  ctx.coordinator = coordinator_flag.empty() ? env_or("GPUNION_COORDINATOR", "") : coordinator_flag;
  coordinator_given = !ctx.coordinator.empty();
  if (!coordinator_given) ctx.coordinator = kDefaultCoordinator;
  ctx.token = token_flag.empty() ? env_or("GPUNION_TOKEN", "") : token_flag;
  ctx.agent = agent_flag.empty() ? env_or("GPUNION_AGENT", kDefaultAgent) : agent_flag;
  ctx.json = output == "json";

  try {
    action();
    return 0;
  } catch (const Error& e) {
    const auto name = std::string(to_string(e.code()));
    if (ctx.json) {
      out << Json{{"schema", kSchema}, {"command", ctx.command}, {"ok", false}, {"error", name},
                  {"message", e.what()}}
                 .dump(2)
          << '\n';
    } else {
      err << "error: " << name << ": " << e.what() << '\n';
    }
    return exit_code(e.code());
  } catch (const std::exception& e) {
    if (ctx.json) {
      out << Json{{"schema", kSchema}, {"command", ctx.command}, {"ok", false}, {"error", "Internal"},
                  {"message", e.what()}}
                 .dump(2)
          << '\n';
    } else {
      err << "error: " << e.what() << '\n';
    }
    return 1;
  }
}

}  // namespace gpunion::cli
