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

#include "gpunion/coordinator/server.hpp"

#include <charconv>

#include "httplib.h"

#include "gpunion/core/http.hpp"

namespace gpunion::coord {

namespace {

constexpr std::size_t kMaxEventsPerPage = 1000;

const char* kUiPlaceholder = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>GPUnion</title></head>
<body><h1>GPUnion coordinator</h1>
<p>No dashboard bundle is installed. Set <code>ui_dir</code> in the coordinator config.</p>
<p>API: <a href="/v1/cluster/summary">/v1/cluster/summary</a>, <a href="/v1/nodes">/v1/nodes</a>,
<a href="/v1/jobs">/v1/jobs</a>, <a href="/v1/events">/v1/events</a>, <a href="/metrics">/metrics</a></p>
</body></html>
)";

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

std::string bearer(const httplib::Request& req) {
  const auto header = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (header.size() < prefix.size() || header.compare(0, prefix.size(), prefix) != 0) return {};
  return header.substr(prefix.size());
}

Json parse_body(const httplib::Request& req) {
  Json j = Json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::ValidationFailed, "request body is not JSON");
  return j;
}

JobId parse_job_id(const std::string& text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ValidationFailed, "malformed job id: " + text);
  }
  return JobId{value};
}

std::optional<Duration> grace_param(const httplib::Request& req) {
  if (!req.has_param("grace")) return std::nullopt;
  const auto text = req.get_param_value("grace");
  double seconds = 0;
  try {
    std::size_t used = 0;
    seconds = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ValidationFailed, "grace must be a number of seconds");
  }
  if (!(seconds >= 0)) throw Error(ErrorCode::ValidationFailed, "grace must be >= 0");
  return from_seconds(seconds);
}

}  // namespace

CoordinatorServer::CoordinatorServer(CoordinatorConfig config, const Clock& clock,
                                     Coordinator::Options options, Duration tick_period)
    : config_(std::move(config)), clock_(clock), tick_period_(tick_period) {
  if (config_.event_log_path && !options.store) {
    event_store_ = std::make_unique<FileEventStore>(*config_.event_log_path);
    options.store = event_store_.get();
  }
  options.record_log = true;
  coordinator_ = std::make_unique<Coordinator>(config_, clock_, std::move(options));
  http_ = std::make_unique<httplib::Server>();
  routes();
}

CoordinatorServer::~CoordinatorServer() { stop(); }

int CoordinatorServer::start() {
  if (command_thread_.joinable()) return port_;
  port_ = config_.port == 0 ? http_->bind_to_any_port(config_.bind_address)
                            : (http_->bind_to_port(config_.bind_address, config_.port) ? config_.port : -1);
  if (port_ <= 0) {
    throw Error(ErrorCode::InvalidConfig,
                "cannot bind " + config_.bind_address + ":" + std::to_string(config_.port));
  }
  command_thread_ = std::thread([this] { command_loop(); });
  http_thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return port_;
}

void CoordinatorServer::stop() {
  {
    std::lock_guard lock(mu_);
    if (stopping_) return;
    stopping_ = true;
  }
  cv_.notify_all();
  http_->stop();
  if (http_thread_.joinable()) http_thread_.join();
  if (command_thread_.joinable()) command_thread_.join();
}

void CoordinatorServer::wait() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return stopping_; });
}

void CoordinatorServer::post(std::function<void()> command) {
  {
    std::lock_guard lock(mu_);
    queue_.push_back(std::move(command));
  }
  cv_.notify_all();
}

void CoordinatorServer::command_loop() {
  auto next_tick = std::chrono::steady_clock::now();
  for (;;) {
    std::function<void()> command;
    {
      std::unique_lock lock(mu_);
      cv_.wait_until(lock, next_tick, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_) {
        // Run whatever is still queued so no caller waits forever.
        for (auto& c : queue_) c();
        queue_.clear();
        return;
      }
      if (!queue_.empty()) {
        command = std::move(queue_.front());
        queue_.pop_front();
      }
    }
    if (command) {
      command();
      continue;
    }
    if (std::chrono::steady_clock::now() >= next_tick) {
      coordinator_->tick(clock_.now());
      next_tick += tick_period_;
    }
  }
}

void CoordinatorServer::routes() {
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;
  auto guarded = [](Handler body) {
    return [body = std::move(body)](const httplib::Request& req, httplib::Response& res) {
      try {
        body(req, res);
      } catch (const Error& e) {
        reply(res, http_status(e.code()), error_body(e.code(), e.what()));
      } catch (const Json::exception& e) {
        reply(res, 400, error_body(ErrorCode::ValidationFailed, e.what()));
      }
    };
  };
  auto operator_auth = [this](const httplib::Request& req) {
    if (!config_.api_token.empty() && bearer(req) != config_.api_token) {
      throw Error(ErrorCode::Unauthorized, "missing or wrong operator token");
    }
  };
  auto node_path = [](const httplib::Request& req) { return NodeId::from_hex(req.matches[1].str()); };

  auto& s = *http_;

  // Agent endpoints, authenticated by the node's own token.
  s.Post("/v1/nodes/register", guarded([this](const auto& req, auto& res) {
           auto request = parse_body(req).template get<RegistrationRequest>();
           auto response = run([&](Coordinator& c) { return c.register_node(request); });
           reply(res, 201, response);
         }));
  s.Post(R"(/v1/nodes/([0-9a-fA-F]+)/heartbeat)", guarded([this, node_path](const auto& req, auto& res) {
           auto request = parse_body(req).template get<HeartbeatRequest>();
           if (request.node_id != node_path(req)) {
             throw Error(ErrorCode::ValidationFailed, "node id in path and body differ");
           }
           auto token = bearer(req);
           auto ack = run([&](Coordinator& c) { return c.process_heartbeat(request, token); });
           reply(res, 200, ack);
         }));
  s.Post(R"(/v1/nodes/([0-9a-fA-F]+)/depart)", guarded([this, node_path](const auto& req, auto& res) {
           auto notice = parse_body(req).template get<DepartureNotice>();
           if (notice.node_id != node_path(req)) {
             throw Error(ErrorCode::ValidationFailed, "node id in path and body differ");
           }
           auto token = bearer(req);
           auto plans = run([&](Coordinator& c) { return c.receive_departure(notice, token); });
           Json displaced = Json::array();
           for (const auto& p : plans) {
             displaced.push_back({{"job_id", p.job}, {"outcome", to_string(p.outcome)}});
           }
           reply(res, 200, {{"displaced", displaced}});
         }));

  // Operator controls.
  auto control = [&](const char* pattern, std::function<bool(Coordinator&, const NodeId&,
                                                              std::optional<Duration>)> action) {
    s.Post(pattern, guarded([this, operator_auth, node_path, action](const auto& req, auto& res) {
             operator_auth(req);
             const auto node = node_path(req);
             const auto grace = grace_param(req);
             auto [changed, view] = run([&](Coordinator& c) {
               bool changed = action(c, node, grace);
               return std::pair{changed, node_view(c.state(), c.node(node))};
             });
             reply(res, 200, {{"changed", changed}, {"node", view}});
           }));
  };
  control(R"(/v1/nodes/([0-9a-fA-F]+)/drain)",
          [](Coordinator& c, const NodeId& n, std::optional<Duration> g) { return c.drain_node(n, g); });
  control(R"(/v1/nodes/([0-9a-fA-F]+)/pause)",
          [](Coordinator& c, const NodeId& n, std::optional<Duration>) { return c.pause_node(n); });
  control(R"(/v1/nodes/([0-9a-fA-F]+)/resume)",
          [](Coordinator& c, const NodeId& n, std::optional<Duration>) { return c.resume_node(n); });
  s.Post(R"(/v1/nodes/([0-9a-fA-F]+)/kill)", guarded([this, operator_auth, node_path](const auto& req, auto& res) {
           operator_auth(req);
           const auto node = node_path(req);
           const auto grace = grace_param(req).value_or(Duration{0});
           run([&](Coordinator& c) { c.kill_node(node, grace); });
           reply(res, 202, {{"node_id", node}, {"grace_s", encode_seconds(grace)}, {"status", "relayed"}});
         }));

  // Read models.
  s.Get("/v1/nodes", guarded([this, operator_auth](const auto& req, auto& res) {
          operator_auth(req);
          auto body = run([](Coordinator& c) {
            Json out = Json::array();
            for (const auto& [_, n] : c.state().nodes) out.push_back(node_view(c.state(), n));
            return out;
          });
          reply(res, 200, body);
        }));
  s.Get(R"(/v1/nodes/([0-9a-fA-F]+))", guarded([this, operator_auth, node_path](const auto& req, auto& res) {
          operator_auth(req);
          const auto node = node_path(req);
          reply(res, 200, run([&](Coordinator& c) { return node_view(c.state(), c.node(node)); }));
        }));
  s.Get("/v1/cluster/summary", guarded([this, operator_auth](const auto& req, auto& res) {
          operator_auth(req);
          reply(res, 200, run([](Coordinator& c) { return cluster_summary(c.state()); }));
        }));
  s.Get("/v1/events", guarded([this, operator_auth](const auto& req, auto& res) {
          operator_auth(req);
          std::uint64_t since = 0;
          if (req.has_param("since")) since = parse_job_id(req.get_param_value("since")).value;
          auto body = run([since](Coordinator& c) {
            Json events = Json::array();
            const auto& log = c.log();
            auto it = std::upper_bound(log.begin(), log.end(), since,
                                       [](std::uint64_t s, const EventLogEntry& e) { return s < e.seq; });
            for (; it != log.end() && events.size() < kMaxEventsPerPage; ++it) events.push_back(to_json(*it));
            return Json{{"events", events}, {"last_seq", c.last_seq()}};
          });
          reply(res, 200, body);
        }));
  s.Get("/metrics", guarded([this](const auto&, auto& res) {
          res.status = 200;
          res.set_content(run([](Coordinator& c) { return metrics_text(c.state()); }),
                          "text/plain; version=0.0.4");
        }));

  // Jobs.
  s.Post("/v1/jobs", guarded([this, operator_auth](const auto& req, auto& res) {
           operator_auth(req);
           auto spec = parse_body(req).template get<JobSpec>();
           auto id = run([&](Coordinator& c) { return c.enqueue_job(spec); });
           reply(res, 201, {{"job_id", id}});
         }));
  s.Get("/v1/jobs", guarded([this, operator_auth](const auto& req, auto& res) {
          operator_auth(req);
          auto body = run([](Coordinator& c) {
            Json out = Json::array();
            for (const auto& [_, job] : c.state().jobs) out.push_back(job_view(job));
            return out;
          });
          reply(res, 200, body);
        }));
  s.Get(R"(/v1/jobs/(\d+))", guarded([this, operator_auth](const auto& req, auto& res) {
          operator_auth(req);
          const auto id = parse_job_id(req.matches[1].str());
          reply(res, 200, run([&](Coordinator& c) { return job_view(c.job(id)); }));
        }));
  s.Get(R"(/v1/jobs/(\d+)/checkpoints)", guarded([this, operator_auth](const auto& req, auto& res) {
          operator_auth(req);
          const auto id = parse_job_id(req.matches[1].str());
          auto body = run([&](Coordinator& c) {
            return Json{{"job_id", id}, {"checkpoints", c.job(id).checkpoints}};
          });
          reply(res, 200, body);
        }));
  s.Delete(R"(/v1/jobs/(\d+))", guarded([this, operator_auth](const auto& req, auto& res) {
             operator_auth(req);
             const auto id = parse_job_id(req.matches[1].str());
             auto body = run([&](Coordinator& c) {
               c.cancel_job(id);
               return job_view(c.job(id));
             });
             reply(res, 200, body);
           }));

  // Dashboard bundle.
  if (config_.ui_dir) {
    if (!s.set_mount_point("/ui", config_.ui_dir->string())) {
      throw Error(ErrorCode::InvalidConfig, "ui_dir is not a directory: " + config_.ui_dir->string());
    }
  } else {
    auto placeholder = [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kUiPlaceholder, "text/html");
    };
    s.Get("/ui", placeholder);
    s.Get("/ui/", placeholder);
  }
}

}  // namespace gpunion::coord
