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

#include "gpunion/agent/daemon.hpp"

#include "httplib.h"

#include "gpunion/core/http.hpp"

namespace gpunion::agent {

namespace {

constexpr auto kLoopIdle = std::chrono::milliseconds(200);
// Heartbeats hold the agent lock; keep a dead coordinator from stalling
// local controls for long.
constexpr auto kHeartbeatTimeout = std::chrono::seconds(1);
constexpr auto kKillSlack = std::chrono::seconds(5);

// Sends departure notices on a detached thread.
class DetachedDepartClient final : public CoordinatorClient {
 public:
  explicit DetachedDepartClient(std::shared_ptr<CoordinatorClient> inner) : inner_(std::move(inner)) {}
  RegistrationResponse register_node(const RegistrationRequest& request) override {
    return inner_->register_node(request);
  }
  HeartbeatAck heartbeat(const HeartbeatRequest& request, const std::string& token) override {
    return inner_->heartbeat(request, token);
  }
  void depart(const DepartureNotice& notice, const std::string& token) override {
    std::thread([inner = inner_, notice, token] {
      try {
        inner->depart(notice, token);
      } catch (const Error&) {
        // Heartbeat loss tells the coordinator anyway.
      }
    }).detach();
  }

 private:
  std::shared_ptr<CoordinatorClient> inner_;
};

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

std::optional<Duration> grace_param(const httplib::Request& req) {
  if (!req.has_param("grace")) return std::nullopt;
  const auto text = req.get_param_value("grace");
  try {
    std::size_t used = 0;
    const double seconds = std::stod(text, &used);
    if (used == text.size() && seconds >= 0) return from_seconds(seconds);
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ValidationFailed, "grace must be a nonnegative number of seconds");
}

}  // namespace

AgentDaemon::AgentDaemon(AgentConfig config, const Clock& clock, std::unique_ptr<CoordinatorClient> client)
    : config_(std::move(config)), clock_(clock), identity_(config_.state_dir) {
  validate(config_);
  std::shared_ptr<CoordinatorClient> inner = std::move(client);
  if (!inner) inner = std::make_shared<HttpCoordinatorClient>(config_.coordinator_url, kHeartbeatTimeout);
  client_ = std::make_unique<DetachedDepartClient>(std::move(inner));
  agent_ = std::make_unique<Agent>(config_, AgentDeps{*client_, runtime_, probe_, store_, identity_});
  http_ = std::make_unique<httplib::Server>();
  routes();
}

AgentDaemon::~AgentDaemon() { stop(); }

int AgentDaemon::start() {
  if (loop_thread_.joinable()) return port_;
  port_ = config_.control_port == 0
              ? http_->bind_to_any_port(config_.control_bind)
              : (http_->bind_to_port(config_.control_bind, config_.control_port) ? config_.control_port : -1);
  if (port_ <= 0) {
    throw Error(ErrorCode::InvalidConfig,
                "cannot bind " + config_.control_bind + ":" + std::to_string(config_.control_port));
  }
  {
    std::lock_guard lock(mu_);
    agent_->join(clock_.now());
  }
  loop_thread_ = std::thread([this] { loop(); });
  http_thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return port_;
}

void AgentDaemon::stop() {
  {
    std::lock_guard lock(mu_);
    if (stopping_) return;
    stopping_ = true;
  }
  cv_.notify_all();
  http_->stop();
  if (http_thread_.joinable()) http_thread_.join();
  if (loop_thread_.joinable()) loop_thread_.join();
}

void AgentDaemon::wait() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return stopping_; });
}

void AgentDaemon::loop() {
  std::unique_lock lock(mu_);
  while (!stopping_) {
    const Timestamp now = clock_.now();
    const auto deadline = agent_->next_deadline();
    if (deadline && *deadline <= now) {
      agent_->advance_to(now);
      cv_.notify_all();
      continue;
    }
    Duration idle = kLoopIdle;
    if (deadline) idle = std::min(idle, *deadline - now);
    cv_.wait_for(lock, idle);
  }
}

Json AgentDaemon::snapshot() {
  Json j = agent_->status_json(clock_.now());
  j["live_workloads"] = agent_->live_workloads();
  j["in_session"] = agent_->in_session();
  return j;
}

Json AgentDaemon::status() {
  std::lock_guard lock(mu_);
  return snapshot();
}

Json AgentDaemon::join() {
  std::lock_guard lock(mu_);
  const bool changed = !agent_->in_session();
  agent_->join(clock_.now());
  cv_.notify_all();
  return {{"changed", changed}, {"agent", snapshot()}};
}

Json AgentDaemon::pause() {
  std::lock_guard lock(mu_);
  const bool changed = agent_->pause(clock_.now());
  cv_.notify_all();
  return {{"changed", changed}, {"agent", snapshot()}};
}

Json AgentDaemon::resume() {
  std::lock_guard lock(mu_);
  const bool changed = agent_->resume(clock_.now());
  cv_.notify_all();
  return {{"changed", changed}, {"agent", snapshot()}};
}

Json AgentDaemon::drain(std::optional<Duration> grace) {
  std::lock_guard lock(mu_);
  if (!agent_->in_session()) throw Error(ErrorCode::AgentNotRunning, "agent is not in a session");
  agent_->drain(clock_.now(), grace);
  cv_.notify_all();
  return {{"changed", true}, {"agent", snapshot()}};
}

Json AgentDaemon::kill(Duration grace) {
  std::unique_lock lock(mu_);
  const bool changed = agent_->in_session();
  const auto started = std::chrono::steady_clock::now();
  agent_->kill_switch(clock_.now(), grace);
  cv_.notify_all();
  const auto limit = std::chrono::steady_clock::now() + grace + kKillSlack;
  cv_.wait_until(lock, limit, [this] { return stopping_ || agent_->live_workloads() == 0; });
  const double waited =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {{"changed", changed}, {"grace_s", encode_seconds(grace)}, {"waited_s", waited},
          {"agent", snapshot()}};
}

void AgentDaemon::routes() {
  using Handler = std::function<Json(const httplib::Request&)>;
  auto route = [this](const char* path, Handler body) {
    http_->Post(path, [body = std::move(body)](const httplib::Request& req, httplib::Response& res) {
      try {
        reply(res, 200, body(req));
      } catch (const Error& e) {
        reply(res, http_status(e.code()), error_body(e.code(), e.what()));
      }
    });
  };
  http_->Get("/local/status", [this](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, status());
  });
  route("/local/join", [this](const auto&) { return join(); });
  route("/local/pause", [this](const auto&) { return pause(); });
  route("/local/resume", [this](const auto&) { return resume(); });
  route("/local/drain", [this](const auto& req) { return drain(grace_param(req)); });
  route("/local/kill", [this](const auto& req) {
    return kill(grace_param(req).value_or(Duration{0}));
  });
}

}  // namespace gpunion::agent
