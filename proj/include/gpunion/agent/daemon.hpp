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

#include <condition_variable>
#include <memory>
#include <mutex>
#include <thread>

#include "gpunion/agent/agent.hpp"

namespace httplib {
class Server;
}

namespace gpunion::agent {

// Live agent process: a loop thread drives the Agent against the wall clock
// and a localhost control server mirrors the provider commands:
//   GET  /local/status
//   POST /local/join | /local/pause | /local/resume
//   POST /local/drain?grace=<s> | /local/kill?grace=<s>
// Every Agent call holds one mutex. Departure notices are sent off-thread so
// a dead coordinator cannot hold up the kill-switch.
class AgentDaemon {
 public:
  // `client` defaults to HTTP against config.coordinator_url.
  AgentDaemon(AgentConfig config, const Clock& clock, std::unique_ptr<CoordinatorClient> client = {});
  ~AgentDaemon();
  AgentDaemon(const AgentDaemon&) = delete;
  AgentDaemon& operator=(const AgentDaemon&) = delete;

  // Joins the cluster and starts serving; control_port 0 picks a free port.
  // Returns the bound port. Throws Error(InvalidConfig) when it cannot bind.
  int start();
  void stop();
  // Blocks until stop() is called from another thread.
  void wait();
  int port() const { return port_; }

  Json status();
  Json join();
  Json pause();
  Json resume();
  Json drain(std::optional<Duration> grace);
  // Returns once every workload has stopped.
  Json kill(Duration grace);

  SimulatedRuntime& runtime() { return runtime_; }

 private:
  void loop();
  void routes();
  Json snapshot();

  AgentConfig config_;
  const Clock& clock_;
  std::unique_ptr<CoordinatorClient> client_;
  SimulatedRuntime runtime_;
  SimulatedProbe probe_;
  resilience::FileCheckpointStore store_;
  FileIdentityStore identity_;
  std::unique_ptr<Agent> agent_;
  std::unique_ptr<httplib::Server> http_;

  std::mutex mu_;
  std::condition_variable cv_;
  bool stopping_ = false;
  std::thread loop_thread_;
  std::thread http_thread_;
  int port_ = 0;
};

}  // namespace gpunion::agent
