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

#include <chrono>
#include <memory>
#include <string>

#include "gpunion/core/protocol.hpp"

namespace gpunion::coord {
class Coordinator;
}

namespace gpunion::agent {

// Agent-side view of the coordinator API. Transport failures throw
// Error(CoordinatorUnreachable); API rejections carry the coordinator's code.
class CoordinatorClient {
 public:
  virtual ~CoordinatorClient() = default;
  virtual RegistrationResponse register_node(const RegistrationRequest& request) = 0;
  virtual HeartbeatAck heartbeat(const HeartbeatRequest& request, const std::string& token) = 0;
  virtual void depart(const DepartureNotice& notice, const std::string& token) = 0;
};

// Direct calls into a coordinator in the same process. `set_reachable(false)`
// black-holes every call.
class InProcessClient final : public CoordinatorClient {
 public:
  explicit InProcessClient(coord::Coordinator& coordinator) : coordinator_(coordinator) {}
  RegistrationResponse register_node(const RegistrationRequest& request) override;
  HeartbeatAck heartbeat(const HeartbeatRequest& request, const std::string& token) override;
  void depart(const DepartureNotice& notice, const std::string& token) override;
  void set_reachable(bool reachable) { reachable_ = reachable; }
  bool reachable() const { return reachable_; }

 private:
  void check() const;
  coord::Coordinator& coordinator_;
  bool reachable_ = true;
};

class HttpCoordinatorClient final : public CoordinatorClient {
 public:
  explicit HttpCoordinatorClient(std::string base_url,
                                 std::chrono::milliseconds timeout = std::chrono::seconds(5));
  RegistrationResponse register_node(const RegistrationRequest& request) override;
  HeartbeatAck heartbeat(const HeartbeatRequest& request, const std::string& token) override;
  // Fire-and-forget with a 2 s timeout.
  void depart(const DepartureNotice& notice, const std::string& token) override;

 private:
  std::string base_url_;
  std::chrono::milliseconds timeout_;
};

}  // namespace gpunion::agent
