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
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <thread>
#include <type_traits>

#include "gpunion/coordinator/coordinator.hpp"

namespace httplib {
class Server;
}

namespace gpunion::coord {

// REST front end. Handlers only parse and enqueue; every coordinator call
// runs on one command thread, which also ticks the scheduler.
class CoordinatorServer {
 public:
  CoordinatorServer(CoordinatorConfig config, const Clock& clock, Coordinator::Options options = {},
                    Duration tick_period = std::chrono::seconds(1));
  ~CoordinatorServer();
  CoordinatorServer(const CoordinatorServer&) = delete;
  CoordinatorServer& operator=(const CoordinatorServer&) = delete;

  // Binds config.bind_address:config.port (0 picks a free port) and serves
  // on background threads. Returns the bound port. Throws
  // Error(InvalidConfig) when the address cannot be bound.
  int start();
  void stop();
  // Blocks until stop() is called from another thread.
  void wait();
  int port() const { return port_; }

  // Runs `fn` on the command thread and returns its result; exceptions
  // propagate to the caller.
  template <typename F>
  auto run(F&& fn) -> std::invoke_result_t<F, Coordinator&> {
    using R = std::invoke_result_t<F, Coordinator&>;
    auto task = std::make_shared<std::packaged_task<R()>>(
        [this, f = std::forward<F>(fn)]() mutable { return f(*coordinator_); });
    auto result = task->get_future();
    post([task] { (*task)(); });
    return result.get();
  }

 private:
  void post(std::function<void()> command);
  void command_loop();
  void routes();

  CoordinatorConfig config_;
  const Clock& clock_;
  Duration tick_period_;
  std::unique_ptr<EventStore> event_store_;
  std::unique_ptr<Coordinator> coordinator_;
  std::unique_ptr<httplib::Server> http_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> queue_;
  bool stopping_ = false;
  std::thread command_thread_;
  std::thread http_thread_;
  int port_ = 0;
};

}  // namespace gpunion::coord
