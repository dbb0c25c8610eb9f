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

#include "gpunion/agent/client.hpp"

#include "httplib.h"

#include "gpunion/coordinator/coordinator.hpp"
#include "gpunion/core/error.hpp"
#include "gpunion/core/http.hpp"
#include "gpunion/core/wire.hpp"

namespace gpunion::agent {

void InProcessClient::check() const {
  if (!reachable_) throw Error(ErrorCode::CoordinatorUnreachable, "coordinator unreachable");
}

RegistrationResponse InProcessClient::register_node(const RegistrationRequest& request) {
  check();
  return coordinator_.register_node(request);
}

HeartbeatAck InProcessClient::heartbeat(const HeartbeatRequest& request, const std::string& token) {
  check();
  return coordinator_.process_heartbeat(request, token);
}

void InProcessClient::depart(const DepartureNotice& notice, const std::string& token) {
  check();
  coordinator_.receive_departure(notice, token);
}

HttpCoordinatorClient::HttpCoordinatorClient(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

namespace {

Json post(const std::string& base, std::chrono::milliseconds timeout, const std::string& path,
          const Json& body, const std::string& token) {
  httplib::Client client(base);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::CoordinatorUnreachable,
                base + path + ": " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) throw_http_error(res->status, res->body);
  Json j = Json::parse(res->body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::CoordinatorUnreachable, "malformed response body");
  return j;
}

}  // namespace

RegistrationResponse HttpCoordinatorClient::register_node(const RegistrationRequest& request) {
  return post(base_url_, timeout_, "/v1/nodes/register", Json(request), "").get<RegistrationResponse>();
}

HeartbeatAck HttpCoordinatorClient::heartbeat(const HeartbeatRequest& request,
                                              const std::string& token) {
  return post(base_url_, timeout_, "/v1/nodes/" + request.node_id.to_hex() + "/heartbeat",
              Json(request), token)
      .get<HeartbeatAck>();
}

void HttpCoordinatorClient::depart(const DepartureNotice& notice, const std::string& token) {
  post(base_url_, std::chrono::seconds(2), "/v1/nodes/" + notice.node_id.to_hex() + "/depart",
       Json(notice), token);
}

}  // namespace gpunion::agent
