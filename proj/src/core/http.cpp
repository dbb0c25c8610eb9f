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

#include "gpunion/core/http.hpp"

namespace gpunion {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::DigestNotTrusted:
    case ErrorCode::MalformedDigest:
    case ErrorCode::NonPositiveResource:
    case ErrorCode::ValidationFailed:
    case ErrorCode::InvalidConfig:
    case ErrorCode::EmptyGpuList:
      return 400;
    case ErrorCode::Unauthorized:
      return 401;
    case ErrorCode::UnknownNode:
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::IllegalTransition:
    case ErrorCode::DuplicateActiveNode:
    case ErrorCode::StaleSequence:
      return 409;
    case ErrorCode::CoordinatorUnreachable:
    case ErrorCode::AgentNotRunning:
      return 503;
    default:
      return 500;
  }
}

Json error_body(ErrorCode code, const std::string& message) {
  return Json{{"error", std::string(to_string(code))}, {"message", message}};
}

void throw_http_error(int status, const std::string& body) {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_object() && j.contains("error") && j["error"].is_string()) {
    ErrorCode code;
    try {
      code = error_code_from_string(j["error"].get<std::string>());
    } catch (const Error&) {
      code = ErrorCode::ValidationFailed;
    }
    throw Error(code, j.value("message", std::string(to_string(code))));
  }
  switch (status) {
    case 401: throw Error(ErrorCode::Unauthorized, "HTTP 401");
    case 404: throw Error(ErrorCode::NotFound, "HTTP 404");
    case 400: throw Error(ErrorCode::ValidationFailed, "HTTP 400");
    default: throw Error(ErrorCode::CoordinatorUnreachable, "HTTP " + std::to_string(status));
  }
}

}  // namespace gpunion
