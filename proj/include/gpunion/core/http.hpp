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

#include <string>

#include "gpunion/core/error.hpp"
#include "gpunion/core/wire.hpp"

// Error mapping shared by every HTTP surface: bodies are
// {"error": "<ErrorCode>", "message": "..."}.
namespace gpunion {

int http_status(ErrorCode code);
Json error_body(ErrorCode code, const std::string& message);

// Rebuilds the Error a server reported. Non-JSON bodies map by status.
[[noreturn]] void throw_http_error(int status, const std::string& body);

}  // namespace gpunion
