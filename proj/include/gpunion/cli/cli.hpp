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

#include <iosfwd>
#include <string>
#include <vector>

#include "gpunion/core/error.hpp"

namespace gpunion::cli {

inline constexpr const char* kSchema = "gpunion.cli/v1";

// 0 ok, 2 validation, 3 not found, 4 unauthorized, 5 transport, 1 other.
int exit_code(ErrorCode code);

// Entry point of the `gpunion` command. args[0] is the program name.
// Defaults come from GPUNION_COORDINATOR, GPUNION_TOKEN and GPUNION_AGENT.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gpunion::cli
