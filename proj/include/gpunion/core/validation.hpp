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

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "gpunion/core/error.hpp"
#include "gpunion/core/types.hpp"

namespace gpunion {

using DigestAllowList = std::set<std::string>;

struct Rejection {
  ErrorCode code;
  std::string detail;
};

bool is_sha256_hex(std::string_view digest);

// nullopt when the spec satisfies every JobSpec invariant and its digest is
// on the allow-list. Structural problems are reported before trust.
std::optional<Rejection> validate_job_spec(const JobSpec& spec, const DigestAllowList& allow_list);

bool validate_gpu(const GpuDescriptor& gpu);

}  // namespace gpunion
