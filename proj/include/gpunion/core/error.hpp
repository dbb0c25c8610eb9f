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

#include <stdexcept>
#include <string>
#include <string_view>

namespace gpunion {

enum class ErrorCode {
  // validation
  DigestNotTrusted,
  MalformedDigest,
  NonPositiveResource,
  ValidationFailed,
  InvalidConfig,
  // state machines
  IllegalTransition,
  // coordinator
  DuplicateActiveNode,
  EmptyGpuList,
  Unauthorized,
  UnknownNode,
  NotFound,
  StaleSequence,
  GapInLog,
  CorruptEntry,
  // resilience
  StorageTargetUnavailable,
  RuntimeCheckpointFailure,
  HashMismatch,
  BrokenChain,
  PayloadMissing,
  // agent
  DigestMismatch,
  RuntimeFailure,
  CoordinatorUnreachable,
  RegistrationRejected,
  ProbeUnavailable,
  AgentNotRunning,
};

std::string_view to_string(ErrorCode code);
ErrorCode error_code_from_string(std::string_view name);

// Every failure crossing a module boundary is an Error carrying a stable code;
// the code name is what ends up on the wire and in CLI output.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  explicit Error(ErrorCode code) : Error(code, std::string(to_string(code))) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gpunion
