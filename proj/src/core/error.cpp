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

#include "gpunion/core/error.hpp"

#include <array>
#include <utility>

namespace gpunion {
namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 25> kNames{{
    {ErrorCode::DigestNotTrusted, "DigestNotTrusted"},
    {ErrorCode::MalformedDigest, "MalformedDigest"},
    {ErrorCode::NonPositiveResource, "NonPositiveResource"},
    {ErrorCode::ValidationFailed, "ValidationFailed"},
    {ErrorCode::InvalidConfig, "InvalidConfig"},
    {ErrorCode::IllegalTransition, "IllegalTransition"},
    {ErrorCode::DuplicateActiveNode, "DuplicateActiveNode"},
    {ErrorCode::EmptyGpuList, "EmptyGpuList"},
    {ErrorCode::Unauthorized, "Unauthorized"},
    {ErrorCode::UnknownNode, "UnknownNode"},
    {ErrorCode::NotFound, "NotFound"},
    {ErrorCode::StaleSequence, "StaleSequence"},
    {ErrorCode::GapInLog, "GapInLog"},
    {ErrorCode::CorruptEntry, "CorruptEntry"},
    {ErrorCode::StorageTargetUnavailable, "StorageTargetUnavailable"},
    {ErrorCode::RuntimeCheckpointFailure, "RuntimeCheckpointFailure"},
    {ErrorCode::HashMismatch, "HashMismatch"},
    {ErrorCode::BrokenChain, "BrokenChain"},
    {ErrorCode::PayloadMissing, "PayloadMissing"},
    {ErrorCode::DigestMismatch, "DigestMismatch"},
    {ErrorCode::RuntimeFailure, "RuntimeFailure"},
    {ErrorCode::CoordinatorUnreachable, "CoordinatorUnreachable"},
    {ErrorCode::RegistrationRejected, "RegistrationRejected"},
    {ErrorCode::ProbeUnavailable, "ProbeUnavailable"},
    {ErrorCode::AgentNotRunning, "AgentNotRunning"},
}};

}  // namespace

std::string_view to_string(ErrorCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "Unknown";
}

ErrorCode error_code_from_string(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  throw Error(ErrorCode::ValidationFailed, "unknown error code '" + std::string(name) + "'");
}

}  // namespace gpunion
