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
#include <vector>

#include "gpunion/core/error.hpp"
#include "gpunion/resilience/store.hpp"

namespace gpunion::resilience {

// Verifies `chain` (Full first) against stored payloads. Throws
// Error(PayloadMissing | HashMismatch | BrokenChain) at the first bad link.
void verify_chain(const std::vector<CheckpointManifest>& chain, const CheckpointStore& store);

struct RestoreResult {
  std::vector<CheckpointManifest> chain;  // verified manifests actually used
  Duration progress{0};
  std::uint64_t transfer_bytes = 0;
  std::optional<ErrorCode> fault;  // first verification failure, if any
  bool stateless() const { return chain.empty(); }
};

// Restores from the newest manifest in the store, falling back to the longest
// verifiable prefix of its chain. A bad Full means a stateless restart.
RestoreResult restore(const CheckpointStore& store, const StorageTarget& target, JobId job);

Duration transfer_time(std::uint64_t bytes, double link_mbps);
Duration restore_cost(std::uint64_t bytes, double link_mbps, Duration restore_overhead);

}  // namespace gpunion::resilience
