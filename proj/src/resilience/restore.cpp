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

#include "gpunion/resilience/restore.hpp"

#include <cmath>

#include "gpunion/core/digest.hpp"
#include "gpunion/resilience/checkpoint.hpp"

namespace gpunion::resilience {
namespace {

// Verifies one link and returns its decoded blob.
CheckpointBlob verify_link(const std::vector<CheckpointManifest>& chain, std::size_t i,
                           const CheckpointStore& store) {
  const auto& m = chain[i];
  auto bytes = store.get(m.target, m.job_id, m.seq);
  if (!bytes) {
    throw Error(ErrorCode::PayloadMissing, "payload for seq " + std::to_string(m.seq) + " missing");
  }
  if (sha256_hex(*bytes) != m.content_hash) {
    throw Error(ErrorCode::HashMismatch, "payload for seq " + std::to_string(m.seq) + " does not match its hash");
  }
  CheckpointBlob blob = decode_blob(*bytes);
  if (blob.seq != m.seq || blob.parent_seq != m.parent_seq || blob.job_id != m.job_id) {
    throw Error(ErrorCode::BrokenChain, "payload header disagrees with manifest " + std::to_string(m.seq));
  }
  if (i == 0 && !m.is_full()) {
    throw Error(ErrorCode::BrokenChain, "chain does not start at a Full checkpoint");
  }
  if (i > 0 && (m.parent_seq != chain[i - 1].seq || blob.parent_hash != chain[i - 1].content_hash)) {
    throw Error(ErrorCode::BrokenChain, "seq " + std::to_string(m.seq) + " does not link to its parent");
  }
  return blob;
}

}  // namespace

void verify_chain(const std::vector<CheckpointManifest>& chain, const CheckpointStore& store) {
  for (std::size_t i = 0; i < chain.size(); ++i) verify_link(chain, i, store);
}

RestoreResult restore(const CheckpointStore& store, const StorageTarget& target, JobId job) {
  RestoreResult result;
  auto manifests = store.list(target, job);
  // Newest tail first; an older tail is tried only if nothing of a newer
  // chain verifies.
  for (auto tail = manifests.rbegin(); tail != manifests.rend(); ++tail) {
    std::vector<CheckpointManifest> chain;
    try {
      chain = restore_chain(manifests, tail->seq);
    } catch (const Error& e) {
      if (!result.fault) result.fault = e.code();
      continue;
    }
    std::vector<CheckpointManifest> verified;
    Duration progress{0};
    for (std::size_t i = 0; i < chain.size(); ++i) {
      try {
        progress = verify_link(chain, i, store).progress;
      } catch (const Error& e) {
        if (!result.fault) result.fault = e.code();
        break;
      }
      verified.push_back(chain[i]);
    }
    if (verified.empty()) continue;
    result.chain = std::move(verified);
    result.progress = progress;
    for (const auto& m : result.chain) result.transfer_bytes += m.payload_bytes;
    return result;
  }
  return result;
}

Duration transfer_time(std::uint64_t bytes, double link_mbps) {
  double ms = static_cast<double>(bytes) * 8.0 / (link_mbps * 1000.0);
  return Duration{static_cast<std::int64_t>(std::ceil(ms))};
}

Duration restore_cost(std::uint64_t bytes, double link_mbps, Duration restore_overhead) {
  return transfer_time(bytes, link_mbps) + restore_overhead;
}

}  // namespace gpunion::resilience
