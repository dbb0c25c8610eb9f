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

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gpunion/core/types.hpp"

namespace gpunion::resilience {

enum class TransferKind { Backup, Restore };

struct Transfer {
  std::uint64_t id = 0;
  NodeId node;
  JobId job;
  TransferKind kind = TransferKind::Backup;
  Timestamp start;
  Timestamp end;
  std::uint64_t bytes = 0;
  bool completed = true;  // false once cancelled; bytes then count what was sent
};

// Link-usage ledger. Each node has one serial link; a transfer starts when
// the link is free and runs at the link rate.
class TransferLedger {
 public:
  explicit TransferLedger(double link_mbps) : link_mbps_(link_mbps) {}

  // Reserves the node's link for `bytes` from `earliest` on. Returns the
  // transfer id; the record holds the computed start and end.
  std::uint64_t reserve(const NodeId& node, JobId job, TransferKind kind, Timestamp earliest,
                        std::uint64_t bytes);
  // Stops an unfinished transfer at `at`. Only the tail reservation on a
  // link gives its remaining time back.
  void cancel(std::uint64_t id, Timestamp at);

  const Transfer& get(std::uint64_t id) const { return transfers_.at(id - 1); }
  const std::vector<Transfer>& transfers() const { return transfers_; }
  double link_mbps() const { return link_mbps_; }

  std::uint64_t completed_bytes(JobId job, TransferKind kind) const;

 private:
  double link_mbps_;
  std::vector<Transfer> transfers_;
  std::map<NodeId, std::uint64_t> link_tail_;  // node -> id of last reservation
};

// Peak over all `window`-long intervals of backup bytes/s, as a percentage
// of `campus_mbps`. Transfers move bytes at a constant rate over
// [start, end].
double peak_backup_share_pct(const std::vector<Transfer>& transfers, double campus_mbps,
                             Duration window = std::chrono::seconds(60));

}  // namespace gpunion::resilience
