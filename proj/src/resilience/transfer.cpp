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

#include "gpunion/resilience/transfer.hpp"

#include <algorithm>

#include "gpunion/resilience/restore.hpp"

namespace gpunion::resilience {

std::uint64_t TransferLedger::reserve(const NodeId& node, JobId job, TransferKind kind,
                                      Timestamp earliest, std::uint64_t bytes) {
  Timestamp start = earliest;
  if (auto tail = link_tail_.find(node); tail != link_tail_.end()) {
    start = std::max(start, transfers_[tail->second - 1].end);
  }
  Transfer t;
  t.id = transfers_.size() + 1;
  t.node = node;
  t.job = job;
  t.kind = kind;
  t.start = start;
  t.end = start + transfer_time(bytes, link_mbps_);
  t.bytes = bytes;
  transfers_.push_back(t);
  link_tail_[node] = t.id;
  return t.id;
}

void TransferLedger::cancel(std::uint64_t id, Timestamp at) {
  Transfer& t = transfers_.at(id - 1);
  if (!t.completed || at >= t.end) return;
  Timestamp stop = std::max(at, t.start);
  auto total = (t.end - t.start).count();
  auto sent = (stop - t.start).count();
  t.bytes = total > 0 ? static_cast<std::uint64_t>(static_cast<double>(t.bytes) *
                                                   static_cast<double>(sent) /
                                                   static_cast<double>(total))
                      : 0;
  t.end = stop;
  t.completed = false;
}

std::uint64_t TransferLedger::completed_bytes(JobId job, TransferKind kind) const {
  std::uint64_t sum = 0;
  for (const auto& t : transfers_) {
    if (t.job == job && t.kind == kind && t.completed) sum += t.bytes;
  }
  return sum;
}

double peak_backup_share_pct(const std::vector<Transfer>& transfers, double campus_mbps,
                             Duration window) {
  // Cumulative backup bytes F(x) is piecewise linear with breakpoints at
  // transfer starts and ends, so F(t + w) - F(t) peaks where t or t + w is a
  // breakpoint.
  struct RateChange {
    std::int64_t at;
    double delta;  // bytes per ms
  };
  std::vector<RateChange> changes;
  std::vector<std::int64_t> queries;
  const std::int64_t w = window.count();
  for (const auto& t : transfers) {
    if (t.kind != TransferKind::Backup || t.bytes == 0) continue;
    std::int64_t s = ms_since_epoch(t.start), e = ms_since_epoch(t.end);
    if (e <= s) continue;
    double rate = static_cast<double>(t.bytes) / static_cast<double>(e - s);
    changes.push_back({s, rate});
    changes.push_back({e, -rate});
    for (std::int64_t p : {s, e}) {
      queries.push_back(p);
      queries.push_back(p - w);
      queries.push_back(p + w);
    }
  }
  if (changes.empty() || w <= 0) return 0.0;
  std::sort(changes.begin(), changes.end(), [](const auto& a, const auto& b) { return a.at < b.at; });
  std::sort(queries.begin(), queries.end());
  queries.erase(std::unique(queries.begin(), queries.end()), queries.end());

  // F at every query point by a sweep over rate changes.
  std::vector<double> cumulative(queries.size());
  double f = 0.0, rate = 0.0;
  std::int64_t x = queries.front();
  std::size_t c = 0;
  while (c < changes.size() && changes[c].at <= x) {
    rate += changes[c].delta;  // nothing precedes the first query's lower window edge
    ++c;
  }
  for (std::size_t q = 0; q < queries.size(); ++q) {
    while (c < changes.size() && changes[c].at <= queries[q]) {
      f += rate * static_cast<double>(changes[c].at - x);
      x = changes[c].at;
      rate += changes[c].delta;
      ++c;
    }
    f += rate * static_cast<double>(queries[q] - x);
    x = queries[q];
    cumulative[q] = f;
  }
  double peak_bytes = 0.0;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    auto hi = std::lower_bound(queries.begin(), queries.end(), queries[q] + w);
    if (hi == queries.end() || *hi != queries[q] + w) continue;
    peak_bytes = std::max(peak_bytes, cumulative[hi - queries.begin()] - cumulative[q]);
  }
  double bytes_per_s = peak_bytes / (static_cast<double>(w) / 1000.0);
  double campus_bytes_per_s = campus_mbps * 1e6 / 8.0;
  return 100.0 * bytes_per_s / campus_bytes_per_s;
}

}  // namespace gpunion::resilience
