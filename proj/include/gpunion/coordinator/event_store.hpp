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

#include <filesystem>
#include <fstream>
#include <vector>

#include "gpunion/coordinator/events.hpp"

namespace gpunion::coord {

// Append-only persistence for the coordinator event log.
class EventStore {
 public:
  virtual ~EventStore() = default;
  virtual void append(const EventLogEntry& entry) = 0;
  // All entries, seq ascending. Throws Error(GapInLog | CorruptEntry).
  virtual std::vector<EventLogEntry> load() const = 0;
};

class MemoryEventStore final : public EventStore {
 public:
  void append(const EventLogEntry& entry) override { entries_.push_back(entry); }
  std::vector<EventLogEntry> load() const override { return entries_; }

 private:
  std::vector<EventLogEntry> entries_;
};

// One JSON object per line.
class FileEventStore final : public EventStore {
 public:
  explicit FileEventStore(std::filesystem::path path);
  void append(const EventLogEntry& entry) override;
  std::vector<EventLogEntry> load() const override;

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace gpunion::coord
