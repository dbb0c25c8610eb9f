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

#include "gpunion/coordinator/event_store.hpp"

#include <string>

#include "gpunion/core/error.hpp"

namespace gpunion::coord {

FileEventStore::FileEventStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, std::ios::app);
  if (!out_) throw Error(ErrorCode::InvalidConfig, "cannot open event log " + path_.string());
}

void FileEventStore::append(const EventLogEntry& entry) {
  out_ << to_json(entry).dump() << '\n';
  out_.flush();
}

std::vector<EventLogEntry> FileEventStore::load() const {
  std::vector<EventLogEntry> entries;
  std::ifstream in(path_);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw Error(ErrorCode::CorruptEntry, path_.string() + ":" + std::to_string(lineno) + " is not JSON");
    }
    EventLogEntry entry = event_from_json(j);
    std::uint64_t expected = entries.empty() ? 1 : entries.back().seq + 1;
    if (entry.seq != expected) {
      throw Error(ErrorCode::GapInLog, path_.string() + ":" + std::to_string(lineno) + " has seq " +
                                           std::to_string(entry.seq) + ", expected " +
                                           std::to_string(expected));
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace gpunion::coord
