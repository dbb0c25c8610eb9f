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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpunion/core/types.hpp"

namespace gpunion::resilience {

// Payloads live at `<job_id>/<seq>.ckpt` under the target's root, manifests
// at `<job_id>/<seq>.manifest.json`.
class CheckpointStore {
 public:
  virtual ~CheckpointStore() = default;
  virtual bool available(const StorageTarget& target) const = 0;
  // Throws Error(StorageTargetUnavailable).
  virtual void put(const CheckpointManifest& manifest, const std::string& blob) = 0;
  // Manifests for `job` under `target`, seq ascending.
  virtual std::vector<CheckpointManifest> list(const StorageTarget& target, JobId job) const = 0;
  virtual std::optional<std::string> get(const StorageTarget& target, JobId job,
                                         std::uint64_t seq) const = 0;
};

class MemoryCheckpointStore final : public CheckpointStore {
 public:
  using Availability = std::function<bool(const StorageTarget&)>;

  MemoryCheckpointStore() = default;
  explicit MemoryCheckpointStore(Availability availability)
      : availability_(std::move(availability)) {}

  bool available(const StorageTarget& target) const override;
  void put(const CheckpointManifest& manifest, const std::string& blob) override;
  std::vector<CheckpointManifest> list(const StorageTarget& target, JobId job) const override;
  std::optional<std::string> get(const StorageTarget& target, JobId job,
                                 std::uint64_t seq) const override;

  // Test hooks.
  void corrupt(const StorageTarget& target, JobId job, std::uint64_t seq);
  void drop_payload(const StorageTarget& target, JobId job, std::uint64_t seq);
  void set_availability(Availability availability) { availability_ = std::move(availability); }

 private:
  struct Object {
    CheckpointManifest manifest;
    std::optional<std::string> blob;
  };
  using Key = std::pair<std::string, std::uint64_t>;  // (root, job)
  Availability availability_;
  std::map<Key, std::map<std::uint64_t, Object>> objects_;
};

// Filesystem layout under each target's path. Node targets are treated as
// mounted locally at their path.
class FileCheckpointStore final : public CheckpointStore {
 public:
  bool available(const StorageTarget& target) const override;
  void put(const CheckpointManifest& manifest, const std::string& blob) override;
  std::vector<CheckpointManifest> list(const StorageTarget& target, JobId job) const override;
  std::optional<std::string> get(const StorageTarget& target, JobId job,
                                 std::uint64_t seq) const override;

  static std::filesystem::path job_dir(const StorageTarget& target, JobId job);
};

}  // namespace gpunion::resilience
