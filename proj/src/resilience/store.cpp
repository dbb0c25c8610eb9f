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

#include "gpunion/resilience/store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

#include "gpunion/core/error.hpp"
#include "gpunion/core/wire.hpp"

namespace gpunion::resilience {
namespace fs = std::filesystem;

bool MemoryCheckpointStore::available(const StorageTarget& target) const {
  return !availability_ || availability_(target);
}

void MemoryCheckpointStore::put(const CheckpointManifest& manifest, const std::string& blob) {
  if (!available(manifest.target)) {
    throw Error(ErrorCode::StorageTargetUnavailable, "storage target unavailable");
  }
  auto& job = objects_[{storage_path(manifest.target), manifest.job_id.value}];
  job[manifest.seq] = Object{manifest, blob};
}

std::vector<CheckpointManifest> MemoryCheckpointStore::list(const StorageTarget& target,
                                                            JobId job) const {
  std::vector<CheckpointManifest> out;
  if (!available(target)) return out;
  auto it = objects_.find({storage_path(target), job.value});
  if (it == objects_.end()) return out;
  out.reserve(it->second.size());
  for (const auto& [seq, obj] : it->second) out.push_back(obj.manifest);
  return out;
}

std::optional<std::string> MemoryCheckpointStore::get(const StorageTarget& target, JobId job,
                                                      std::uint64_t seq) const {
  if (!available(target)) return std::nullopt;
  auto it = objects_.find({storage_path(target), job.value});
  if (it == objects_.end()) return std::nullopt;
  auto obj = it->second.find(seq);
  if (obj == it->second.end()) return std::nullopt;
  return obj->second.blob;
}

void MemoryCheckpointStore::corrupt(const StorageTarget& target, JobId job, std::uint64_t seq) {
  auto& obj = objects_.at({storage_path(target), job.value}).at(seq);
  if (obj.blob && !obj.blob->empty()) (*obj.blob)[obj.blob->size() / 2] ^= 0x20;
}

void MemoryCheckpointStore::drop_payload(const StorageTarget& target, JobId job,
                                         std::uint64_t seq) {
  objects_.at({storage_path(target), job.value}).at(seq).blob.reset();
}

fs::path FileCheckpointStore::job_dir(const StorageTarget& target, JobId job) {
  return fs::path(storage_path(target)) / to_string(job);
}

bool FileCheckpointStore::available(const StorageTarget& target) const {
  std::error_code ec;
  fs::path root(storage_path(target));
  if (root.empty()) return false;
  fs::create_directories(root, ec);
  return !ec && fs::is_directory(root, ec);
}

namespace {

void write_atomically(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::StorageTargetUnavailable, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::StorageTargetUnavailable, "cannot rename " + tmp.string());
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void FileCheckpointStore::put(const CheckpointManifest& manifest, const std::string& blob) {
  if (!available(manifest.target)) {
    throw Error(ErrorCode::StorageTargetUnavailable,
                "storage target " + storage_path(manifest.target) + " unavailable");
  }
  fs::path dir = job_dir(manifest.target, manifest.job_id);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::StorageTargetUnavailable, "cannot create " + dir.string());
  std::string seq = std::to_string(manifest.seq);
  // Payload first, so a manifest never points at a payload that was not written.
  write_atomically(dir / (seq + ".ckpt"), blob);
  write_atomically(dir / (seq + ".manifest.json"), Json(manifest).dump(2));
}

std::vector<CheckpointManifest> FileCheckpointStore::list(const StorageTarget& target,
                                                          JobId job) const {
  std::vector<CheckpointManifest> out;
  std::error_code ec;
  fs::path dir = job_dir(target, job);
  if (!fs::is_directory(dir, ec)) return out;
  const std::string suffix = ".manifest.json";
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    std::string name = entry.path().filename().string();
    if (name.size() <= suffix.size() || !name.ends_with(suffix)) continue;
    auto text = read_file(entry.path());
    if (!text) continue;
    Json j = Json::parse(*text, nullptr, false);
    if (j.is_discarded()) continue;
    try {
      out.push_back(j.get<CheckpointManifest>());
    } catch (const std::exception&) {
      continue;  // unreadable manifests cannot take part in a restore
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.seq < b.seq; });
  return out;
}

std::optional<std::string> FileCheckpointStore::get(const StorageTarget& target, JobId job,
                                                    std::uint64_t seq) const {
  return read_file(job_dir(target, job) / (std::to_string(seq) + ".ckpt"));
}

}  // namespace gpunion::resilience
