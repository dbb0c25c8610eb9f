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

#include "gpunion/agent/identity.hpp"

#include <fstream>
#include <sstream>

#include "gpunion/core/error.hpp"

namespace gpunion::agent {
namespace fs = std::filesystem;

NodeId IdentityStore::load_or_create() {
  if (auto id = node_id()) return *id;
  NodeId id;
  do {
    id = NodeId::generate();
  } while (id.is_nil());
  save_node_id(id);
  return id;
}

FileIdentityStore::FileIdentityStore(fs::path state_dir) : dir_(std::move(state_dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::InvalidConfig, "cannot create state_dir " + dir_.string());
}

namespace {

std::optional<std::string> read_trimmed(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string text;
  std::getline(in, text);
  while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) text.pop_back();
  if (text.empty()) return std::nullopt;
  return text;
}

void write_private(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << text << '\n';
    if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::permissions(tmp, fs::perms::owner_read | fs::perms::owner_write, ec);
  fs::rename(tmp, path);
}

}  // namespace

std::optional<NodeId> FileIdentityStore::node_id() const {
  auto text = read_trimmed(dir_ / "node_id");
  if (!text) return std::nullopt;
  return NodeId::from_hex(*text);
}

void FileIdentityStore::save_node_id(const NodeId& id) { write_private(dir_ / "node_id", id.to_hex()); }

std::optional<std::string> FileIdentityStore::token() const { return read_trimmed(dir_ / "token"); }

void FileIdentityStore::save_token(const std::string& token) { write_private(dir_ / "token", token); }

void FileIdentityStore::log(const std::string& line) {
  std::ofstream out(dir_ / "agent.log", std::ios::app);
  out << line << '\n';
}

}  // namespace gpunion::agent
