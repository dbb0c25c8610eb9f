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
#include <optional>
#include <string>

#include "gpunion/core/ids.hpp"

namespace gpunion::agent {

// Where the agent keeps its machine identity and bearer token.
class IdentityStore {
 public:
  virtual ~IdentityStore() = default;
  virtual std::optional<NodeId> node_id() const = 0;
  virtual void save_node_id(const NodeId& id) = 0;
  virtual std::optional<std::string> token() const = 0;
  virtual void save_token(const std::string& token) = 0;
  virtual void log(const std::string& line) = 0;

  // The stored id, or a fresh random one that is persisted first.
  NodeId load_or_create();
};

class MemoryIdentityStore final : public IdentityStore {
 public:
  explicit MemoryIdentityStore(std::optional<NodeId> id = std::nullopt) : id_(id) {}
  std::optional<NodeId> node_id() const override { return id_; }
  void save_node_id(const NodeId& id) override { id_ = id; }
  std::optional<std::string> token() const override { return token_; }
  void save_token(const std::string& token) override { token_ = token; }
  void log(const std::string&) override {}

 private:
  std::optional<NodeId> id_;
  std::optional<std::string> token_;
};

// state_dir/node_id (hex text), state_dir/token, state_dir/agent.log.
class FileIdentityStore final : public IdentityStore {
 public:
  explicit FileIdentityStore(std::filesystem::path state_dir);
  std::optional<NodeId> node_id() const override;
  void save_node_id(const NodeId& id) override;
  std::optional<std::string> token() const override;
  void save_token(const std::string& token) override;
  void log(const std::string& line) override;

 private:
  std::filesystem::path dir_;
};

}  // namespace gpunion::agent
