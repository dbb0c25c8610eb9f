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

#include <compare>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>

namespace gpunion {

// 128-bit machine identifier, rendered as 32 lowercase hex digits.
struct NodeId {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  std::string to_hex() const;
  static NodeId from_hex(std::string_view hex);  // throws Error(ValidationFailed)

  template <typename Rng>
  static NodeId random(Rng& rng) {
    std::uniform_int_distribution<std::uint64_t> dist;
    return NodeId{dist(rng), dist(rng)};
  }
  static NodeId generate();  // from std::random_device

  bool is_nil() const { return hi == 0 && lo == 0; }
  auto operator<=>(const NodeId&) const = default;
};

struct JobId {
  std::uint64_t value = 0;
  auto operator<=>(const JobId&) const = default;
};

std::string to_string(const NodeId& id);
std::string to_string(JobId id);

}  // namespace gpunion

template <>
struct std::hash<gpunion::NodeId> {
  std::size_t operator()(const gpunion::NodeId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.hi ^ (id.lo * 0x9e3779b97f4a7c15ULL));
  }
};

template <>
struct std::hash<gpunion::JobId> {
  std::size_t operator()(gpunion::JobId id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
