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

#include <chrono>
#include <cmath>
#include <cstdint>

namespace gpunion {

// Millisecond clock shared by the live system and the simulator. Time points
// count milliseconds from an arbitrary epoch chosen by the Clock instance.
struct EpochClock {
  using rep = std::int64_t;
  using period = std::milli;
  using duration = std::chrono::milliseconds;
  using time_point = std::chrono::time_point<EpochClock>;
  static constexpr bool is_steady = true;
};

using Duration = std::chrono::milliseconds;
using Timestamp = EpochClock::time_point;

inline constexpr Timestamp kEpoch{};

inline Duration from_seconds(double seconds) {
  return Duration{static_cast<std::int64_t>(std::llround(seconds * 1000.0))};
}

inline double to_seconds(Duration d) { return static_cast<double>(d.count()) / 1000.0; }

inline Timestamp at_ms(std::int64_t ms) { return Timestamp{Duration{ms}}; }

inline std::int64_t ms_since_epoch(Timestamp t) { return t.time_since_epoch().count(); }

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() const = 0;
};

// Settable clock for tests and the simulator.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Timestamp start = kEpoch) : now_(start) {}
  Timestamp now() const override { return now_; }
  void set(Timestamp t) { now_ = t; }
  void advance(Duration d) { now_ += d; }

 private:
  Timestamp now_;
};

// Wall clock, milliseconds since the Unix epoch.
class SystemClock final : public Clock {
 public:
  Timestamp now() const override {
    auto since = std::chrono::system_clock::now().time_since_epoch();
    return Timestamp{std::chrono::duration_cast<Duration>(since)};
  }
};

}  // namespace gpunion
