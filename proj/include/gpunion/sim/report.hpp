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
#include <string>

#include "gpunion/sim/simulator.hpp"

namespace gpunion::sim {

// Left-aligned columns under a dashed rule.
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

// Tables shaped like the utilization and migration-performance figures,
// rendered from a report.json document.
std::string render_tables(const Json& report);

// Writes plots/utilization.{csv,svg} and plots/migration.{csv,svg}.
void write_plots(const Json& report, const std::filesystem::path& plots_dir);

// report.json, trace.csv and plots/ under `out_dir`.
void write_outputs(const SimReport& report, const std::filesystem::path& out_dir);

}  // namespace gpunion::sim
