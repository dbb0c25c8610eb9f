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

#include "gpunion/sim/report.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "gpunion/core/error.hpp"

namespace gpunion::sim {

namespace {

constexpr std::array kKinds{"ScheduledDeparture", "EmergencyDeparture", "TemporaryUnavailability"};

std::string number(const Json& v, int precision = 2) {
  if (v.is_null()) return "-";
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v.get<double>();
  return out.str();
}


void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + path.string());
  out << content;
}

struct Bar {
  std::string label;
  double value;
};

// Minimal grouped bar chart; one series per group entry.
std::string bar_svg(const std::string& title, const std::string& unit, const std::vector<Bar>& bars) {
  const double width = 120.0 * static_cast<double>(std::max<std::size_t>(bars.size(), 1)) + 80.0;
  const double height = 260.0, top = 40.0, bottom = 200.0;
  double max = 0;
  for (const auto& b : bars) max = std::max(max, b.value);
  if (max <= 0) max = 1;
  std::ostringstream out;
  out << std::fixed << std::setprecision(1);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<text x=\"10\" y=\"20\" font-size=\"14\">" << title << " (" << unit << ")</text>\n";
  out << "<line x1=\"50\" y1=\"" << bottom << "\" x2=\"" << width - 10 << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double h = (bottom - top) * bars[i].value / max;
    const double x = 60.0 + 120.0 * static_cast<double>(i);
    out << "<rect x=\"" << x << "\" y=\"" << bottom - h << "\" width=\"80\" height=\"" << h
        << "\" fill=\"#4a7ab7\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << bottom - h - 4 << "\">" << bars[i].value << "</text>\n";
    out << "<text x=\"" << x << "\" y=\"" << bottom + 16 << "\">" << bars[i].label << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string short_kind(const std::string& kind) {
  if (kind == "ScheduledDeparture") return "scheduled";
  if (kind == "EmergencyDeparture") return "emergency";
  return "temporary";
}

}  // namespace

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << (c ? "  " : "") << std::left << std::setw(static_cast<int>(width[c])) << cells[c];
    }
    out << '\n';
  };
  line(header);
  std::vector<std::string> rule;
  for (auto w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& r : rows) line(r);
  return out.str();
}

std::string render_tables(const Json& report) {
  const auto& c = report.at("cluster");
  std::ostringstream out;
  out << "scenario " << report.at("scenario").get<std::string>() << "  seed "
      << report.at("seed").get<std::uint64_t>() << "  trace " << report.at("trace_digest").get<std::string>()
      << "\n\n";

  out << "Utilization\n";
  const Json& base = c.at("baseline_utilization_pct");
  std::string ratio = "-";
  if (!base.is_null() && base.get<double>() > 0) {
    ratio = number(c.at("utilization_pct").get<double>() / base.get<double>());
  }
  out << render_table({"mode", "utilization_pct"},
               {{"static ownership", number(base)}, {"gpunion", number(c.at("utilization_pct"))}});
  out << "ratio " << ratio << "\n\n";

  out << "Migration performance\n";
  std::vector<std::vector<std::string>> rows;
  for (const char* kind : kKinds) {
    const auto& k = c.at("by_kind");
    if (!k.contains(kind)) {
      rows.push_back({short_kind(kind), "0", "0", "0", "0", "-", "0.00"});
      continue;
    }
    const auto& s = k.at(kind);
    rows.push_back({short_kind(kind), std::to_string(s.at("events").get<std::uint64_t>()),
                    std::to_string(s.at("displaced").get<std::uint64_t>()),
                    std::to_string(s.at("relaunched").get<std::uint64_t>()),
                    std::to_string(s.at("returned").get<std::uint64_t>()), number(s.at("mean_lost_work_s")),
                    number(s.at("max_lost_work_s"))});
  }
  out << render_table({"kind", "events", "displaced", "relaunched", "returned", "mean_lost_s", "max_lost_s"}, rows);
  out << "graceful_migration_success_pct " << number(c.at("graceful_migration_success_pct")) << " ("
      << c.at("graceful_successes").get<std::uint64_t>() << "/" << c.at("graceful_attempts").get<std::uint64_t>()
      << ")\n";
  out << "return_migration_pct " << number(c.at("return_migration_pct")) << "\n";
  out << "mean_lost_work_s " << number(c.at("mean_lost_work_s")) << "\n";
  out << "backup_bandwidth_share_pct " << number(c.at("backup_bandwidth_share_pct"), 4) << "\n\n";

  out << "Jobs\n";
  rows.clear();
  for (const auto& j : report.at("jobs")) {
    rows.push_back({std::to_string(j.at("job_id").get<std::uint64_t>()), j.at("workload").get<std::string>(),
                    j.at("final_state").get<std::string>(),
                    std::to_string(j.at("interruptions").get<std::uint32_t>()),
                    std::to_string(j.at("migrations").get<std::uint32_t>()), number(j.at("lost_work_s")),
                    number(j.at("overhead_pct"))});
  }
  out << render_table({"job", "workload", "state", "interruptions", "migrations", "lost_s", "overhead_pct"}, rows);
  out << "completed " << c.at("jobs_completed").get<std::uint64_t>() << "/" << c.at("jobs_total").get<std::uint64_t>()
      << "  lost " << c.at("jobs_lost").get<std::uint64_t>() << "\n";
  return out.str();
}

void write_plots(const Json& report, const std::filesystem::path& plots_dir) {
  std::filesystem::create_directories(plots_dir);
  const auto& c = report.at("cluster");
  const double base = c.at("baseline_utilization_pct").is_null() ? 0.0 : c.at("baseline_utilization_pct").get<double>();
  const double util = c.at("utilization_pct").get<double>();
  std::ostringstream csv;
  csv << "mode,utilization_pct\nstatic_ownership," << base << "\ngpunion," << util << "\n";
  write_file(plots_dir / "utilization.csv", csv.str());
  write_file(plots_dir / "utilization.svg",
             bar_svg("GPU utilization", "%", {{"static", base}, {"gpunion", util}}));

  std::ostringstream mcsv;
  mcsv << "kind,events,displaced,relaunched,returned,mean_lost_work_s,max_lost_work_s\n";
  std::vector<Bar> lost;
  for (const char* kind : kKinds) {
    const auto& k = c.at("by_kind");
    if (!k.contains(kind)) {
      mcsv << short_kind(kind) << ",0,0,0,0,,0\n";
      lost.push_back({short_kind(kind), 0});
      continue;
    }
    const auto& s = k.at(kind);
    const Json& mean = s.at("mean_lost_work_s");
    mcsv << short_kind(kind) << ',' << s.at("events").get<std::uint64_t>() << ','
         << s.at("displaced").get<std::uint64_t>() << ',' << s.at("relaunched").get<std::uint64_t>() << ','
         << s.at("returned").get<std::uint64_t>() << ',' << (mean.is_null() ? "" : mean.dump()) << ','
         << s.at("max_lost_work_s").dump() << "\n";
    lost.push_back({short_kind(kind), mean.is_null() ? 0.0 : mean.get<double>()});
  }
  write_file(plots_dir / "migration.csv", mcsv.str());
  write_file(plots_dir / "migration.svg", bar_svg("Mean lost work by interruption kind", "s", lost));
}

void write_outputs(const SimReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const Json doc = to_json(report);
  write_file(out_dir / "report.json", doc.dump(2) + "\n");
  write_file(out_dir / "trace.csv", trace_csv(report.trace));
  write_plots(doc, out_dir / "plots");
}

}  // namespace gpunion::sim
