// Copyright 2026 The fracq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fracq/csv.hpp"

#include <charconv>
#include <cmath>

#include "fracq/error.hpp"
#include "fracq/stats.hpp"

namespace fracq::csv {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_timeline(std::ostream& out, const EventTimeline& events) {
  out << "time,class\n";
  for (std::size_t k = 0; k < events.size(); ++k) {
    out << format_double(events.times[k]) << ',';
    if (events.labeled()) out << events.labels[k];
    out << '\n';
  }
}

void write_clock_grid(std::ostream& out, const InverseClockGrid& grid) {
  out << "t,y\n";
  for (std::size_t k = 0; k < grid.t_grid.size(); ++k) {
    out << format_double(grid.t_grid[k]) << ',' << format_double(grid.y_values[k]) << '\n';
  }
}

void write_trajectory(std::ostream& out, const QueueTrajectory& traj) {
  out << "time,event_type,class";
  for (int i = 1; i <= traj.classes; ++i) out << ",q_" << i;
  out << ",q_total,infimum\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << format_double(traj.event_times[k]) << ',' << static_cast<char>(traj.event_types[k])
        << ',';
    if (traj.event_types[k] != QueueEvent::kWasted) out << traj.event_classes[k];
    for (auto q : traj.lengths_at(k)) out << ',' << q;
    out << ',' << traj.total_length[k] << ',' << traj.running_infimum[k] << '\n';
  }
}

void write_best_ask(std::ostream& out, const StepFunction& best_ask) {
  out << "time,best_ask\n";
  out << "0," << format_double(best_ask.initial_value) << '\n';
  for (std::size_t k = 0; k < best_ask.jump_times.size(); ++k) {
    out << format_double(best_ask.jump_times[k]) << ',' << format_double(best_ask.values[k])
        << '\n';
  }
}

void write_pairs(std::ostream& out, const std::string& x_name, const std::string& y_name,
                 std::span<const std::pair<double, double>> rows) {
  out << x_name << ',' << y_name << '\n';
  for (const auto& [x, y] : rows) out << format_double(x) << ',' << format_double(y) << '\n';
}

void write_path(std::ostream& out, const QueueTrajectory& traj) {
  out << "time,value\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << format_double(traj.event_times[k]) << ',' << traj.total_length[k] << '\n';
  }
}

void emit_plot_data(std::ostream& out, const std::string& kind, const SamplePair& pair) {
  if (kind == "ecdf") {
    auto rows = stats::ecdf(pair.observed);
    write_pairs(out, "value", "cum_prob", rows);
  } else if (kind == "qq") {
    if (pair.reference.empty()) throw InvalidParameter("qq plot needs a reference sample");
    auto rows = stats::qq_pairs(pair.reference, pair.observed);
    write_pairs(out, "theoretical_q", "empirical_q", rows);
  } else if (kind == "path") {
    if (pair.observed.size() % 2 != 0) throw InvalidParameter("path data must be (time, value) pairs");
    std::vector<std::pair<double, double>> rows;
    for (std::size_t k = 0; k + 1 < pair.observed.size(); k += 2) {
      rows.emplace_back(pair.observed[k], pair.observed[k + 1]);
    }
    write_pairs(out, "time", "value", rows);
  } else {
    throw InvalidParameter("unknown plot kind '" + kind + "'");
  }
}

}  // namespace fracq::csv
