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

#ifndef FRACQ_CSV_HPP_
#define FRACQ_CSV_HPP_

#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fracq/processes.hpp"
#include "fracq/queue.hpp"
#include "fracq/report.hpp"

namespace fracq::csv {

/// 17 significant digits; "inf", "-inf" and "nan" for non-finite.
std::string format_double(double v);

/// time,class (class column empty for unlabeled timelines).
void write_timeline(std::ostream& out, const EventTimeline& events);
/// t,y
void write_clock_grid(std::ostream& out, const InverseClockGrid& grid);
/// time,event_type,class,q_1,...,q_K,q_total,infimum
void write_trajectory(std::ostream& out, const QueueTrajectory& traj);
/// time,best_ask; the empty-queue sentinel is written as inf.
void write_best_ask(std::ostream& out, const StepFunction& best_ask);

/// Two-column table with the given header names.
void write_pairs(std::ostream& out, const std::string& x_name, const std::string& y_name,
                 std::span<const std::pair<double, double>> rows);

/// Path plot data of a trajectory: time,value with value = q_total.
void write_path(std::ostream& out, const QueueTrajectory& traj);

/// Plot data for a sample pair. kind is "ecdf" (value,cum_prob),
/// "qq" (theoretical_q,empirical_q) or "path" (time,value, with the
/// observed vector read as consecutive (time, value) pairs).
void emit_plot_data(std::ostream& out, const std::string& kind, const SamplePair& pair);

}  // namespace fracq::csv

#endif  // FRACQ_CSV_HPP_
