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

#include "fracq/processes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracq/error.hpp"
#include "fracq/samplers.hpp"

namespace fracq {
namespace {

void check_horizon(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidParameter("horizon must be positive and finite");
  }
}

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw ResourceError("event count exceeds cap of " + std::to_string(cap));
  }
}

// Appends t keeping times strictly increasing; a float collision is
// resolved in insertion order by moving the later event up one ulp.
void push_strict(std::vector<double>& times, double t) {
  if (!times.empty() && t <= times.back()) {
    t = std::nextafter(times.back(), INFINITY);
  }
  times.push_back(t);
}

}  // namespace

std::int64_t EventTimeline::count_at(double t) const {
  return std::upper_bound(times.begin(), times.end(), t) - times.begin();
}

void EventTimeline::validate() const {
  if (!(horizon > 0.0)) throw PreconditionError("timeline horizon must be positive");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] > 0.0 && times[k] <= horizon)) {
      throw PreconditionError("timeline event outside (0, horizon]");
    }
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw PreconditionError("timeline times must be strictly increasing");
    }
  }
  if (labeled()) {
    if (labels.size() != times.size()) {
      throw PreconditionError("timeline labels must align with times");
    }
    for (int c : labels) {
      if (c < 1 || c > classes) throw PreconditionError("timeline label out of range");
    }
  } else if (!labels.empty()) {
    throw PreconditionError("unlabeled timeline carries labels");
  }
}

EventTimeline truncate(const EventTimeline& events, double t) {
  EventTimeline out;
  out.horizon = t;
  out.classes = events.classes;
  const auto n = static_cast<std::size_t>(events.count_at(t));
  out.times.assign(events.times.begin(), events.times.begin() + n);
  if (events.labeled()) out.labels.assign(events.labels.begin(), events.labels.begin() + n);
  return out;
}

ClassProbabilities::ClassProbabilities(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw InvalidParameter("class probabilities must be nonempty");
  double total = 0.0;
  cumulative_.reserve(p_.size() + 1);
  cumulative_.push_back(0.0);
  for (double v : p_) {
    if (!(v > 0.0)) throw InvalidParameter("class probabilities must be positive");
    total += v;
    cumulative_.push_back(total);
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw InvalidParameter("class probabilities must sum to 1");
  }
  cumulative_.back() = 1.0;
}

double ClassProbabilities::p(int class_id) const {
  if (class_id < 1 || class_id > size()) throw InvalidParameter("invalid class id");
  return p_[static_cast<std::size_t>(class_id - 1)];
}

double ClassProbabilities::cumulative(int i) const {
  if (i < 0 || i > size()) throw InvalidParameter("invalid class index");
  return cumulative_[static_cast<std::size_t>(i)];
}

int ClassProbabilities::draw(double u) const {
  // First partial sum >= u, skipping P_0.
  const auto it = std::lower_bound(cumulative_.begin() + 1, cumulative_.end(), u);
  const auto idx = std::min<std::ptrdiff_t>(it - cumulative_.begin(), size());
  return static_cast<int>(idx);
}

SubordinatorGrid simulate_subordinator(double theta, double step, double s_max,
                                       RngStream& rng) {
  validate_theta(theta);
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InvalidParameter("subordinator step must be positive");
  }
  if (!(s_max >= step)) throw InvalidParameter("subordinator s_max must be >= step");
  SubordinatorGrid grid;
  grid.step = step;
  grid.values.push_back(0.0);
  extend_subordinator(grid, theta, s_max, rng);
  return grid;
}

void extend_subordinator(SubordinatorGrid& grid, double theta, double s_max,
                         RngStream& rng) {
  validate_theta(theta);
  if (grid.values.empty()) grid.values.push_back(0.0);
  const auto m = static_cast<std::size_t>(std::floor(s_max / grid.step * (1.0 + 1e-12)));
  if (m + 1 <= grid.values.size()) return;
  if (m + 1 > grid.values.capacity()) {
    grid.values.reserve(std::max(m + 1, 2 * grid.values.capacity()));
  }
  if (theta == 1.0) {
    for (std::size_t k = grid.values.size(); k <= m; ++k) {
      grid.values.push_back(static_cast<double>(k) * grid.step);
    }
    return;
  }
  // Self-similarity: L(delta) = delta^(1/theta) L(1) in law.
  const double scale = std::pow(grid.step, 1.0 / theta);
  double level = grid.values.back();
  for (std::size_t k = grid.values.size(); k <= m; ++k) {
    level += scale * sample_positive_stable(theta, rng);
    grid.values.push_back(level);
  }
}

InverseClockGrid invert_subordinator(const SubordinatorGrid& grid,
                                     std::span<const double> t_grid) {
  if (grid.values.empty()) throw InvalidParameter("empty subordinator grid");
  InverseClockGrid out;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  out.y_values.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    if (t < 0.0 || (i > 0 && t < t_grid[i - 1])) {
      throw InvalidParameter("t_grid must be nonnegative and increasing");
    }
    if (t == 0.0) {
      out.y_values.push_back(0.0);
      continue;
    }
    const auto it = std::upper_bound(grid.values.begin(), grid.values.end(), t);
    if (it == grid.values.end()) {
      throw RangeError("subordinator path does not cover t = " + std::to_string(t));
    }
    out.y_values.push_back(static_cast<double>(it - grid.values.begin()) * grid.step);
  }
  return out;
}

double default_clock_step(double theta, double horizon) {
  validate_theta(theta);
  check_horizon(horizon);
  return 1e-3 * std::pow(horizon, theta);
}

InverseClockPath::InverseClockPath(SubordinatorGrid grid) : grid_(std::move(grid)) {
  if (grid_.values.size() < 2) throw InvalidParameter("clock grid needs two nodes");
}

double InverseClockPath::at(double t) const {
  const auto& v = grid_.values;
  if (t < 0.0) throw InvalidParameter("clock queried at negative time");
  const auto it = std::upper_bound(v.begin(), v.end(), t);
  if (it == v.end()) {
    throw RangeError("clock does not cover t = " + std::to_string(t));
  }
  const auto k = static_cast<std::size_t>(it - v.begin());
  // v[k-1] <= t < v[k]
  const double frac = (t - v[k - 1]) / (v[k] - v[k - 1]);
  return (static_cast<double>(k - 1) + frac) * grid_.step;
}

double InverseClockPath::passage_time(double y) const {
  const auto& v = grid_.values;
  if (y < 0.0) throw InvalidParameter("negative clock reading");
  const double pos = y / grid_.step;
  const auto k = static_cast<std::size_t>(std::floor(pos));
  if (k + 1 >= v.size()) {
    if (k + 1 == v.size() && pos == static_cast<double>(k)) return v[k];
    throw RangeError("clock reading beyond simulated range");
  }
  return v[k] + (pos - static_cast<double>(k)) * (v[k + 1] - v[k]);
}

InverseClockPath simulate_inverse_clock(double theta, double horizon, double step,
                                        RngStream& rng) {
  check_horizon(horizon);
  if (step <= 0.0) step = default_clock_step(theta, horizon);
  validate_theta(theta);
  if (!std::isfinite(step)) throw InvalidParameter("subordinator step must be finite");
  // L(s_max) is random, so coverage of the horizon cannot be preset:
  // extend one increment at a time until the path passes it.
  SubordinatorGrid grid;
  grid.step = step;
  grid.values.reserve(1024);
  grid.values.push_back(0.0);
  const double scale = theta == 1.0 ? step : std::pow(step, 1.0 / theta);
  double level = 0.0;
  while (level <= horizon) {
    if (theta == 1.0) {
      level = static_cast<double>(grid.values.size()) * step;
    } else {
      level += scale * sample_positive_stable(theta, rng);
    }
    grid.values.push_back(level);
  }
  return InverseClockPath(std::move(grid));
}

EventTimeline simulate_fpp_renewal(FppParams p, double horizon, RngStream& rng,
                                   std::size_t max_events) {
  validate(p);
  check_horizon(horizon);
  EventTimeline out;
  out.horizon = horizon;
  double t = 0.0;
  for (;;) {
    t += sample_mittag_leffler(p, rng);
    if (t > horizon) break;
    push_strict(out.times, t);
    check_cap(out.times.size(), max_events);
  }
  return out;
}

TimeChangedFpp simulate_fpp_timechange_with_clock(FppParams p, double horizon,
                                                  double step, RngStream& rng,
                                                  std::size_t max_events) {
  validate(p);
  check_horizon(horizon);
  if (step < 0.0 || !std::isfinite(step)) throw InvalidParameter("step must be positive");
  TimeChangedFpp out;
  out.clock = simulate_inverse_clock(p.theta, horizon, step, rng);
  out.events.horizon = horizon;
  const double rate = std::pow(p.lambda, p.theta);
  const double clock_end = out.clock.at(horizon);
  double y = 0.0;
  for (;;) {
    y += rng.exponential() / rate;
    if (y > clock_end) break;
    const double t = out.clock.passage_time(y);
    if (t > horizon) break;
    push_strict(out.events.times, t);
    check_cap(out.events.times.size(), max_events);
  }
  return out;
}

EventTimeline simulate_fpp_timechange(FppParams p, double horizon, double step,
                                      RngStream& rng, std::size_t max_events) {
  return simulate_fpp_timechange_with_clock(p, horizon, step, rng, max_events).events;
}

EventTimeline thin_events(const EventTimeline& events,
                          const ClassProbabilities& classes, RngStream& rng) {
  if (events.labeled()) throw InvalidParameter("thin_events expects an unlabeled timeline");
  EventTimeline out = events;
  out.classes = classes.size();
  out.labels.resize(out.times.size());
  for (int& label : out.labels) label = classes.draw(rng.uniform());
  return out;
}

std::int64_t class_count_at(const EventTimeline& labeled, int class_id, double t) {
  if (!labeled.labeled()) throw InvalidParameter("class_count_at needs a labeled timeline");
  if (class_id < 1 || class_id > labeled.classes) throw InvalidParameter("invalid class id");
  const auto n = static_cast<std::size_t>(labeled.count_at(t));
  return std::count(labeled.labels.begin(), labeled.labels.begin() + n, class_id);
}

std::int64_t aggregate_count_at(const EventTimeline& labeled, int up_to_class,
                                double t) {
  if (!labeled.labeled()) throw InvalidParameter("aggregate_count_at needs a labeled timeline");
  if (up_to_class < 1 || up_to_class > labeled.classes) {
    throw InvalidParameter("invalid class index");
  }
  const auto n = static_cast<std::size_t>(labeled.count_at(t));
  return std::count_if(labeled.labels.begin(), labeled.labels.begin() + n,
                       [up_to_class](int c) { return c <= up_to_class; });
}

}  // namespace fracq
