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

#ifndef FRACQ_PROCESSES_HPP_
#define FRACQ_PROCESSES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fracq/rng.hpp"
#include "fracq/special_functions.hpp"

namespace fracq {

inline constexpr std::size_t kDefaultEventCap = 10'000'000;

/// Jump times of a counting process on (0, horizon], optionally marked with
/// class ids 1..classes. classes == 0 means unlabeled.
struct EventTimeline {
  double horizon = 0.0;
  std::vector<double> times;
  std::vector<int> labels;
  int classes = 0;

  bool labeled() const { return classes > 0; }
  std::size_t size() const { return times.size(); }
  /// N(t): number of events at times <= t.
  std::int64_t count_at(double t) const;
  /// Throws PreconditionError when an invariant is broken.
  void validate() const;
};

/// Events at times <= t, with horizon t.
EventTimeline truncate(const EventTimeline& events, double t);

/// L_theta(k step), k = 0..m.
struct SubordinatorGrid {
  double step = 0.0;
  std::vector<double> values;

  double s_max() const {
    return values.empty() ? 0.0 : step * static_cast<double>(values.size() - 1);
  }
};

/// Y_theta(t_i) on a t-grid.
struct InverseClockGrid {
  std::vector<double> t_grid;
  std::vector<double> y_values;
};

/// Class-assignment probabilities p_1..p_K and their partial sums P_i.
class ClassProbabilities {
 public:
  explicit ClassProbabilities(std::vector<double> p);

  int size() const { return static_cast<int>(p_.size()); }
  double p(int class_id) const;
  /// P_i = p_1 + ... + p_i, with P_0 = 0.
  double cumulative(int i) const;
  const std::vector<double>& probabilities() const { return p_; }
  /// Class id i with P_{i-1} < u <= P_i.
  int draw(double u) const;

 private:
  std::vector<double> p_;
  std::vector<double> cumulative_;
};

SubordinatorGrid simulate_subordinator(double theta, double step, double s_max,
                                       RngStream& rng);

/// Appends independent increments until the grid reaches s_max.
void extend_subordinator(SubordinatorGrid& grid, double theta, double s_max,
                         RngStream& rng);

/// y_i = min{k step : L(k step) > t_i}, with y_i = 0 at t_i = 0.
/// Piecewise-constant; overestimates the continuous inverse by at most one
/// step.
InverseClockGrid invert_subordinator(const SubordinatorGrid& grid,
                                     std::span<const double> t_grid);

/// s-grid spacing used when callers pass step <= 0: 1e-3 horizon^theta.
double default_clock_step(double theta, double horizon);

/// Inverse of the piecewise-linear interpolation of a simulated L grid.
/// Between grid nodes L is interpolated linearly, so Y is continuous and
/// nondecreasing, with |Y - Y_true| <= step and passage_time(at(t)) = t.
class InverseClockPath {
 public:
  InverseClockPath() = default;
  explicit InverseClockPath(SubordinatorGrid grid);

  /// Y(t) for 0 <= t < covered_until().
  double at(double t) const;
  /// L(y) interpolated: the time at which the clock reads y.
  double passage_time(double y) const;
  /// Last simulated value of L; Y is known on [0, covered_until()).
  double covered_until() const { return grid_.values.back(); }
  const SubordinatorGrid& grid() const { return grid_; }

 private:
  SubordinatorGrid grid_;
};

/// Simulates L on [0, s] until L(s) > horizon and wraps it as a clock.
InverseClockPath simulate_inverse_clock(double theta, double horizon, double step,
                                        RngStream& rng);

/// Renewal construction: partial sums of scaled Mittag-Leffler variates.
EventTimeline simulate_fpp_renewal(FppParams p, double horizon, RngStream& rng,
                                   std::size_t max_events = kDefaultEventCap);

struct TimeChangedFpp {
  EventTimeline events;
  InverseClockPath clock;
};

/// Time-change construction: rate lambda^theta Poisson events in clock time,
/// mapped to real time through the inverse of the simulated clock.
TimeChangedFpp simulate_fpp_timechange_with_clock(
    FppParams p, double horizon, double step, RngStream& rng,
    std::size_t max_events = kDefaultEventCap);

EventTimeline simulate_fpp_timechange(FppParams p, double horizon, double step,
                                      RngStream& rng,
                                      std::size_t max_events = kDefaultEventCap);

/// Independently marks each event with class i with probability p_i.
EventTimeline thin_events(const EventTimeline& events,
                          const ClassProbabilities& classes, RngStream& rng);

/// N^{(i)}(t) for a labeled timeline.
std::int64_t class_count_at(const EventTimeline& labeled, int class_id, double t);

/// N_{<= i}(t) = N^{(1)}(t) + ... + N^{(i)}(t).
std::int64_t aggregate_count_at(const EventTimeline& labeled, int up_to_class,
                                double t);

}  // namespace fracq

#endif  // FRACQ_PROCESSES_HPP_
