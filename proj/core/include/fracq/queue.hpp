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

#ifndef FRACQ_QUEUE_HPP_
#define FRACQ_QUEUE_HPP_

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fracq/processes.hpp"
#include "fracq/rng.hpp"

namespace fracq {

/// Right-continuous piecewise-constant path on [0, inf): initial_value on
/// [0, jump_times[0]), values[k] on [jump_times[k], jump_times[k+1]).
struct StepFunction {
  std::vector<double> jump_times;
  std::vector<double> values;
  double initial_value = 0.0;

  double at(double t) const;
  void validate() const;
};

/// Phi(f)(t) = f(t) - inf_{s <= t} f(s), for f(0) = 0.
StepFunction skorokhod_reflect(const StepFunction& f);

enum class QueueEvent : char { kArrival = 'A', kDeparture = 'D', kWasted = 'W' };

/// Event-indexed record of a multiclass priority queue. Row k describes the
/// state right after event k.
struct QueueTrajectory {
  int classes = 0;
  double horizon = 0.0;
  std::vector<double> event_times;
  std::vector<QueueEvent> event_types;
  /// Arrival class or class served; 0 for wasted services.
  std::vector<int> event_classes;
  /// Row-major [event][class] queue lengths.
  std::vector<std::int64_t> lengths;
  std::vector<std::int64_t> total_length;
  /// inf_{s <= t} (N(s) - D(s)), including s = 0.
  std::vector<std::int64_t> running_infimum;
  std::vector<double> emptying_times;
  std::int64_t wasted_services = 0;

  std::size_t size() const { return event_times.size(); }
  std::span<const std::int64_t> lengths_at(std::size_t event) const {
    return {lengths.data() + event * static_cast<std::size_t>(classes),
            static_cast<std::size_t>(classes)};
  }
};

/// Restless priority queue driven by labeled arrivals and departure triggers.
/// A trigger removes one customer from the lowest-indexed nonempty class or
/// is wasted. Simultaneous arrival and trigger: the arrival goes first.
QueueTrajectory simulate_multiclass_queue(const EventTimeline& arrivals,
                                          const EventTimeline& departures);

/// Q_{<= i} as a step function over the trajectory's events.
StepFunction aggregate_lengths(const QueueTrajectory& traj, int i);

/// N_{<= i} - D as a step function; Phi of it is Q_{<= i}.
StepFunction net_input(const EventTimeline& arrivals, const EventTimeline& departures,
                       int up_to_class);

// Location distributions for the continuum-class queue.
struct UniformLocations {
  double a = 0.0;
  double b = 1.0;
};
struct PointMassLocations {
  std::vector<double> locations;
  std::vector<double> weights;
};
struct ExponentialLocations {
  double rate = 1.0;
};
struct EmpiricalLocations {
  std::vector<double> values;
};

class LocationSampler {
 public:
  using Spec = std::variant<UniformLocations, PointMassLocations, ExponentialLocations,
                            EmpiricalLocations>;

  explicit LocationSampler(Spec spec);
  /// Parses "uniform:a,b", "point:x1@w1,x2@w2", "exp:rate", "empirical:v1,v2,...".
  static LocationSampler parse(const std::string& text);

  double draw(RngStream& rng) const;
  /// inf{x >= 0 : F(x) > 0}.
  double lower_support() const;
  const Spec& spec() const { return spec_; }
  std::string describe() const;

 private:
  Spec spec_;
  std::vector<double> cumulative_;
};

inline constexpr double kEmptyBestAsk = std::numeric_limits<double>::infinity();

struct ContinuumQueueState {
  /// location -> number of customers; atoms keep multiplicities.
  std::map<double, std::int64_t> occupied;

  double best_ask() const { return occupied.empty() ? kEmptyBestAsk : occupied.begin()->first; }
  std::int64_t total() const;
  /// Q_t(x): customers at locations <= x.
  std::int64_t count_up_to(double x) const;
};

struct ContinuumQueueResult {
  StepFunction best_ask;
  ContinuumQueueState final_state;
  std::vector<double> event_times;
  std::vector<std::int64_t> total_length;
  std::int64_t wasted_services = 0;
};

/// Arrivals insert a customer at a location drawn from `locations`; each
/// departure trigger removes one customer at the smallest occupied location.
ContinuumQueueResult simulate_continuum_queue(const EventTimeline& arrivals,
                                              const LocationSampler& locations,
                                              const EventTimeline& departures,
                                              RngStream& rng);

}  // namespace fracq

#endif  // FRACQ_QUEUE_HPP_
