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

#include "fracq/queue.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "fracq/error.hpp"

namespace fracq {
namespace {

// Appends (t, v) to a step function, collapsing simultaneous jumps so that
// only the state after the last event at t is kept.
void push_jump(StepFunction& f, double t, double v) {
  if (!f.jump_times.empty() && f.jump_times.back() == t) {
    f.values.back() = v;
    return;
  }
  f.jump_times.push_back(t);
  f.values.push_back(v);
}

void check_same_horizon(const EventTimeline& a, const EventTimeline& b) {
  const double scale = std::max({1.0, std::fabs(a.horizon), std::fabs(b.horizon)});
  if (std::fabs(a.horizon - b.horizon) > 1e-12 * scale) {
    throw InvalidParameter("arrival and departure timelines cover different horizons");
  }
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_list(const std::string& body) {
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidParameter("invalid number in location spec: '" + item + "'");
    }
    if (used != item.size()) throw InvalidParameter("invalid number in location spec: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

double StepFunction::at(double t) const {
  const auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
  if (it == jump_times.begin()) return initial_value;
  return values[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

void StepFunction::validate() const {
  if (jump_times.size() != values.size()) {
    throw PreconditionError("step function jump_times and values differ in length");
  }
  for (std::size_t k = 0; k < jump_times.size(); ++k) {
    if (jump_times[k] < 0.0 || (k > 0 && !(jump_times[k] > jump_times[k - 1]))) {
      throw PreconditionError("step function jump times must be nonnegative and increasing");
    }
  }
}

StepFunction skorokhod_reflect(const StepFunction& f) {
  f.validate();
  if (f.initial_value != 0.0) {
    throw PreconditionError("skorokhod_reflect requires f(0) = 0");
  }
  StepFunction out;
  out.jump_times = f.jump_times;
  out.values.reserve(f.values.size());
  double running_min = 0.0;
  for (double v : f.values) {
    running_min = std::min(running_min, v);
    out.values.push_back(v - running_min);
  }
  return out;
}

QueueTrajectory simulate_multiclass_queue(const EventTimeline& arrivals,
                                          const EventTimeline& departures) {
  if (!arrivals.labeled()) throw InvalidParameter("arrivals must be labeled with classes");
  check_same_horizon(arrivals, departures);
  const int k_classes = arrivals.classes;
  const auto kk = static_cast<std::size_t>(k_classes);

  QueueTrajectory traj;
  traj.classes = k_classes;
  traj.horizon = arrivals.horizon;
  const std::size_t n_events = arrivals.size() + departures.size();
  traj.event_times.reserve(n_events);
  traj.event_types.reserve(n_events);
  traj.event_classes.reserve(n_events);
  traj.lengths.reserve(n_events * kk);
  traj.total_length.reserve(n_events);
  traj.running_infimum.reserve(n_events);

  std::vector<std::int64_t> q(kk, 0);
  std::int64_t total = 0;
  std::int64_t net = 0;
  std::int64_t infimum = 0;
  std::size_t ia = 0;
  std::size_t id = 0;
  while (ia < arrivals.size() || id < departures.size()) {
    const bool take_arrival =
        id == departures.size() ||
        (ia < arrivals.size() && arrivals.times[ia] <= departures.times[id]);
    double t = 0.0;
    if (take_arrival) {
      t = arrivals.times[ia];
      const int c = arrivals.labels[ia++];
      ++q[static_cast<std::size_t>(c - 1)];
      ++total;
      ++net;
      traj.event_types.push_back(QueueEvent::kArrival);
      traj.event_classes.push_back(c);
    } else {
      t = departures.times[id++];
      --net;
      const auto it = std::find_if(q.begin(), q.end(), [](std::int64_t v) { return v > 0; });
      if (it == q.end()) {
        ++traj.wasted_services;
        infimum = std::min(infimum, net);
        traj.event_types.push_back(QueueEvent::kWasted);
        traj.event_classes.push_back(0);
      } else {
        --*it;
        --total;
        if (total == 0) traj.emptying_times.push_back(t);
        traj.event_types.push_back(QueueEvent::kDeparture);
        traj.event_classes.push_back(static_cast<int>(it - q.begin()) + 1);
      }
    }
    traj.event_times.push_back(t);
    traj.lengths.insert(traj.lengths.end(), q.begin(), q.end());
    traj.total_length.push_back(total);
    traj.running_infimum.push_back(infimum);
  }
  return traj;
}

StepFunction aggregate_lengths(const QueueTrajectory& traj, int i) {
  if (i < 1 || i > traj.classes) throw InvalidParameter("invalid class index");
  StepFunction f;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto row = traj.lengths_at(k);
    std::int64_t s = 0;
    for (int c = 0; c < i; ++c) s += row[static_cast<std::size_t>(c)];
    push_jump(f, traj.event_times[k], static_cast<double>(s));
  }
  return f;
}

StepFunction net_input(const EventTimeline& arrivals, const EventTimeline& departures,
                       int up_to_class) {
  if (!arrivals.labeled()) throw InvalidParameter("arrivals must be labeled with classes");
  if (up_to_class < 1 || up_to_class > arrivals.classes) {
    throw InvalidParameter("invalid class index");
  }
  StepFunction f;
  std::int64_t level = 0;
  std::size_t ia = 0;
  std::size_t id = 0;
  while (ia < arrivals.size() || id < departures.size()) {
    const bool take_arrival =
        id == departures.size() ||
        (ia < arrivals.size() && arrivals.times[ia] <= departures.times[id]);
    double t = 0.0;
    if (take_arrival) {
      t = arrivals.times[ia];
      if (arrivals.labels[ia++] > up_to_class) continue;
      ++level;
    } else {
      t = departures.times[id++];
      --level;
    }
    push_jump(f, t, static_cast<double>(level));
  }
  return f;
}

LocationSampler::LocationSampler(Spec spec) : spec_(std::move(spec)) {
  if (const auto* u = std::get_if<UniformLocations>(&spec_)) {
    if (!(u->a < u->b) || !std::isfinite(u->a) || !std::isfinite(u->b) || u->a < 0.0) {
      throw InvalidParameter("uniform locations need 0 <= a < b");
    }
  } else if (const auto* pm = std::get_if<PointMassLocations>(&spec_)) {
    if (pm->locations.empty() || pm->locations.size() != pm->weights.size()) {
      throw InvalidParameter("point-mass locations need matching locations and weights");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < pm->weights.size(); ++k) {
      if (!(pm->weights[k] > 0.0) || !(pm->locations[k] >= 0.0)) {
        throw InvalidParameter("point-mass weights must be positive, locations >= 0");
      }
      total += pm->weights[k];
      cumulative_.push_back(total);
    }
    if (std::fabs(total - 1.0) > 1e-9) throw InvalidParameter("point-mass weights must sum to 1");
    cumulative_.back() = 1.0;
  } else if (const auto* e = std::get_if<ExponentialLocations>(&spec_)) {
    if (!(e->rate > 0.0) || !std::isfinite(e->rate)) {
      throw InvalidParameter("exponential locations need a positive rate");
    }
  } else if (const auto* em = std::get_if<EmpiricalLocations>(&spec_)) {
    if (em->values.empty()) throw InvalidParameter("empirical locations must be nonempty");
    for (double v : em->values) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidParameter("empirical locations must be >= 0");
    }
  }
}

LocationSampler LocationSampler::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidParameter("location spec needs 'kind:args': " + text);
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  if (kind == "uniform") {
    const auto v = parse_list(body);
    if (v.size() != 2) throw InvalidParameter("uniform location spec needs a,b");
    return LocationSampler(UniformLocations{v[0], v[1]});
  }
  if (kind == "exp") {
    const auto v = parse_list(body);
    if (v.size() != 1) throw InvalidParameter("exp location spec needs a rate");
    return LocationSampler(ExponentialLocations{v[0]});
  }
  if (kind == "empirical") return LocationSampler(EmpiricalLocations{parse_list(body)});
  if (kind == "point") {
    PointMassLocations pm;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto at = item.find('@');
      const auto loc = parse_list(item.substr(0, at));
      if (loc.size() != 1) throw InvalidParameter("invalid point-mass entry: " + item);
      pm.locations.push_back(loc[0]);
      if (at == std::string::npos) {
        pm.weights.push_back(1.0);
      } else {
        const auto w = parse_list(item.substr(at + 1));
        if (w.size() != 1) throw InvalidParameter("invalid point-mass entry: " + item);
        pm.weights.push_back(w[0]);
      }
    }
    return LocationSampler(std::move(pm));
  }
  throw InvalidParameter("unknown location distribution: " + kind);
}

double LocationSampler::draw(RngStream& rng) const {
  if (const auto* u = std::get_if<UniformLocations>(&spec_)) {
    return u->a + (u->b - u->a) * rng.uniform();
  }
  if (const auto* pm = std::get_if<PointMassLocations>(&spec_)) {
    const double u = rng.uniform();
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return pm->locations[static_cast<std::size_t>(it - cumulative_.begin())];
  }
  if (const auto* e = std::get_if<ExponentialLocations>(&spec_)) {
    return rng.exponential() / e->rate;
  }
  const auto& values = std::get<EmpiricalLocations>(spec_).values;
  const auto n = values.size();
  auto k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
  return values[std::min(k, n - 1)];
}

double LocationSampler::lower_support() const {
  if (const auto* u = std::get_if<UniformLocations>(&spec_)) return u->a;
  if (const auto* pm = std::get_if<PointMassLocations>(&spec_)) {
    return *std::min_element(pm->locations.begin(), pm->locations.end());
  }
  if (std::holds_alternative<ExponentialLocations>(spec_)) return 0.0;
  const auto& values = std::get<EmpiricalLocations>(spec_).values;
  return *std::min_element(values.begin(), values.end());
}

std::string LocationSampler::describe() const {
  if (const auto* u = std::get_if<UniformLocations>(&spec_)) {
    return "uniform:" + shortest(u->a) + "," + shortest(u->b);
  }
  if (const auto* pm = std::get_if<PointMassLocations>(&spec_)) {
    std::string s = "point:";
    for (std::size_t k = 0; k < pm->locations.size(); ++k) {
      if (k) s += ",";
      s += shortest(pm->locations[k]) + "@" + shortest(pm->weights[k]);
    }
    return s;
  }
  if (const auto* e = std::get_if<ExponentialLocations>(&spec_)) {
    return "exp:" + shortest(e->rate);
  }
  std::string s = "empirical:";
  const auto& values = std::get<EmpiricalLocations>(spec_).values;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) s += ",";
    s += shortest(values[k]);
  }
  return s;
}

std::int64_t ContinuumQueueState::total() const {
  std::int64_t n = 0;
  for (const auto& [loc, count] : occupied) n += count;
  return n;
}

std::int64_t ContinuumQueueState::count_up_to(double x) const {
  std::int64_t n = 0;
  for (auto it = occupied.begin(); it != occupied.end() && it->first <= x; ++it) {
    n += it->second;
  }
  return n;
}

ContinuumQueueResult simulate_continuum_queue(const EventTimeline& arrivals,
                                              const LocationSampler& locations,
                                              const EventTimeline& departures,
                                              RngStream& rng) {
  if (arrivals.labeled()) throw InvalidParameter("continuum queue expects unlabeled arrivals");
  check_same_horizon(arrivals, departures);
  ContinuumQueueResult out;
  out.best_ask.initial_value = kEmptyBestAsk;
  auto& state = out.final_state.occupied;
  std::int64_t total = 0;
  std::size_t ia = 0;
  std::size_t id = 0;
  while (ia < arrivals.size() || id < departures.size()) {
    const bool take_arrival =
        id == departures.size() ||
        (ia < arrivals.size() && arrivals.times[ia] <= departures.times[id]);
    double t = 0.0;
    if (take_arrival) {
      t = arrivals.times[ia++];
      ++state[locations.draw(rng)];
      ++total;
    } else {
      t = departures.times[id++];
      if (state.empty()) {
        ++out.wasted_services;
      } else {
        auto front = state.begin();
        if (--front->second == 0) state.erase(front);
        --total;
      }
    }
    out.event_times.push_back(t);
    out.total_length.push_back(total);
    push_jump(out.best_ask, t, out.final_state.best_ask());
  }
  return out;
}

}  // namespace fracq
