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
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fracq/error.hpp"
#include "fracq/stats.hpp"

namespace fracq {
namespace {

struct Drivers {
  EventTimeline arrivals;
  EventTimeline departures;
};

Drivers make_run(double alpha, double beta, std::vector<double> p, double horizon, std::uint64_t seed,
             std::uint64_t replica = 0) {
  RngStream rng(seed, replica);
  Drivers r;
  r.arrivals = thin_events(simulate_fpp_renewal({alpha, 1.0}, horizon, rng),
                           ClassProbabilities(std::move(p)), rng);
  r.departures = simulate_fpp_renewal({beta, 1.0}, horizon, rng);
  return r;
}

EventTimeline timeline(std::vector<double> times, double horizon, std::vector<int> labels = {},
                       int classes = 0) {
  EventTimeline e;
  e.times = std::move(times);
  e.labels = std::move(labels);
  e.classes = classes;
  e.horizon = horizon;
  return e;
}

// Q_{<=i} at each merged event, from N_{<=i} - D and its running minimum.
std::vector<std::int64_t> reference_reflection(const Drivers& r, int up_to) {
  struct Ev {
    double t;
    int order;
    int delta;
  };
  std::vector<Ev> ev;
  for (std::size_t k = 0; k < r.arrivals.size(); ++k) {
    ev.push_back({r.arrivals.times[k], 0, r.arrivals.labels[k] <= up_to ? 1 : 0});
  }
  for (double t : r.departures.times) ev.push_back({t, 1, -1});
  std::stable_sort(ev.begin(), ev.end(), [](const Ev& a, const Ev& b) {
    return a.t != b.t ? a.t < b.t : a.order < b.order;
  });
  std::vector<std::int64_t> out;
  std::int64_t x = 0;
  std::int64_t lo = 0;
  for (const auto& e : ev) {
    x += e.delta;
    lo = std::min(lo, x);
    out.push_back(x - lo);
  }
  return out;
}

TEST(Reflection, Examples) {
  StepFunction f;
  f.jump_times = {1, 2, 3, 4};
  f.values = {1, 0, -1, 0};
  const auto g = skorokhod_reflect(f);
  EXPECT_EQ(g.values, (std::vector<double>{1, 0, 0, 1}));
  EXPECT_EQ(g.initial_value, 0.0);

  StepFunction pos;
  pos.jump_times = {0.5, 1.5};
  pos.values = {2, 1};
  EXPECT_EQ(skorokhod_reflect(pos).values, pos.values);

  StepFunction zero;
  EXPECT_EQ(skorokhod_reflect(zero).at(3.0), 0.0);

  StepFunction shifted = pos;
  shifted.initial_value = 1.0;
  EXPECT_THROW(skorokhod_reflect(shifted), PreconditionError);
  StepFunction unordered;
  unordered.jump_times = {2, 1};
  unordered.values = {1, 0};
  EXPECT_THROW(skorokhod_reflect(unordered), PreconditionError);
}

TEST(StepFunction, RightContinuousEvaluation) {
  StepFunction f;
  f.initial_value = -1.0;
  f.jump_times = {1.0, 2.0};
  f.values = {3.0, 4.0};
  EXPECT_EQ(f.at(0.0), -1.0);
  EXPECT_EQ(f.at(1.0), 3.0);
  EXPECT_EQ(f.at(1.999), 3.0);
  EXPECT_EQ(f.at(2.0), 4.0);
}

TEST(MulticlassQueue, NoDepartures) {
  auto r = make_run(0.7, 0.7, {0.2, 0.3, 0.5}, 50.0, 1);
  r.departures = timeline({}, 50.0);
  const auto traj = simulate_multiclass_queue(r.arrivals, r.departures);
  ASSERT_EQ(traj.size(), r.arrivals.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    for (int i = 1; i <= 3; ++i) {
      EXPECT_EQ(traj.lengths_at(k)[static_cast<std::size_t>(i - 1)],
                class_count_at(r.arrivals, i, traj.event_times[k]));
    }
  }
  const auto q1 = aggregate_lengths(traj, 1);
  for (double t = 0.0; t <= 50.0; t += 0.5) {
    EXPECT_EQ(q1.at(t), static_cast<double>(class_count_at(r.arrivals, 1, t)));
  }
  EXPECT_EQ(traj.wasted_services, 0);
  EXPECT_TRUE(traj.emptying_times.empty());
}

TEST(MulticlassQueue, NoArrivals) {
  const auto arrivals = timeline({}, 10.0, {}, 2);
  const auto departures = timeline({1.0, 2.0, 3.5}, 10.0);
  const auto traj = simulate_multiclass_queue(arrivals, departures);
  EXPECT_EQ(traj.wasted_services, 3);
  for (auto q : traj.total_length) EXPECT_EQ(q, 0);
  EXPECT_EQ(traj.running_infimum.back(), -3);
  for (auto e : traj.event_types) EXPECT_EQ(e, QueueEvent::kWasted);
}

TEST(MulticlassQueue, SimultaneousArrivalIsServedFirst) {
  const auto arrivals = timeline({1.0}, 5.0, {2}, 2);
  const auto departures = timeline({1.0}, 5.0);
  const auto traj = simulate_multiclass_queue(arrivals, departures);
  ASSERT_EQ(traj.size(), 2u);
  EXPECT_EQ(traj.event_types[0], QueueEvent::kArrival);
  EXPECT_EQ(traj.event_types[1], QueueEvent::kDeparture);
  EXPECT_EQ(traj.event_classes[1], 2);
  EXPECT_EQ(traj.wasted_services, 0);
  EXPECT_EQ(traj.emptying_times, (std::vector<double>{1.0}));
}

TEST(MulticlassQueue, Errors) {
  const auto unlabeled = timeline({1.0}, 5.0);
  EXPECT_THROW(simulate_multiclass_queue(unlabeled, unlabeled), InvalidParameter);
  const auto labeled = timeline({1.0}, 5.0, {1}, 1);
  EXPECT_THROW(simulate_multiclass_queue(labeled, timeline({}, 6.0)), InvalidParameter);
  const auto traj = simulate_multiclass_queue(labeled, timeline({}, 5.0));
  EXPECT_THROW(aggregate_lengths(traj, 0), InvalidParameter);
  EXPECT_THROW(aggregate_lengths(traj, 2), InvalidParameter);
}

TEST(MulticlassQueue, MatchesIndependentReflection) {
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto r = make_run(0.7, 0.7, {0.2, 0.3, 0.5}, 100.0, 2, rep);
    const auto traj = simulate_multiclass_queue(r.arrivals, r.departures);
    ASSERT_EQ(traj.size(), r.arrivals.size() + r.departures.size());
    EXPECT_EQ(traj.total_length, reference_reflection(r, 3)) << rep;
    for (int i = 1; i <= 3; ++i) {
      const auto ref = reference_reflection(r, i);
      const auto agg = aggregate_lengths(traj, i);
      for (std::size_t k = 0; k < traj.size(); ++k) {
        ASSERT_EQ(agg.at(traj.event_times[k]), static_cast<double>(ref[k])) << rep << " " << i;
      }
      const auto phi = skorokhod_reflect(net_input(r.arrivals, r.departures, i));
      for (double t : traj.event_times) ASSERT_EQ(phi.at(t), agg.at(t));
    }
  }
}

TEST(MulticlassQueue, InvariantsOnRandomRuns) {
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto r = make_run(0.6, 0.8, {0.5, 0.5}, 200.0, 3, rep);
    const auto traj = simulate_multiclass_queue(r.arrivals, r.departures);
    std::vector<std::int64_t> prev(2, 0);
    std::int64_t arrived = 0, served = 0, net = 0, prev_inf = 0;
    std::size_t emptyings = 0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const auto row = traj.lengths_at(k);
      EXPECT_GE(row[0], 0);
      EXPECT_GE(row[1], 0);
      EXPECT_EQ(traj.total_length[k], row[0] + row[1]);
      switch (traj.event_types[k]) {
        case QueueEvent::kArrival:
          ++arrived;
          ++net;
          break;
        case QueueEvent::kDeparture:
          ++served;
          --net;
          // Class 2 is served only when class 1 was empty.
          if (traj.event_classes[k] == 2) {
            EXPECT_EQ(prev[0], 0);
          }
          if (traj.total_length[k] == 0) ++emptyings;
          break;
        case QueueEvent::kWasted:
          --net;
          EXPECT_EQ(prev[0] + prev[1], 0);
          EXPECT_EQ(traj.running_infimum[k], prev_inf - 1);
          break;
      }
      if (traj.event_types[k] != QueueEvent::kWasted) {
        EXPECT_EQ(traj.running_infimum[k], prev_inf);
      }
      EXPECT_EQ(traj.total_length[k], net - traj.running_infimum[k]);
      EXPECT_EQ(traj.total_length[k], arrived - served);
      prev.assign(row.begin(), row.end());
      prev_inf = traj.running_infimum[k];
    }
    EXPECT_EQ(served + traj.wasted_services, static_cast<std::int64_t>(r.departures.size()));
    EXPECT_EQ(traj.wasted_services, -traj.running_infimum.back());
    EXPECT_EQ(traj.emptying_times.size(), emptyings);
  }
}

TEST(Locations, ParseDescribeAndErrors) {
  EXPECT_EQ(LocationSampler::parse("uniform:1,2").describe(), "uniform:1,2");
  EXPECT_EQ(LocationSampler::parse("point:1@0.25,3@0.75").describe(), "point:1@0.25,3@0.75");
  EXPECT_EQ(LocationSampler::parse("point:2").describe(), "point:2@1");
  EXPECT_EQ(LocationSampler::parse("exp:2").describe(), "exp:2");
  EXPECT_EQ(LocationSampler::parse("empirical:3,1.5").lower_support(), 1.5);
  EXPECT_EQ(LocationSampler::parse("uniform:1,2").lower_support(), 1.0);
  EXPECT_EQ(LocationSampler::parse("exp:2").lower_support(), 0.0);
  for (const char* bad : {"uniform:2,1", "uniform:1", "point:1@0.5", "point:1@-1", "exp:0",
                          "empirical:", "gauss:0,1", "uniform", "uniform:a,b", "empirical:1,-2"}) {
    EXPECT_THROW(LocationSampler::parse(bad), InvalidParameter) << bad;
  }
}

TEST(Locations, DrawsFollowTheDistribution) {
  RngStream rng(4, 0);
  const auto u = LocationSampler::parse("uniform:1,2");
  const auto pm = LocationSampler::parse("point:1@0.25,3@0.75");
  const auto e = LocationSampler::parse("exp:2");
  std::vector<double> uv, ev;
  int ones = 0;
  for (int k = 0; k < 20000; ++k) {
    uv.push_back(u.draw(rng));
    ev.push_back(e.draw(rng));
    const double x = pm.draw(rng);
    EXPECT_TRUE(x == 1.0 || x == 3.0);
    ones += x == 1.0;
  }
  EXPECT_GT(stats::ks_one_sample(uv, [](double x) { return std::clamp(x - 1.0, 0.0, 1.0); }).p_value,
            1e-3);
  EXPECT_GT(stats::ks_one_sample(ev, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-2 * x); })
                .p_value,
            1e-3);
  EXPECT_NEAR(ones / 20000.0, 0.25, 4 * std::sqrt(0.25 * 0.75 / 20000));
}

TEST(ContinuumQueue, PointMassReducesToSingleClass) {
  RngStream rng(5, 0);
  const auto arrivals = simulate_fpp_renewal({0.7, 1.0}, 200.0, rng);
  const auto departures = simulate_fpp_renewal({0.7, 1.0}, 200.0, rng);
  const auto res = simulate_continuum_queue(arrivals, LocationSampler::parse("point:1.5"), departures, rng);
  const auto traj = simulate_multiclass_queue(thin_events(arrivals, ClassProbabilities({1.0}), rng),
                                              departures);
  EXPECT_EQ(res.total_length, traj.total_length);
  EXPECT_EQ(res.event_times, traj.event_times);
  EXPECT_EQ(res.wasted_services, traj.wasted_services);
  for (std::size_t k = 0; k < res.event_times.size(); ++k) {
    const double b = res.best_ask.at(res.event_times[k]);
    EXPECT_EQ(b, res.total_length[k] > 0 ? 1.5 : kEmptyBestAsk);
  }
  EXPECT_EQ(res.final_state.count_up_to(1.5), res.total_length.back());
}

TEST(ContinuumQueue, NoArrivals) {
  RngStream rng(6, 0);
  const auto departures = timeline({0.5, 0.7}, 2.0);
  const auto res = simulate_continuum_queue(timeline({}, 2.0), LocationSampler::parse("uniform:1,2"),
                                            departures, rng);
  EXPECT_EQ(res.wasted_services, 2);
  for (double t : {0.0, 0.6, 1.0, 2.0}) EXPECT_EQ(res.best_ask.at(t), kEmptyBestAsk);
  EXPECT_EQ(res.final_state.best_ask(), kEmptyBestAsk);
  EXPECT_THROW(simulate_continuum_queue(timeline({1.0}, 2.0, {1}, 1),
                                        LocationSampler::parse("uniform:1,2"), departures, rng),
               InvalidParameter);
}

TEST(ContinuumQueue, TotalLengthIsReflectedDifference) {
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    RngStream rng(7, rep);
    Drivers r;
    r.arrivals = simulate_fpp_renewal({0.8, 1.0}, 300.0, rng);
    r.departures = simulate_fpp_renewal({0.6, 1.0}, 300.0, rng);
    const auto res = simulate_continuum_queue(r.arrivals, LocationSampler::parse("exp:1"),
                                              r.departures, rng);
    r.arrivals.labels.assign(r.arrivals.size(), 1);
    r.arrivals.classes = 1;
    EXPECT_EQ(res.total_length, reference_reflection(r, 1));
    EXPECT_EQ(res.final_state.total(), res.total_length.empty() ? 0 : res.total_length.back());
  }
}

TEST(ContinuumQueue, BestAskApproachesLowerSupport) {
  const auto g = LocationSampler::parse("uniform:1,2");
  std::vector<double> best;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    RngStream rng(8, rep);
    const auto arrivals = simulate_fpp_renewal({0.9, 1.0}, 1000.0, rng);
    const auto departures = simulate_fpp_renewal({0.5, 1.0}, 1000.0, rng);
    best.push_back(simulate_continuum_queue(arrivals, g, departures, rng).final_state.best_ask());
  }
  EXPECT_LE(std::abs(stats::median(best) - 1.0), 0.05);
}

}  // namespace
}  // namespace fracq
