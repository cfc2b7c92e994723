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

#ifndef FRACQ_LIMITS_HPP_
#define FRACQ_LIMITS_HPP_

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "fracq/processes.hpp"
#include "fracq/queue.hpp"
#include "fracq/report.hpp"
#include "fracq/rng.hpp"

namespace fracq {

/// scale * Y_theta(t).
struct InverseClockLaw {
  double theta = 0.5;
  double scale = 1.0;
};

/// Phi(a Y_{theta_a} - b Y'_{theta_b})(t) with independent clocks.
struct ReflectedDifferenceLaw {
  double theta_a = 0.5;
  double scale_a = 1.0;
  double theta_b = 0.5;
  double scale_b = 1.0;
};

/// Phi(a_hi Y - b Y')(t) - Phi(a_lo Y - b Y')(t): one class's share when the
/// clock Y drives the arrivals of classes up to i (a_hi) and below i (a_lo).
struct ReflectedShareLaw {
  double theta_a = 0.5;
  double scale_upper = 1.0;
  double scale_lower = 0.0;
  double theta_b = 0.5;
  double scale_b = 1.0;
};

/// B(c Y_theta(t)).
struct BrownianTimeChangedLaw {
  double variance = 1.0;
  double theta = 0.5;
};

/// Phi(sqrt(a) B(Y_{theta_a}) - sqrt(b) B'(Y'_{theta_b}))(t). a or b may be 0.
struct ReflectedBrownianDifferenceLaw {
  double variance_a = 1.0;
  double theta_a = 0.5;
  double variance_b = 1.0;
  double theta_b = 0.5;
};

using LimitLaw = std::variant<InverseClockLaw, ReflectedDifferenceLaw, ReflectedShareLaw,
                              BrownianTimeChangedLaw, ReflectedBrownianDifferenceLaw>;

/// Draws from a limit law at time t. Laws that involve a running infimum
/// are evaluated on a t-grid of spacing grid_fraction * t, with clocks from
/// inverted subordinator grids of spacing grid_fraction * t^theta.
class LimitLawSampler {
 public:
  LimitLawSampler(LimitLaw law, double t, double grid_fraction = 1e-3);

  double sample(RngStream& rng) const;
  /// sample i uses RngStream(seed, i, substream).
  std::vector<double> sample_many(std::size_t n, std::uint64_t seed,
                                  std::uint64_t substream, unsigned jobs = 1) const;

  const LimitLaw& law() const { return law_; }
  double time() const { return t_; }

 private:
  std::vector<double> clock_on_grid(double theta, RngStream& rng) const;

  LimitLaw law_;
  double t_;
  double grid_fraction_;
  std::vector<double> t_grid_;
};

struct ExperimentOptions {
  std::uint64_t replicas = 10'000;
  std::uint64_t seed = 42;
  unsigned jobs = 1;
  double significance = 1e-3;
  /// Keep observed and reference samples in the report for plot output.
  bool keep_samples = false;
};

/// Marginal law of the fractional Poisson process at t: renewal and
/// time-change counts are each tested against the series pmf, and against
/// each other.
ExperimentReport verify_pmf(FppParams p, double t, const ExperimentOptions& opts);

/// Thinned fractional Poisson process at t: per-class and aggregated
/// marginals, the cross-covariance of classes 1 and 2, and the conditional
/// covariance given the total count.
ExperimentReport verify_thinning(FppParams p, const ClassProbabilities& classes, double t,
                                 const ExperimentOptions& opts);

/// N^{(i)}(ut) / u^theta against p_i lambda^theta Y_theta(t).
ExperimentReport verify_lln(FppParams p, const ClassProbabilities& classes, double t,
                            double u, const ExperimentOptions& opts);

/// Centered, u^{theta/2}-scaled class counts against B_i(p_i lambda^theta Y(t)).
ExperimentReport verify_fclt(FppParams p, const ClassProbabilities& classes, double t,
                             double u, const ExperimentOptions& opts);

struct QueueModel {
  FppParams arrivals{0.5, 1.0};
  FppParams departures{0.5, 1.0};
  ClassProbabilities classes{std::vector<double>{1.0}};
};

/// Q_{<= i}(ut) / u^{max(alpha, beta)} in the three regimes.
ExperimentReport verify_queue_scaling(const QueueModel& model, int i, double t, double u,
                                      const ExperimentOptions& opts);

/// Reflected, compensated queue input scaled by u^{max(alpha, beta)/2}.
ExperimentReport verify_centered_queue_clt(const QueueModel& model, int i, double t,
                                           double u, const ExperimentOptions& opts);

/// Emptying counts and running maxima of Q_{<= i} over nested horizons.
/// Requires alpha == beta.
ExperimentReport verify_recurrence(const QueueModel& model, int i,
                                   std::span<const double> horizons,
                                   const ExperimentOptions& opts);

/// Running min and max of Y(t) - c Y'(t) over nested horizons.
ExperimentReport verify_oscillation(double theta, double c, std::span<const double> horizons,
                                    const ExperimentOptions& opts);

/// Best-ask concentration at the lower support edge of the location law
/// and queue density just above it. Requires alpha > beta.
ExperimentReport verify_best_ask(FppParams arrivals, FppParams departures,
                                 const LocationSampler& locations,
                                 std::span<const double> t_values,
                                 const ExperimentOptions& opts);

}  // namespace fracq

#endif  // FRACQ_LIMITS_HPP_
