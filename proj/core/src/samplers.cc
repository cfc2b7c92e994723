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

#include "fracq/samplers.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fracq/error.hpp"

namespace fracq {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double sample_positive_stable(double theta, RngStream& rng) {
  validate_theta(theta);
  if (theta == 1.0) return 1.0;
  const double u = rng.uniform();
  const double e = rng.exponential();
  const double one_minus = 1.0 - theta;
  // log A(U), kept in log space so small theta does not overflow.
  const double log_a = theta / one_minus * std::log(std::sin(theta * kPi * u)) +
                       std::log(std::sin(one_minus * kPi * u)) -
                       std::log(std::sin(kPi * u)) / one_minus;
  const double s = std::exp(one_minus / theta * (log_a - std::log(e)));
  // Underflow to zero is possible only for extreme theta; S is a.s. positive.
  return s > 0.0 ? s : std::numeric_limits<double>::min();
}

double sample_mittag_leffler(FppParams p, RngStream& rng) {
  validate(p);
  if (p.theta == 1.0) return rng.exponential() / p.lambda;
  const double e = rng.exponential();
  const double s = sample_positive_stable(p.theta, rng);
  return std::pow(e, 1.0 / p.theta) * s / p.lambda;
}

double sample_mittag_leffler_trig(FppParams p, RngStream& rng) {
  validate(p);
  if (p.theta == 1.0) return rng.exponential() / p.lambda;
  const double u = rng.uniform();
  const double v = rng.uniform();
  const double a = p.theta * kPi;
  // sin(a)/tan(a v) - cos(a) == sin(a (1 - v)) / sin(a v), always positive.
  const double base = std::sin(a * (1.0 - v)) / std::sin(a * v);
  return -std::log(u) * std::pow(base, 1.0 / p.theta) / p.lambda;
}

double sample_inverse_subordinator_at(double theta, double t, RngStream& rng) {
  validate_theta(theta);
  if (!(t > 0.0)) throw InvalidParameter("sample_inverse_subordinator_at: t must be > 0");
  if (theta == 1.0) return t;
  return std::pow(t / sample_positive_stable(theta, rng), theta);
}

}  // namespace fracq
