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

#ifndef FRACQ_SAMPLERS_HPP_
#define FRACQ_SAMPLERS_HPP_

#include "fracq/rng.hpp"
#include "fracq/special_functions.hpp"

namespace fracq {

/// One-sided theta-stable variate S with E exp(-u S) = exp(-u^theta),
/// i.e. L_theta(1) for the standard stable subordinator. Uses Kanter's
/// representation S = (A(U) / E)^((1-theta)/theta) with
///   A(U) = sin(theta pi U)^(theta/(1-theta)) sin((1-theta) pi U)
///          / sin(pi U)^(1/(1-theta)).
/// Returns exactly 1 for theta = 1.
double sample_positive_stable(double theta, RngStream& rng);

/// Scaled Mittag-Leffler variate X^theta / lambda through the product
/// representation X^theta = E^(1/theta) S.
double sample_mittag_leffler(FppParams p, RngStream& rng);

/// Independent closed-form Mittag-Leffler generator
///   T = -log(U) (sin(theta pi) / tan(theta pi V) - cos(theta pi))^(1/theta),
/// scaled by 1/lambda. Kept as a cross-check for sample_mittag_leffler.
double sample_mittag_leffler_trig(FppParams p, RngStream& rng);

/// Y_theta(t) at a single time via Y_theta(t) = (t / L_theta(1))^theta in law.
double sample_inverse_subordinator_at(double theta, double t, RngStream& rng);

}  // namespace fracq

#endif  // FRACQ_SAMPLERS_HPP_
