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

#ifndef FRACQ_SPECIAL_FUNCTIONS_HPP_
#define FRACQ_SPECIAL_FUNCTIONS_HPP_

#include <cstdint>
#include <vector>

namespace fracq {

/// Index pair (theta, zeta) of the two-parameter Mittag-Leffler function
/// E_{theta,zeta}(z) = sum_l z^l / Gamma(zeta + theta l).
struct MlIndex {
  double theta = 1.0;
  double zeta = 1.0;
};

/// Index theta and time-dilation scale lambda of a fractional Poisson
/// process FPP(theta, lambda); also parametrizes the scaled Mittag-Leffler
/// law of its inter-event times.
struct FppParams {
  double theta = 1.0;
  double lambda = 1.0;
};

void validate(const MlIndex& idx);
void validate(const FppParams& p);
void validate_theta(double theta);

/// Evaluates E_{theta,zeta}(z) for real z.
///
/// Validated domain (relative error <= 1e-10):
///   * z >= 0: z <= 10 and z^(1/theta) <= 700 (beyond that the value
///     overflows or the series is not validated; throws DomainError).
///   * z < 0, theta < 1, zeta in {1, theta}: every z. Large |z| goes through
///     the Laplace-type integral representation of the completely monotone
///     function x -> E_{theta,zeta}(-x).
///   * z < 0, theta = zeta = 1: every z (reciprocal of the positive series).
///   * z < 0, other zeta: |z| <= 10 while the alternating series keeps at
///     least 10 significant digits; DomainError otherwise.
double mittag_leffler(MlIndex idx, double z);

/// Leading terms of the large-x expansion
///   E_theta(-x) ~ sum_{k=1}^{K} (-1)^{k+1} x^{-k} / Gamma(1 - theta k),
/// truncated at K = max_terms or at the smallest term.
double mittag_leffler_asymptotic(double theta, double x, int max_terms = 5);

/// P(N^{theta,lambda}(t) = n).
double fpp_pmf(FppParams p, double t, std::int64_t n);

/// pmf values for n = 0..N* where N* is the first n past the mean with
/// pmf(n) < tail_cutoff. Throws ResourceError when N* would exceed max_n.
std::vector<double> fpp_pmf_table(FppParams p, double t,
                                  double tail_cutoff = 1e-14,
                                  std::int64_t max_n = 100000);

/// F_{theta,lambda}(x) = 1 - E_theta(-lambda^theta x^theta).
double ml_cdf(FppParams p, double x);

/// f_{theta,lambda}(x) = lambda^theta x^(theta-1) E_{theta,theta}(-lambda^theta x^theta).
/// x = 0 with theta < 1 is a pole and throws DomainError.
double ml_pdf(FppParams p, double x);

/// E s^{N^{theta,lambda}(t)} = E_theta(lambda^theta t^theta (s - 1)).
double fpp_pgf(FppParams p, double s, double t);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance of the inverse stable subordinator Y_theta(t):
///   E Y = t^theta / Gamma(1+theta),
///   Var Y = t^(2 theta) (2 / Gamma(1 + 2 theta) - 1 / Gamma(1+theta)^2).
Moments inverse_subordinator_moments(double theta, double t);

/// E N^{theta,lambda}(t) = (lambda t)^theta / Gamma(1 + theta).
double fpp_mean(FppParams p, double t);

}  // namespace fracq

#endif  // FRACQ_SPECIAL_FUNCTIONS_HPP_
