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

#ifndef FRACQ_STATS_HPP_
#define FRACQ_STATS_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fracq::stats {

/// Survival function of the Kolmogorov distribution,
/// Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_survival(double x);

struct KsResult {
  double statistic = 0.0;  // sup-distance D
  double p_value = 1.0;
};

/// One-sample KS test against a continuous cdf. Sorts a copy of `sample`.
KsResult ks_one_sample(std::span<const double> sample,
                       const std::function<double(double)>& cdf);

/// Two-sample KS test; ties across and within samples are handled by
/// evaluating both empirical cdfs after each distinct value. The p-value
/// uses the asymptotic law with Stephens' small-sample correction.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins = 0;
};

/// Upper tail P(X > statistic) for X ~ chi-square(dof).
double chi_square_p_value(double statistic, int dof);

/// Pearson chi-square from observed and expected counts; dof = bins - 1.
ChiSquareResult chi_square(std::span<const double> observed,
                           std::span<const double> expected);

/// Goodness of fit of integer samples to a pmf on {0, 1, ...}. Cells are
/// greedily merged left to right until each holds expected >= min_expected;
/// the final cell absorbs the upper tail 1 - sum(pmf).
ChiSquareResult chi_square_gof(std::span<const std::int64_t> samples,
                               std::span<const double> pmf, double min_expected = 5.0);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

Estimate mean(std::span<const double> x);
/// Unbiased sample variance; s.e. from the fourth central moment.
Estimate variance(std::span<const double> x);
/// Sample covariance; s.e. from the spread of centred products.
Estimate covariance(std::span<const double> x, std::span<const double> y);
/// Pearson correlation; s.e. (1 - r^2) / sqrt(n - 1).
Estimate correlation(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> x);
double quantile(std::vector<double> x, double q);

/// Empirical cdf rows (value, cumulative probability) at distinct values.
std::vector<std::pair<double, double>> ecdf(std::span<const double> x);

/// Quantile-quantile rows pairing sorted `reference` and `sample` at
/// probabilities (k + 0.5) / n, n = min of the two sizes.
std::vector<std::pair<double, double>> qq_pairs(std::span<const double> reference,
                                                std::span<const double> sample);

}  // namespace fracq::stats

#endif  // FRACQ_STATS_HPP_
