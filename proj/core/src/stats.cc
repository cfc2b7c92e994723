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

#include "fracq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "fracq/error.hpp"

namespace fracq::stats {
namespace {

double ks_p_value(double d, double effective_n) {
  const double sn = std::sqrt(effective_n);
  return kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d);
}

void require_nonempty(std::span<const double> x, const char* what) {
  if (x.empty()) throw InvalidParameter(std::string(what) + ": empty sample");
}

}  // namespace

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_one_sample(std::span<const double> sample,
                       const std::function<double(double)>& cdf) {
  require_nonempty(sample, "ks_one_sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    const double hi = static_cast<double>(i + 1) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  return {d, ks_p_value(d, n)};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require_nonempty(a, "ks_two_sample");
  require_nonempty(b, "ks_two_sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
      v = x[i];
    } else {
      v = y[j];
    }
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return {d, ks_p_value(d, nx * ny / (nx + ny))};
}

double chi_square_p_value(double statistic, int dof) {
  if (dof < 1) throw InvalidParameter("chi-square dof must be positive");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

ChiSquareResult chi_square(std::span<const double> observed,
                           std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.size() < 2) {
    throw InvalidParameter("chi_square needs matching observed/expected with >= 2 cells");
  }
  ChiSquareResult r;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (!(expected[k] > 0.0)) throw InvalidParameter("chi_square: expected count must be positive");
    const double diff = observed[k] - expected[k];
    r.statistic += diff * diff / expected[k];
  }
  r.bins = static_cast<int>(observed.size());
  r.dof = r.bins - 1;
  r.p_value = chi_square_p_value(r.statistic, r.dof);
  return r;
}

ChiSquareResult chi_square_gof(std::span<const std::int64_t> samples,
                               std::span<const double> pmf, double min_expected) {
  if (samples.empty()) throw InvalidParameter("chi_square_gof: empty sample");
  if (pmf.empty()) throw InvalidParameter("chi_square_gof: empty pmf");
  const double n = static_cast<double>(samples.size());
  std::vector<double> counts(pmf.size() + 1, 0.0);
  for (std::int64_t s : samples) {
    if (s < 0) throw InvalidParameter("chi_square_gof: negative count");
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(s), pmf.size());
    counts[k] += 1.0;
  }
  double mass = 0.0;
  for (double p : pmf) mass += p;
  std::vector<double> expected(pmf.begin(), pmf.end());
  expected.push_back(std::max(0.0, 1.0 - mass));
  for (double& e : expected) e *= n;

  std::vector<double> obs_cells;
  std::vector<double> exp_cells;
  double o_acc = 0.0;
  double e_acc = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    o_acc += counts[k];
    e_acc += expected[k];
    if (e_acc >= min_expected) {
      obs_cells.push_back(o_acc);
      exp_cells.push_back(e_acc);
      o_acc = 0.0;
      e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (exp_cells.empty()) {
      obs_cells.push_back(o_acc);
      exp_cells.push_back(e_acc);
    } else {
      obs_cells.back() += o_acc;
      exp_cells.back() += e_acc;
    }
  }
  if (obs_cells.size() < 2) {
    ChiSquareResult r;
    r.bins = static_cast<int>(obs_cells.size());
    return r;
  }
  return chi_square(obs_cells, exp_cells);
}

Estimate mean(std::span<const double> x) {
  require_nonempty(x, "mean");
  const double n = static_cast<double>(x.size());
  double m = 0.0;
  for (double v : x) m += v;
  m /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double var = x.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {m, std::sqrt(var / n)};
}

Estimate variance(std::span<const double> x) {
  if (x.size() < 2) throw InvalidParameter("variance: need at least two values");
  const double n = static_cast<double>(x.size());
  const double m = mean(x).value;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d = (v - m) * (v - m);
    m2 += d;
    m4 += d * d;
  }
  const double s2 = m2 / (n - 1.0);
  m2 /= n;
  m4 /= n;
  return {s2, std::sqrt(std::max(0.0, m4 - m2 * m2) / n)};
}

Estimate covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidParameter("covariance: need two aligned samples of size >= 2");
  }
  const double n = static_cast<double>(x.size());
  const double mx = mean(x).value;
  const double my = mean(y).value;
  double c = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) c += (x[k] - mx) * (y[k] - my);
  const double cov = c / (n - 1.0);
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = (x[k] - mx) * (y[k] - my) - cov;
    ss += d * d;
  }
  return {cov, std::sqrt(ss / (n - 1.0) / n)};
}

Estimate correlation(std::span<const double> x, std::span<const double> y) {
  const double c = covariance(x, y).value;
  const double vx = variance(x).value;
  const double vy = variance(y).value;
  const double r = (vx > 0.0 && vy > 0.0) ? c / std::sqrt(vx * vy) : 0.0;
  return {r, (1.0 - r * r) / std::sqrt(static_cast<double>(x.size()) - 1.0)};
}

double quantile(std::vector<double> x, double q) {
  if (x.empty()) throw InvalidParameter("quantile: empty sample");
  std::sort(x.begin(), x.end());
  const double pos = q * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, x.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return x[lo] + frac * (x[hi] - x[lo]);
}

double median(std::vector<double> x) { return quantile(std::move(x), 0.5); }

std::vector<std::pair<double, double>> ecdf(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  std::vector<std::pair<double, double>> rows;
  const double n = static_cast<double>(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k + 1 < v.size() && v[k + 1] == v[k]) continue;
    rows.emplace_back(v[k], static_cast<double>(k + 1) / n);
  }
  return rows;
}

std::vector<std::pair<double, double>> qq_pairs(std::span<const double> reference,
                                                std::span<const double> sample) {
  std::vector<double> r(reference.begin(), reference.end());
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(r.begin(), r.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = std::min(r.size(), s.size());
  std::vector<std::pair<double, double>> rows;
  rows.reserve(n);
  auto pick = [](const std::vector<double>& v, double p) {
    const auto k = static_cast<std::size_t>(p * static_cast<double>(v.size()));
    return v[std::min(k, v.size() - 1)];
  };
  for (std::size_t k = 0; k < n; ++k) {
    const double p = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    rows.emplace_back(pick(r, p), pick(s, p));
  }
  return rows;
}

}  // namespace fracq::stats
