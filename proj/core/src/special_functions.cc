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

#include "fracq/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracq/error.hpp"

namespace fracq {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxSeriesTerms = 20000;
// Largest ratio max|term| / |sum| for which a long double series still
// carries about 10 correct digits.
constexpr long double kMaxCancellation = 1e8L;

// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(long double v) {
    const long double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  long double value() const { return sum_ + comp_; }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

struct SeriesResult {
  long double sum = 0.0L;
  long double max_term = 0.0L;
  bool converged = false;
};

// sum_{l >= first} z^l / Gamma(zeta + theta l), terms formed in log space.
SeriesResult ml_series(long double theta, long double zeta, long double z,
                       int first = 0) {
  SeriesResult out;
  if (z == 0.0L) {
    out.sum = first == 0 ? 1.0L / std::tgamma(zeta) : 0.0L;
    out.max_term = std::fabs(out.sum);
    out.converged = true;
    return out;
  }
  const long double log_abs_z = std::log(std::fabs(z));
  const bool alternating = z < 0.0L;
  CompensatedSum acc;
  long double prev_log = -INFINITY;
  for (int l = first; l < kMaxSeriesTerms; ++l) {
    const long double log_term =
        static_cast<long double>(l) * log_abs_z - std::lgamma(zeta + theta * l);
    long double term = std::exp(log_term);
    if (alternating && (l % 2 == 1)) term = -term;
    acc.add(term);
    out.max_term = std::max(out.max_term, std::fabs(term));
    const long double s = std::fabs(acc.value());
    if (log_term < prev_log && std::fabs(term) <= 1e-21L * std::max(s, 1e-300L)) {
      out.converged = true;
      break;
    }
    prev_log = log_term;
  }
  out.sum = acc.value();
  return out;
}

double checked_series(double theta, double zeta, double z, int first = 0) {
  const SeriesResult r = ml_series(theta, zeta, z, first);
  if (!r.converged) {
    throw DomainError("mittag_leffler: series did not converge at z=" +
                      std::to_string(z));
  }
  if (r.sum == 0.0L || r.max_term / std::fabs(r.sum) > kMaxCancellation) {
    throw DomainError("mittag_leffler: cancellation exceeds validated domain at z=" +
                      std::to_string(z));
  }
  return static_cast<double>(r.sum);
}

// Split points for integrands with the Lorentzian-like factor
// 1 / ((v + c)^2 + s^2) on [0, upper].
std::vector<double> split_points(double upper, double center, double width) {
  std::vector<double> pts = {0.0, upper};
  for (double p : {center - width, center, center + width, 1.0}) {
    if (p > 0.0 && p < upper) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

template <class F>
double integrate_pieces(F&& f, const std::vector<double>& pts) {
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    // Each piece is mapped onto [-1, 1] here: Boost 1.74 compares an
    // unscaled error estimate with a scaled tolerance, which never
    // converges on very short intervals.
    const double mid = 0.5 * (pts[k] + pts[k + 1]);
    const double half = 0.5 * (pts[k + 1] - pts[k]);
    auto g = [&](double u) { return half * f(mid + half * u); };
    total += gauss_kronrod<double, 61>::integrate(g, -1.0, 1.0, 12, 1e-11);
  }
  return total;
}

// E_{theta,zeta}(-x), zeta in {1, theta}, 0 < theta < 1, from
//   E_theta(-x)       = sin(pi theta)/(pi theta) int_0^inf e^{-w^{1/theta}} x / D(w) dw
//   E_theta,theta(-x) = sin(pi theta)/(pi theta) int_0^inf w^{1/theta} e^{-w^{1/theta}} / D(w) dw
// with D(w) = w^2 + 2 w x cos(pi theta) + x^2.
double ml_negative_integral(double theta, bool zeta_is_theta, double x) {
  const double c = std::cos(kPi * theta);
  const double s = std::sin(kPi * theta);
  const double inv_theta = 1.0 / theta;
  const double upper = std::pow(750.0, theta);
  const double xs2 = x * x * s * s;
  auto denom = [&](double w) {
    const double d = w + x * c;
    return d * d + xs2;
  };
  std::vector<double> pts = split_points(upper, -x * c, x * s);
  double integral = 0.0;
  if (zeta_is_theta) {
    integral = integrate_pieces(
        [&](double w) {
          const double e = std::pow(w, inv_theta);
          return e * std::exp(-e) / denom(w);
        },
        pts);
  } else {
    integral = integrate_pieces(
        [&](double w) { return std::exp(-std::pow(w, inv_theta)) * x / denom(w); },
        pts);
  }
  return s / (kPi * theta) * integral;
}

// P(N^theta(1) = n) at x = t^theta through
//   -(1/(pi theta)) int_0^inf e^{-(x v)^{1/theta}} Im[e^{i n theta pi} / (v + e^{i theta pi})^{n+1}] dv.
double pmf_integral(double theta, double x, std::int64_t n) {
  const double c = std::cos(kPi * theta);
  const double s = std::sin(kPi * theta);
  const double inv_theta = 1.0 / theta;
  const double upper = std::pow(750.0, theta) / x;
  const double nn = static_cast<double>(n);
  auto f = [&](double v) {
    const double re = v + c;
    const double r2 = re * re + s * s;
    const double phi = std::atan2(s, re);
    const double log_mag = -0.5 * (nn + 1.0) * std::log(r2);
    return std::exp(log_mag - std::pow(x * v, inv_theta)) *
           std::sin(nn * theta * kPi - (nn + 1.0) * phi);
  };
  std::vector<double> pts = split_points(upper, -c, s);
  return -integrate_pieces(f, pts) / (kPi * theta);
}

double reciprocal_gamma(double a) {
  if (a <= 0.0 && a == std::floor(a)) return 0.0;
  return 1.0 / std::tgamma(a);
}

}  // namespace

void validate_theta(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw InvalidParameter("theta must lie in (0, 1], got " + std::to_string(theta));
  }
}

void validate(const MlIndex& idx) {
  validate_theta(idx.theta);
  if (!(idx.zeta > 0.0) || !std::isfinite(idx.zeta)) {
    throw InvalidParameter("zeta must be positive, got " + std::to_string(idx.zeta));
  }
}

void validate(const FppParams& p) {
  validate_theta(p.theta);
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) {
    throw InvalidParameter("lambda must be positive, got " + std::to_string(p.lambda));
  }
}

double mittag_leffler(MlIndex idx, double z) {
  validate(idx);
  if (!std::isfinite(z)) throw DomainError("mittag_leffler: non-finite argument");
  const double theta = idx.theta;
  const double zeta = idx.zeta;
  if (z == 0.0) return 1.0 / std::tgamma(zeta);
  if (z > 0.0) {
    if (z > 10.0 || std::pow(z, 1.0 / theta) > 700.0) {
      throw DomainError("mittag_leffler: positive argument outside validated domain: " +
                        std::to_string(z));
    }
    return checked_series(theta, zeta, z);
  }
  const double x = -z;
  if (theta == 1.0 && zeta == 1.0) {
    if (x > 700.0) return 0.0;
    return 1.0 / checked_series(1.0, 1.0, x);
  }
  if (theta < 1.0 && (zeta == 1.0 || zeta == theta)) {
    if (x <= 1.0) return checked_series(theta, zeta, z);
    return ml_negative_integral(theta, zeta == theta, x);
  }
  if (x > 10.0) {
    throw DomainError("mittag_leffler: negative argument outside validated domain: " +
                      std::to_string(z));
  }
  return checked_series(theta, zeta, z);
}

double mittag_leffler_asymptotic(double theta, double x, int max_terms) {
  validate_theta(theta);
  if (!(x > 0.0)) throw InvalidParameter("mittag_leffler_asymptotic: x must be positive");
  double sum = 0.0;
  double prev = INFINITY;
  for (int k = 1; k <= max_terms; ++k) {
    const double rg = reciprocal_gamma(1.0 - theta * k);
    if (rg == 0.0) continue;
    const double term = (k % 2 == 1 ? 1.0 : -1.0) * std::pow(x, -k) * rg;
    if (std::fabs(term) > prev) break;
    sum += term;
    prev = std::fabs(term);
  }
  return sum;
}

double fpp_pmf(FppParams p, double t, std::int64_t n) {
  validate(p);
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameter("fpp_pmf: t must be >= 0");
  if (n < 0) throw InvalidParameter("fpp_pmf: n must be >= 0");
  if (t == 0.0) return n == 0 ? 1.0 : 0.0;
  const long double theta = p.theta;
  const long double x = std::pow(static_cast<long double>(p.lambda) * t, theta);
  const long double log_x = std::log(x);
  const long double nn = static_cast<long double>(n);
  const long double lg_n1 = std::lgamma(nn + 1.0L);

  // sum_j C(n+j, n) (-1)^j x^{n+j} / Gamma(theta (n+j) + 1)
  CompensatedSum acc;
  long double max_term = 0.0L;
  long double prev_log = -INFINITY;
  bool converged = false;
  for (int j = 0; j < 500; ++j) {
    const long double m = nn + j;
    const long double log_term = std::lgamma(m + 1.0L) - lg_n1 -
                                 std::lgamma(j + 1.0L) + m * log_x -
                                 std::lgamma(theta * m + 1.0L);
    long double term = std::exp(log_term);
    if (j % 2 == 1) term = -term;
    acc.add(term);
    max_term = std::max(max_term, std::fabs(term));
    // Tail bound: next-term magnitude with a safety factor of 10.
    if (log_term < prev_log && 10.0L * std::fabs(term) < 1e-12L * std::max(std::fabs(acc.value()), 1e-300L)) {
      converged = true;
      break;
    }
    prev_log = log_term;
  }
  const long double sum = acc.value();
  const bool accurate = converged && sum > 0.0L && max_term / sum <= kMaxCancellation;
  if (accurate) return static_cast<double>(sum);
  if (p.theta == 1.0) {
    return std::exp(static_cast<double>(nn * log_x - x - lg_n1));
  }
  const double v = pmf_integral(p.theta, static_cast<double>(x), n);
  return std::max(0.0, v);
}

std::vector<double> fpp_pmf_table(FppParams p, double t, double tail_cutoff,
                                  std::int64_t max_n) {
  validate(p);
  const double mean = fpp_mean(p, t);
  std::vector<double> table;
  for (std::int64_t n = 0;; ++n) {
    if (n > max_n) throw ResourceError("fpp_pmf_table: truncation point exceeds cap");
    const double v = fpp_pmf(p, t, n);
    table.push_back(v);
    if (static_cast<double>(n) > mean && v < tail_cutoff) break;
  }
  return table;
}

double ml_cdf(FppParams p, double x) {
  validate(p);
  if (!(x >= 0.0)) throw InvalidParameter("ml_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double y = std::pow(p.lambda * x, p.theta);
  if (y <= 1.0) {
    // 1 - E_theta(-y) = -sum_{l >= 1} (-y)^l / Gamma(1 + theta l)
    return -static_cast<double>(ml_series(p.theta, 1.0, -y, 1).sum);
  }
  return std::clamp(1.0 - mittag_leffler({p.theta, 1.0}, -y), 0.0, 1.0);
}

double ml_pdf(FppParams p, double x) {
  validate(p);
  if (!(x >= 0.0)) throw InvalidParameter("ml_pdf: x must be >= 0");
  if (x == 0.0) {
    if (p.theta < 1.0) throw DomainError("ml_pdf: density has a pole at x = 0");
    return p.lambda;
  }
  const double lx = p.lambda * x;
  const double y = std::pow(lx, p.theta);
  return p.lambda * std::pow(lx, p.theta - 1.0) *
         mittag_leffler({p.theta, p.theta}, -y);
}

double fpp_pgf(FppParams p, double s, double t) {
  validate(p);
  if (!(t >= 0.0)) throw InvalidParameter("fpp_pgf: t must be >= 0");
  if (s == 1.0 || t == 0.0) return 1.0;
  return mittag_leffler({p.theta, 1.0}, std::pow(p.lambda * t, p.theta) * (s - 1.0));
}

Moments inverse_subordinator_moments(double theta, double t) {
  validate_theta(theta);
  if (!(t >= 0.0)) throw InvalidParameter("inverse_subordinator_moments: t must be >= 0");
  if (theta == 1.0) return {t, 0.0};
  const double g1 = std::tgamma(1.0 + theta);
  const double tt = std::pow(t, theta);
  return {tt / g1, tt * tt * (2.0 / std::tgamma(1.0 + 2.0 * theta) - 1.0 / (g1 * g1))};
}

double fpp_mean(FppParams p, double t) {
  validate(p);
  if (!(t >= 0.0)) throw InvalidParameter("fpp_mean: t must be >= 0");
  return std::pow(p.lambda * t, p.theta) / std::tgamma(1.0 + p.theta);
}

}  // namespace fracq
