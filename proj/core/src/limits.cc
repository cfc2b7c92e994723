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

#include "fracq/limits.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "fracq/error.hpp"
#include "fracq/parallel.hpp"
#include "fracq/samplers.hpp"
#include "fracq/special_functions.hpp"
#include "fracq/stats.hpp"

namespace fracq {

namespace {

// Substream layout per replica: 0 drives the simulated system, the others
// feed reference samples for the limit laws.
constexpr std::uint64_t kSystem = 0;
constexpr std::uint64_t kReference = 1;
constexpr std::uint64_t kSecondary = 2;

template <class T, class Fn>
std::vector<T> run_replicas(const ExperimentOptions& opts, std::uint64_t substream, Fn fn) {
  std::vector<T> out(opts.replicas);
  parallel_for(opts.replicas, opts.jobs, [&](std::size_t r) {
    RngStream rng(opts.seed, r, substream);
    out[r] = fn(rng);
  });
  return out;
}

void check_options(const ExperimentOptions& opts, std::uint64_t min_replicas) {
  if (opts.replicas < min_replicas) {
    throw InvalidParameter("replicas must be at least " + std::to_string(min_replicas));
  }
  if (!(opts.significance > 0.0 && opts.significance < 1.0)) {
    throw InvalidParameter("significance must lie in (0, 1)");
  }
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidParameter(std::string(name) + " must be positive and finite");
  }
}

ExperimentReport start_report(std::string name, const ExperimentOptions& opts) {
  ExperimentReport rep;
  rep.name = std::move(name);
  rep.replicas = opts.replicas;
  rep.seed = opts.seed;
  rep.parameters["significance"] = opts.significance;
  return rep;
}

std::string format_note(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

void add_ks_check(ExperimentReport& rep, const ExperimentOptions& opts, std::string name,
                  std::vector<double> observed, std::vector<double> reference) {
  const auto ks = stats::ks_two_sample(observed, reference);
  rep.add_check(name, ks.p_value, opts.significance, Direction::kGreater,
                format_note("KS p-value; D = %.6g", ks.statistic));
  if (opts.keep_samples) {
    rep.samples.push_back({std::move(name), std::move(observed), std::move(reference)});
  }
}

void add_z_check(ExperimentReport& rep, std::string name, stats::Estimate est, double target,
                 double bound = 4.0) {
  const double z = est.std_error > 0.0 ? std::abs(est.value - target) / est.std_error
                                       : (est.value == target ? 0.0 : INFINITY);
  rep.add_check(std::move(name), z, bound, Direction::kLessEqual,
                format_note("|estimate - target| / s.e.; estimate = %.8g, target = %.8g, s.e. = %.3g",
                            est.value, target, est.std_error));
}

std::vector<double> to_double(std::span<const std::int64_t> v) {
  return {v.begin(), v.end()};
}

double reflect_end(std::span<const double> f) {
  double inf = 0.0;
  for (double x : f) inf = std::min(inf, x);
  return f.back() - inf;
}

}  // namespace

LimitLawSampler::LimitLawSampler(LimitLaw law, double t, double grid_fraction)
    : law_(std::move(law)), t_(t), grid_fraction_(grid_fraction) {
  check_positive(t, "t");
  if (!(grid_fraction > 0.0 && grid_fraction <= 0.5)) {
    throw InvalidParameter("grid_fraction must lie in (0, 0.5]");
  }
  std::visit(
      [](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, InverseClockLaw>) {
          validate_theta(l.theta);
        } else if constexpr (std::is_same_v<L, BrownianTimeChangedLaw>) {
          validate_theta(l.theta);
          if (!(l.variance >= 0.0)) throw InvalidParameter("variance must be nonnegative");
        } else if constexpr (std::is_same_v<L, ReflectedBrownianDifferenceLaw>) {
          validate_theta(l.theta_a);
          validate_theta(l.theta_b);
          if (!(l.variance_a >= 0.0 && l.variance_b >= 0.0)) {
            throw InvalidParameter("variances must be nonnegative");
          }
        } else {
          validate_theta(l.theta_a);
          validate_theta(l.theta_b);
        }
      },
      law_);
  const auto steps = static_cast<std::size_t>(std::llround(1.0 / grid_fraction));
  t_grid_.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    t_grid_[k] = t * static_cast<double>(k) / static_cast<double>(steps);
  }
  t_grid_.back() = t;
}

std::vector<double> LimitLawSampler::clock_on_grid(double theta, RngStream& rng) const {
  if (theta == 1.0) return t_grid_;
  const double step = grid_fraction_ * std::pow(t_, theta);
  InverseClockPath path = simulate_inverse_clock(theta, t_, step, rng);
  return invert_subordinator(path.grid(), t_grid_).y_values;
}

double LimitLawSampler::sample(RngStream& rng) const {
  return std::visit(
      [&](const auto& l) -> double {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, InverseClockLaw>) {
          return l.scale * sample_inverse_subordinator_at(l.theta, t_, rng);
        } else if constexpr (std::is_same_v<L, BrownianTimeChangedLaw>) {
          const double y = sample_inverse_subordinator_at(l.theta, t_, rng);
          return std::sqrt(l.variance * y) * rng.normal();
        } else if constexpr (std::is_same_v<L, ReflectedDifferenceLaw>) {
          const auto ya = clock_on_grid(l.theta_a, rng);
          const auto yb = clock_on_grid(l.theta_b, rng);
          std::vector<double> f(ya.size());
          for (std::size_t k = 0; k < f.size(); ++k) f[k] = l.scale_a * ya[k] - l.scale_b * yb[k];
          return reflect_end(f);
        } else if constexpr (std::is_same_v<L, ReflectedShareLaw>) {
          const auto ya = clock_on_grid(l.theta_a, rng);
          const auto yb = clock_on_grid(l.theta_b, rng);
          std::vector<double> hi(ya.size());
          std::vector<double> lo(ya.size());
          for (std::size_t k = 0; k < ya.size(); ++k) {
            hi[k] = l.scale_upper * ya[k] - l.scale_b * yb[k];
            lo[k] = l.scale_lower * ya[k] - l.scale_b * yb[k];
          }
          return reflect_end(hi) - reflect_end(lo);
        } else {
          // Gaussian increments on the t-grid. Given the clocks, the input is
          // a Brownian motion run at clock a Y + b Y', so the minimum inside
          // each cell is drawn from the Brownian-bridge minimum law.
          const auto ya = l.variance_a > 0.0 ? clock_on_grid(l.theta_a, rng) : t_grid_;
          const auto yb = l.variance_b > 0.0 ? clock_on_grid(l.theta_b, rng) : t_grid_;
          double x = 0.0;
          double inf = 0.0;
          for (std::size_t k = 1; k < t_grid_.size(); ++k) {
            const double v = std::max(0.0, l.variance_a * (ya[k] - ya[k - 1])) +
                             std::max(0.0, l.variance_b * (yb[k] - yb[k - 1]));
            if (v == 0.0) continue;
            const double next = x + std::sqrt(v) * rng.normal();
            const double d = next - x;
            const double low = 0.5 * (x + next - std::sqrt(d * d - 2.0 * v * std::log(rng.uniform())));
            inf = std::min(inf, low);
            x = next;
          }
          return x - inf;
        }
      },
      law_);
}

std::vector<double> LimitLawSampler::sample_many(std::size_t n, std::uint64_t seed,
                                                 std::uint64_t substream, unsigned jobs) const {
  std::vector<double> out(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    RngStream rng(seed, i, substream);
    out[i] = sample(rng);
  });
  return out;
}

ExperimentReport verify_pmf(FppParams p, double t, const ExperimentOptions& opts) {
  validate(p);
  check_positive(t, "t");
  check_options(opts, 100);
  auto rep = start_report("pmf", opts);
  rep.parameters["theta"] = p.theta;
  rep.parameters["lambda"] = p.lambda;
  rep.parameters["t"] = t;

  const auto pmf = fpp_pmf_table(p, t);
  double mass = 0.0;
  for (double v : pmf) mass += v;
  rep.add_check("pmf_mass_error", std::abs(mass - 1.0), 1e-8, Direction::kLessEqual);

  auto renewal = run_replicas<std::int64_t>(opts, kSystem, [&](RngStream& rng) {
    return static_cast<std::int64_t>(simulate_fpp_renewal(p, t, rng).size());
  });
  auto timechange = run_replicas<std::int64_t>(opts, kReference, [&](RngStream& rng) {
    return static_cast<std::int64_t>(simulate_fpp_timechange(p, t, 0.0, rng).size());
  });
  const auto c1 = stats::chi_square_gof(renewal, pmf);
  rep.add_check("renewal_vs_pmf_chi2", c1.p_value, opts.significance, Direction::kGreater,
                format_note("chi-square p-value; X2 = %.6g, dof = %.0f", c1.statistic, c1.dof));
  const auto c2 = stats::chi_square_gof(timechange, pmf);
  rep.add_check("timechange_vs_pmf_chi2", c2.p_value, opts.significance, Direction::kGreater,
                format_note("chi-square p-value; X2 = %.6g, dof = %.0f", c2.statistic, c2.dof));
  add_ks_check(rep, opts, "renewal_vs_timechange_ks", to_double(renewal), to_double(timechange));
  rep.finalize();
  return rep;
}

ExperimentReport verify_thinning(FppParams p, const ClassProbabilities& classes, double t,
                                 const ExperimentOptions& opts) {
  validate(p);
  check_positive(t, "t");
  check_options(opts, 100);
  auto rep = start_report("thinning", opts);
  rep.parameters["alpha"] = p.theta;
  rep.parameters["lambda"] = p.lambda;
  rep.parameters["p"] = classes.probabilities();
  rep.parameters["t"] = t;
  const int k = classes.size();
  const auto kk = static_cast<std::size_t>(k);

  auto rows = run_replicas<std::vector<std::int64_t>>(opts, kSystem, [&](RngStream& rng) {
    const auto events = simulate_fpp_renewal(p, t, rng);
    const auto labeled = thin_events(events, classes, rng);
    std::vector<std::int64_t> counts(kk, 0);
    for (int label : labeled.labels) ++counts[static_cast<std::size_t>(label - 1)];
    return counts;
  });

  std::vector<std::vector<std::int64_t>> per_class(kk, std::vector<std::int64_t>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < kk; ++c) per_class[c][r] = rows[r][c];
  }
  for (int i = 1; i <= k; ++i) {
    const FppParams q{p.theta, p.lambda * std::pow(classes.p(i), 1.0 / p.theta)};
    const auto res = stats::chi_square_gof(per_class[static_cast<std::size_t>(i - 1)],
                                           fpp_pmf_table(q, t));
    rep.add_check("class_" + std::to_string(i) + "_marginal_chi2", res.p_value,
                  opts.significance, Direction::kGreater,
                  format_note("chi-square p-value; X2 = %.6g, dof = %.0f", res.statistic, res.dof));
  }
  std::vector<std::int64_t> aggregate(rows.size(), 0);
  for (int l = 1; l <= k; ++l) {
    for (std::size_t r = 0; r < rows.size(); ++r) aggregate[r] += rows[r][static_cast<std::size_t>(l - 1)];
    if (l == 1) continue;
    const FppParams q{p.theta, p.lambda * std::pow(classes.cumulative(l), 1.0 / p.theta)};
    const auto res = stats::chi_square_gof(aggregate, fpp_pmf_table(q, t));
    rep.add_check("aggregate_1_to_" + std::to_string(l) + "_chi2", res.p_value,
                  opts.significance, Direction::kGreater,
                  format_note("chi-square p-value; X2 = %.6g, dof = %.0f", res.statistic, res.dof));
  }

  if (k >= 2) {
    const auto x = to_double(per_class[0]);
    const auto y = to_double(per_class[1]);
    const auto m = inverse_subordinator_moments(p.theta, t);
    const double target =
        classes.p(1) * classes.p(2) * std::pow(p.lambda, 2.0 * p.theta) * m.variance;
    add_z_check(rep, "covariance_1_2", stats::covariance(x, y), target);

    // Given N(t) = n the class counts are multinomial: pool a binomial fit of
    // class 1 within class 1 + 2 and the covariance -p1 p2 n over all n with
    // enough replicas.
    std::map<std::int64_t, std::vector<std::size_t>> bins;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::int64_t n = 0;
      for (auto c : rows[r]) n += c;
      bins[n].push_back(r);
    }
    double chi2 = 0.0;
    int dof = 0;
    double z2 = 0.0;
    int z_bins = 0;
    const double p1 = classes.p(1);
    const double p2 = classes.p(2);
    for (const auto& [n, idx] : bins) {
      if (n < 2 || idx.size() < 200) continue;
      std::vector<double> a(idx.size());
      std::vector<double> b(idx.size());
      for (std::size_t j = 0; j < idx.size(); ++j) {
        a[j] = static_cast<double>(rows[idx[j]][0]);
        b[j] = static_cast<double>(rows[idx[j]][1]);
      }
      const auto cov = stats::covariance(a, b);
      if (cov.std_error > 0.0) {
        const double z = (cov.value + p1 * p2 * static_cast<double>(n)) / cov.std_error;
        z2 += z * z;
        ++z_bins;
      }
      if (k == 2) {
        std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
        for (std::int64_t j = 0; j <= n; ++j) {
          pmf[static_cast<std::size_t>(j)] =
              std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
                       j * std::log(p1) + (n - j) * std::log(p2));
        }
        std::vector<std::int64_t> s(idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) s[j] = rows[idx[j]][0];
        const auto g = stats::chi_square_gof(s, pmf);
        chi2 += g.statistic;
        dof += g.dof;
      }
    }
    if (z_bins > 0) {
      const double pz = stats::chi_square_p_value(z2, z_bins);
      rep.add_check("conditional_covariance_pooled", pz, opts.significance, Direction::kGreater,
                    format_note("p-value of sum z^2 = %.6g over %.0f bins", z2, z_bins));
    }
    if (dof > 0) {
      const double pb = stats::chi_square_p_value(chi2, dof);
      rep.add_check("conditional_binomial_pooled", pb, opts.significance, Direction::kGreater,
                    format_note("pooled chi-square p-value; X2 = %.6g, dof = %.0f", chi2, dof));
    }
  }
  rep.finalize();
  return rep;
}

ExperimentReport verify_lln(FppParams p, const ClassProbabilities& classes, double t,
                            double u, const ExperimentOptions& opts) {
  validate(p);
  check_positive(t, "t");
  if (!(u >= 100.0)) throw InvalidParameter("u must be at least 100");
  check_options(opts, 1000);
  auto rep = start_report("lln", opts);
  rep.parameters["theta"] = p.theta;
  rep.parameters["lambda"] = p.lambda;
  rep.parameters["p"] = classes.probabilities();
  rep.parameters["t"] = t;
  rep.parameters["u"] = u;
  const int k = classes.size();
  const double scale = std::pow(u, p.theta);

  auto rows = run_replicas<std::vector<double>>(opts, kSystem, [&](RngStream& rng) {
    const auto events = simulate_fpp_renewal(p, u * t, rng);
    const auto labeled = thin_events(events, classes, rng);
    std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
    for (int label : labeled.labels) counts[static_cast<std::size_t>(label - 1)] += 1.0;
    for (auto& c : counts) c /= scale;
    return counts;
  });
  const double rate = std::pow(p.lambda, p.theta);
  for (int i = 1; i <= k; ++i) {
    std::vector<double> observed(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) observed[r] = rows[r][static_cast<std::size_t>(i - 1)];
    const std::string tag = "class_" + std::to_string(i);
    if (p.theta == 1.0) {
      // Degenerate limit p_i lambda t: a distributional test against a point
      // mass is meaningless, so check concentration instead.
      const double sd = std::sqrt(stats::variance(observed).value);
      rep.add_check(tag + "_sd", sd, 0.05, Direction::kLess);
      add_z_check(rep, tag + "_mean", stats::mean(observed), classes.p(i) * p.lambda * t);
      continue;
    }
    const LimitLawSampler limit(InverseClockLaw{p.theta, rate * classes.p(i)}, t);
    auto reference = limit.sample_many(opts.replicas, opts.seed,
                                       kReference + static_cast<std::uint64_t>(i), opts.jobs);
    add_ks_check(rep, opts, tag + "_ks", std::move(observed), std::move(reference));
  }
  rep.finalize();
  return rep;
}

ExperimentReport verify_fclt(FppParams p, const ClassProbabilities& classes, double t,
                             double u, const ExperimentOptions& opts) {
  validate(p);
  check_positive(t, "t");
  if (!(u >= 1000.0)) throw InvalidParameter("u must be at least 1000");
  check_options(opts, 1000);
  auto rep = start_report("fclt", opts);
  rep.parameters["theta"] = p.theta;
  rep.parameters["lambda"] = p.lambda;
  rep.parameters["p"] = classes.probabilities();
  rep.parameters["t"] = t;
  rep.parameters["u"] = u;
  const int k = classes.size();
  const auto kk = static_cast<std::size_t>(k);
  const double rate = std::pow(p.lambda, p.theta);
  const double scale = std::pow(u, 0.5 * p.theta);

  auto rows = run_replicas<std::vector<double>>(opts, kSystem, [&](RngStream& rng) {
    const auto tc = simulate_fpp_timechange_with_clock(p, u * t, 0.0, rng);
    const auto labeled = thin_events(tc.events, classes, rng);
    const double y = tc.clock.at(u * t);
    std::vector<double> m(kk, 0.0);
    for (int label : labeled.labels) m[static_cast<std::size_t>(label - 1)] += 1.0;
    for (int i = 1; i <= k; ++i) {
      auto& v = m[static_cast<std::size_t>(i - 1)];
      v = (v - classes.p(i) * rate * y) / scale;
    }
    return m;
  });
  std::vector<std::vector<double>> columns(kk, std::vector<double>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < kk; ++c) columns[c][r] = rows[r][c];
  }
  const double mean_clock = std::pow(t, p.theta) / std::tgamma(1.0 + p.theta);
  for (int i = 1; i <= k; ++i) {
    const std::string tag = "class_" + std::to_string(i);
    auto& observed = columns[static_cast<std::size_t>(i - 1)];
    add_z_check(rep, tag + "_variance", stats::variance(observed),
                classes.p(i) * rate * mean_clock);
    const LimitLawSampler limit(BrownianTimeChangedLaw{classes.p(i) * rate, p.theta}, t);
    auto reference = limit.sample_many(opts.replicas, opts.seed,
                                       kReference + static_cast<std::uint64_t>(i), opts.jobs);
    add_ks_check(rep, opts, tag + "_ks", observed, std::move(reference));
  }
  if (k >= 2) add_z_check(rep, "correlation_1_2", stats::correlation(columns[0], columns[1]), 0.0);
  rep.finalize();
  return rep;
}

namespace {

void validate_model(const QueueModel& model, int i) {
  validate(model.arrivals);
  validate(model.departures);
  if (i < 1 || i > model.classes.size()) throw InvalidParameter("class index out of range");
}

void describe_model(ExperimentReport& rep, const QueueModel& model, int i, double t, double u) {
  rep.parameters["alpha"] = model.arrivals.theta;
  rep.parameters["beta"] = model.departures.theta;
  rep.parameters["lambda"] = model.arrivals.lambda;
  rep.parameters["mu"] = model.departures.lambda;
  rep.parameters["p"] = model.classes.probabilities();
  rep.parameters["i"] = static_cast<std::int64_t>(i);
  rep.parameters["t"] = t;
  if (u > 0.0) rep.parameters["u"] = u;
}

}  // namespace

ExperimentReport verify_queue_scaling(const QueueModel& model, int i, double t, double u,
                                      const ExperimentOptions& opts) {
  validate_model(model, i);
  check_positive(t, "t");
  if (!(u >= 1000.0)) throw InvalidParameter("u must be at least 1000");
  check_options(opts, 100);
  auto rep = start_report("queue-scaling", opts);
  describe_model(rep, model, i, t, u);
  const double alpha = model.arrivals.theta;
  const double beta = model.departures.theta;
  const double gamma = std::max(alpha, beta);
  const double scale = std::pow(u, gamma);
  const double horizon = u * t;

  auto rows = run_replicas<std::pair<double, double>>(opts, kSystem, [&](RngStream& rng) {
    const auto events = simulate_fpp_renewal(model.arrivals, horizon, rng);
    const auto labeled = thin_events(events, model.classes, rng);
    const auto departures = simulate_fpp_renewal(model.departures, horizon, rng);
    const auto traj = simulate_multiclass_queue(labeled, departures);
    if (traj.size() == 0) return std::pair<double, double>{0.0, 0.0};
    const auto row = traj.lengths_at(traj.size() - 1);
    std::int64_t upto = 0;
    for (int c = 0; c < i; ++c) upto += row[static_cast<std::size_t>(c)];
    return std::pair<double, double>{static_cast<double>(upto) / scale,
                                     static_cast<double>(row[static_cast<std::size_t>(i - 1)]) / scale};
  });
  std::vector<double> aggregate(rows.size());
  std::vector<double> share(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    aggregate[r] = rows[r].first;
    share[r] = rows[r].second;
  }
  const double a_hi = std::pow(model.arrivals.lambda, alpha) * model.classes.cumulative(i);
  const double a_lo = std::pow(model.arrivals.lambda, alpha) * model.classes.cumulative(i - 1);
  const double b = std::pow(model.departures.lambda, beta);
  if (alpha > beta) {
    rep.parameters["regime"] = std::string("alpha>beta");
    const LimitLawSampler limit(InverseClockLaw{alpha, a_hi}, t);
    add_ks_check(rep, opts, "aggregate_ks", std::move(aggregate),
                 limit.sample_many(opts.replicas, opts.seed, kReference, opts.jobs));
  } else if (beta > alpha) {
    rep.parameters["regime"] = std::string("beta>alpha");
    const auto m = stats::mean(aggregate);
    rep.add_check("aggregate_mean", m.value, 0.01, Direction::kLess,
                  format_note("mean of scaled queue; s.e. = %.3g", m.std_error));
  } else {
    rep.parameters["regime"] = std::string("alpha=beta");
    const LimitLawSampler limit(ReflectedDifferenceLaw{alpha, a_hi, beta, b}, t);
    add_ks_check(rep, opts, "aggregate_ks", std::move(aggregate),
                 limit.sample_many(opts.replicas, opts.seed, kReference, opts.jobs));
    const LimitLawSampler class_limit(ReflectedShareLaw{alpha, a_hi, a_lo, beta, b}, t);
    add_ks_check(rep, opts, "class_" + std::to_string(i) + "_ks", std::move(share),
                 class_limit.sample_many(opts.replicas, opts.seed, kSecondary, opts.jobs));
  }
  rep.finalize();
  return rep;
}

namespace {

// Exact Phi(f)(h) for f(s) = A(s) - a Y(s) - D(s) + b Y'(s). Between
// breakpoints of the clocks and jump times f is linear, so its infimum is
// attained at a breakpoint, either at a left limit or at a value.
double reflected_compensated_end(const EventTimeline& arrivals, int up_to_class,
                                 const EventTimeline& departures, const InverseClockPath& ya,
                                 double a, const InverseClockPath& yb, double b, double h) {
  struct Mark {
    double time;
    int jump;
  };
  std::vector<Mark> marks;
  marks.reserve(arrivals.size() + departures.size() + ya.grid().values.size() +
                yb.grid().values.size() + 1);
  for (std::size_t k = 0; k < arrivals.size(); ++k) {
    if (arrivals.labels[k] <= up_to_class) marks.push_back({arrivals.times[k], 1});
  }
  for (double s : departures.times) marks.push_back({s, -1});
  for (double s : ya.grid().values) {
    if (s > 0.0 && s < h) marks.push_back({s, 0});
  }
  for (double s : yb.grid().values) {
    if (s > 0.0 && s < h) marks.push_back({s, 0});
  }
  marks.push_back({h, 0});
  std::sort(marks.begin(), marks.end(),
            [](const Mark& x, const Mark& y) { return x.time < y.time; });
  std::int64_t level = 0;
  double inf = 0.0;
  double value = 0.0;
  for (std::size_t k = 0; k < marks.size();) {
    const double s = marks[k].time;
    const double drift = b * yb.at(s) - a * ya.at(s);
    inf = std::min(inf, static_cast<double>(level) + drift);
    for (; k < marks.size() && marks[k].time == s; ++k) level += marks[k].jump;
    value = static_cast<double>(level) + drift;
    inf = std::min(inf, value);
  }
  return value - inf;
}

}  // namespace

ExperimentReport verify_centered_queue_clt(const QueueModel& model, int i, double t,
                                           double u, const ExperimentOptions& opts) {
  validate_model(model, i);
  check_positive(t, "t");
  if (!(u >= 1000.0)) throw InvalidParameter("u must be at least 1000");
  check_options(opts, 100);
  auto rep = start_report("centered-clt", opts);
  describe_model(rep, model, i, t, u);
  const double alpha = model.arrivals.theta;
  const double beta = model.departures.theta;
  const double gamma = std::max(alpha, beta);
  const double scale = std::pow(u, 0.5 * gamma);
  const double horizon = u * t;
  const double a = std::pow(model.arrivals.lambda, alpha) * model.classes.cumulative(i);
  const double b = std::pow(model.departures.lambda, beta);

  auto observed = run_replicas<double>(opts, kSystem, [&](RngStream& rng) {
    const auto arr = simulate_fpp_timechange_with_clock(model.arrivals, horizon, 0.0, rng);
    const auto labeled = thin_events(arr.events, model.classes, rng);
    const auto dep = simulate_fpp_timechange_with_clock(model.departures, horizon, 0.0, rng);
    return reflected_compensated_end(labeled, i, dep.events, arr.clock, a, dep.clock, b,
                                     horizon) /
           scale;
  });
  ReflectedBrownianDifferenceLaw law{a, alpha, b, beta};
  if (alpha > beta) {
    law.variance_b = 0.0;
    rep.parameters["regime"] = std::string("alpha>beta");
  } else if (beta > alpha) {
    law.variance_a = 0.0;
    rep.parameters["regime"] = std::string("beta>alpha");
  } else {
    rep.parameters["regime"] = std::string("alpha=beta");
  }
  const LimitLawSampler limit(law, t);
  add_ks_check(rep, opts, "reflected_ks", std::move(observed),
               limit.sample_many(opts.replicas, opts.seed, kReference, opts.jobs));
  rep.finalize();
  return rep;
}

namespace {

void check_horizons(std::span<const double> horizons) {
  if (horizons.size() < 3) throw InvalidParameter("need at least three horizons");
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    check_positive(horizons[k], "horizon");
    if (k > 0 && !(horizons[k] > horizons[k - 1])) {
      throw InvalidParameter("horizons must be strictly increasing");
    }
  }
}

std::string horizon_label(double h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", h);
  return buf;
}

// Adds one strict-growth check per consecutive pair of medians.
void add_trend_checks(ExperimentReport& rep, const std::string& what,
                      std::span<const double> horizons, std::span<const double> medians,
                      bool increasing) {
  for (std::size_t k = 1; k < medians.size(); ++k) {
    const double diff = increasing ? medians[k] - medians[k - 1] : medians[k - 1] - medians[k];
    rep.add_check(what + "_" + horizon_label(horizons[k - 1]) + "_to_" +
                      horizon_label(horizons[k]),
                  diff, 0.0, Direction::kGreater,
                  format_note(increasing ? "median %.6g -> %.6g (increase)"
                                         : "median %.6g -> %.6g (decrease)",
                              medians[k - 1], medians[k]));
  }
}

std::vector<double> column_medians(const std::vector<std::vector<double>>& rows,
                                   std::size_t offset, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<double> col(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) col[r] = rows[r][offset + c];
    out[c] = stats::median(std::move(col));
  }
  return out;
}

}  // namespace

ExperimentReport verify_recurrence(const QueueModel& model, int i,
                                   std::span<const double> horizons,
                                   const ExperimentOptions& opts) {
  validate_model(model, i);
  if (model.arrivals.theta != model.departures.theta) {
    throw InvalidParameter("recurrence is checked only in the critical case alpha == beta");
  }
  check_horizons(horizons);
  check_options(opts, 10);
  auto rep = start_report("recurrence", opts);
  describe_model(rep, model, i, horizons.back(), 0.0);
  rep.parameters.erase("t");
  rep.parameters["horizons"] = std::vector<double>(horizons.begin(), horizons.end());
  rep.parameters["proxy"] = std::string("median emptying count and running maximum");
  const std::size_t nh = horizons.size();
  const double t_max = horizons.back();

  auto rows = run_replicas<std::vector<double>>(opts, kSystem, [&](RngStream& rng) {
    const auto events = simulate_fpp_renewal(model.arrivals, t_max, rng);
    const auto labeled = thin_events(events, model.classes, rng);
    const auto departures = simulate_fpp_renewal(model.departures, t_max, rng);
    const auto path = aggregate_lengths(simulate_multiclass_queue(labeled, departures), i);
    std::vector<double> out(2 * nh, 0.0);
    std::int64_t emptyings = 0;
    double running_max = 0.0;
    double previous = 0.0;
    std::size_t h = 0;
    for (std::size_t k = 0; k <= path.jump_times.size(); ++k) {
      const double s = k < path.jump_times.size() ? path.jump_times[k] : INFINITY;
      while (h < nh && s > horizons[h]) {
        out[h] = static_cast<double>(emptyings);
        out[nh + h] = running_max;
        ++h;
      }
      if (k == path.jump_times.size()) break;
      const double v = path.values[k];
      if (v == 0.0 && previous > 0.0) ++emptyings;
      running_max = std::max(running_max, v);
      previous = v;
    }
    return out;
  });
  const auto med_empty = column_medians(rows, 0, nh);
  const auto med_max = column_medians(rows, nh, nh);
  add_trend_checks(rep, "median_emptyings", horizons, med_empty, true);
  add_trend_checks(rep, "median_running_max", horizons, med_max, true);
  rep.finalize();
  return rep;
}

ExperimentReport verify_oscillation(double theta, double c, std::span<const double> horizons,
                                    const ExperimentOptions& opts) {
  validate_theta(theta);
  if (theta >= 1.0) throw InvalidParameter("oscillation needs theta < 1");
  check_positive(c, "c");
  check_horizons(horizons);
  check_options(opts, 10);
  auto rep = start_report("oscillation", opts);
  rep.parameters["theta"] = theta;
  rep.parameters["c"] = c;
  rep.parameters["horizons"] = std::vector<double>(horizons.begin(), horizons.end());
  rep.parameters["proxy"] = std::string("median running min and max of Y - c Y'");
  const std::size_t nh = horizons.size();
  const double t_max = horizons.back();

  auto rows = run_replicas<std::vector<double>>(opts, kSystem, [&](RngStream& rng) {
    const auto y1 = simulate_inverse_clock(theta, t_max, 0.0, rng);
    const auto y2 = simulate_inverse_clock(theta, t_max, 0.0, rng);
    // Both clocks are piecewise linear, so extremes sit at their breakpoints.
    std::vector<double> marks;
    for (double s : y1.grid().values) if (s < t_max) marks.push_back(s);
    for (double s : y2.grid().values) if (s < t_max) marks.push_back(s);
    marks.insert(marks.end(), horizons.begin(), horizons.end());
    std::sort(marks.begin(), marks.end());
    std::vector<double> out(2 * nh, 0.0);
    double lo = 0.0;
    double hi = 0.0;
    std::size_t h = 0;
    for (double s : marks) {
      const double g = y1.at(s) - c * y2.at(s);
      lo = std::min(lo, g);
      hi = std::max(hi, g);
      while (h < nh && s >= horizons[h]) {
        out[h] = lo;
        out[nh + h] = hi;
        ++h;
      }
    }
    return out;
  });
  const auto med_min = column_medians(rows, 0, nh);
  const auto med_max = column_medians(rows, nh, nh);
  add_trend_checks(rep, "median_running_min", horizons, med_min, false);
  add_trend_checks(rep, "median_running_max", horizons, med_max, true);
  rep.finalize();
  return rep;
}

ExperimentReport verify_best_ask(FppParams arrivals, FppParams departures,
                                 const LocationSampler& locations,
                                 std::span<const double> t_values,
                                 const ExperimentOptions& opts) {
  validate(arrivals);
  validate(departures);
  if (!(arrivals.theta > departures.theta)) {
    throw InvalidParameter("best-ask convergence needs alpha > beta");
  }
  if (t_values.size() < 2) throw InvalidParameter("need at least two t values");
  for (std::size_t k = 0; k < t_values.size(); ++k) {
    check_positive(t_values[k], "t");
    if (k > 0 && !(t_values[k] > t_values[k - 1])) {
      throw InvalidParameter("t values must be strictly increasing");
    }
  }
  check_options(opts, 10);
  auto rep = start_report("best-ask", opts);
  rep.parameters["alpha"] = arrivals.theta;
  rep.parameters["beta"] = departures.theta;
  rep.parameters["lambda"] = arrivals.lambda;
  rep.parameters["mu"] = departures.lambda;
  rep.parameters["locations"] = locations.describe();
  rep.parameters["t_values"] = std::vector<double>(t_values.begin(), t_values.end());
  const double a = locations.lower_support();
  const std::vector<double> eps = {0.1, 0.05};
  const std::size_t nt = t_values.size();
  const std::size_t ne = eps.size();
  const double t_max = t_values.back();

  // Row layout: [e][k] indicator C_min(t_k) > a + eps_e, then [e][k]
  // indicator Q_{t_k}(a + eps_e) > t_k^{beta/2}.
  auto rows = run_replicas<std::vector<double>>(opts, kSystem, [&](RngStream& rng) {
    const auto arr = simulate_fpp_renewal(arrivals, t_max, rng);
    const auto dep = simulate_fpp_renewal(departures, t_max, rng);
    std::vector<double> out(2 * ne * nt, 0.0);
    for (std::size_t k = 0; k < nt; ++k) {
      // The same location stream at every t keeps one sample path per replica.
      RngStream loc(rng.seed(), rng.stream_index(), kReference);
      const auto res = simulate_continuum_queue(truncate(arr, t_values[k]), locations,
                                                truncate(dep, t_values[k]), loc);
      const double ask = res.final_state.best_ask();
      const double dense = std::pow(t_values[k], 0.5 * departures.theta);
      for (std::size_t e = 0; e < ne; ++e) {
        out[e * nt + k] = ask > a + eps[e] ? 1.0 : 0.0;
        out[ne * nt + e * nt + k] =
            static_cast<double>(res.final_state.count_up_to(a + eps[e])) > dense ? 1.0 : 0.0;
      }
    }
    return out;
  });
  const double n = static_cast<double>(rows.size());
  auto frequency = [&](std::size_t col) {
    double s = 0.0;
    for (const auto& r : rows) s += r[col];
    return s / n;
  };
  for (std::size_t e = 0; e < ne; ++e) {
    const std::string tag = "eps_" + horizon_label(eps[e]);
    std::vector<double> prob(nt);
    for (std::size_t k = 0; k < nt; ++k) prob[k] = frequency(e * nt + k);
    for (std::size_t k = 1; k < nt; ++k) {
      rep.add_check(tag + "_p_nonincreasing_t" + horizon_label(t_values[k]),
                    prob[k] - prob[k - 1], 0.0, Direction::kLessEqual,
                    format_note("P(C_min > a + eps): %.4g -> %.4g", prob[k - 1], prob[k]));
    }
    rep.add_check(tag + "_p_decrease_overall", prob.back() - prob.front(), 0.0, Direction::kLess,
                  format_note("P(C_min > a + eps): %.4g at first t, %.4g at last t", prob.front(),
                              prob.back()));
    rep.add_check(tag + "_p_at_last_t", prob.back(), 0.1, Direction::kLess);
    const double dense_first = frequency(ne * nt + e * nt);
    const double dense_last = frequency(ne * nt + e * nt + nt - 1);
    rep.add_check(tag + "_density_increase_overall", dense_last - dense_first, 0.0,
                  Direction::kGreater,
                  format_note("frequency of Q_t(a + eps) > t^(beta/2): %.4g -> %.4g", dense_first,
                              dense_last));
    // The 0.9 level is fixed at eps = 0.1 only; smaller eps converges more slowly.
    if (e == 0) {
      rep.add_check(tag + "_density_frequency", dense_last, 0.9, Direction::kGreater,
                    "frequency of Q_t(a + eps) > t^(beta/2) at the largest t");
    }
  }
  rep.finalize();
  return rep;
}

}  // namespace fracq
