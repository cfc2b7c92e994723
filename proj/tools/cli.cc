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

#include "cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracq/csv.hpp"
#include "fracq/error.hpp"
#include "fracq/limits.hpp"
#include "fracq/parallel.hpp"
#include "fracq/processes.hpp"
#include "fracq/queue.hpp"
#include "fracq/report.hpp"
#include "fracq/samplers.hpp"
#include "fracq/stats.hpp"
#include "json.hpp"

namespace fracq::cli {
namespace {

using Json = nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FlagSpec {
  const char* name;
  const char* help;
};

constexpr FlagSpec kFlags[] = {
    {"alpha", "arrival index in (0, 1]"},
    {"beta", "departure index in (0, 1]"},
    {"theta", "process index in (0, 1]"},
    {"lambda", "arrival rate, > 0"},
    {"mu", "departure rate, > 0"},
    {"p", "class probabilities, comma list summing to 1"},
    {"t", "evaluation time, > 0"},
    {"u", "scaling factor"},
    {"horizon", "simulation horizon, > 0"},
    {"horizons", "increasing comma list of horizons or t values"},
    {"step", "subordinator grid step, > 0"},
    {"class", "class index i for Q_{<=i}"},
    {"c", "oscillation constant, > 0"},
    {"locations", "location law: uniform:a,b | point:x@w,... | exp:rate | empirical:v,..."},
    {"replicas", "number of replicas or samples"},
    {"seed", "64-bit seed"},
    {"jobs", "worker threads"},
    {"significance", "test level in (0, 1)"},
    {"plot", "plot data kind: ecdf | qq | path"},
    {"out", "output directory (default $FRACQ_OUT or .)"},
    {"config", "JSON config file; flags override its values"},
};

std::string flag(const std::string& key) { return "--" + key; }

/// Merged parameters: config values first, command-line flags on top.
class Params {
 public:
  void set(const std::string& key, Json value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const {
    return values_.contains(key) && !values_[key].is_null();
  }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return to_real(key, values_[key]);
  }
  double positive(const std::string& key, double fallback) const {
    const double v = real(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw UsageError(flag(key) + ": expected a positive finite number, got " + shown(key, v));
    }
    return v;
  }
  double index(const std::string& key, double fallback) const {
    const double v = real(key, fallback);
    if (!(v > 0.0 && v <= 1.0)) {
      throw UsageError(flag(key) + ": expected a value in (0, 1], got " + shown(key, v));
    }
    return v;
  }
  /// theta, accepting --alpha as a synonym.
  double theta(double fallback) const {
    if (has("theta")) return index("theta", fallback);
    return index("alpha", fallback);
  }
  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback,
                             std::uint64_t minimum) const {
    if (!has(key)) return fallback;
    const Json& v = values_[key];
    std::uint64_t out = 0;
    if (v.is_number_unsigned()) {
      out = v.get<std::uint64_t>();
    } else if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      out = static_cast<std::uint64_t>(v.get<std::int64_t>());
    } else if (v.is_number_float()) {
      const double d = v.get<double>();
      if (!(d >= 0.0 && d == std::floor(d) && d < 1.8e19)) {
        throw UsageError(flag(key) + ": expected a nonnegative integer, got " + v.dump());
      }
      out = static_cast<std::uint64_t>(d);
    } else if (v.is_string()) {
      const std::string s = v.get<std::string>();
      out = parse_unsigned(key, s);
    } else {
      throw UsageError(flag(key) + ": expected a nonnegative integer, got " + v.dump());
    }
    if (out < minimum) {
      throw UsageError(flag(key) + ": expected an integer >= " + std::to_string(minimum) +
                       ", got " + std::to_string(out));
    }
    return out;
  }
  std::vector<double> list(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    const Json& v = values_[key];
    std::vector<double> out;
    if (v.is_array()) {
      for (const auto& x : v) out.push_back(to_real(key, x));
    } else if (v.is_string()) {
      std::stringstream ss(v.get<std::string>());
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(to_real(key, Json(item)));
    } else if (v.is_number()) {
      out.push_back(v.get<double>());
    } else {
      throw UsageError(flag(key) + ": expected a comma list of numbers");
    }
    if (out.empty()) throw UsageError(flag(key) + ": expected a nonempty comma list");
    return out;
  }
  std::string text(const std::string& key, std::string fallback) const {
    if (!has(key)) return fallback;
    const Json& v = values_[key];
    if (!v.is_string()) throw UsageError(flag(key) + ": expected a string, got " + v.dump());
    return v.get<std::string>();
  }

 private:
  static double to_real(const std::string& key, const Json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      char* end = nullptr;
      errno = 0;
      const double d = std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw UsageError(flag(key) + ": expected a real number, got '" + s + "'");
      }
      return d;
    }
    throw UsageError(flag(key) + ": expected a real number, got " + v.dump());
  }
  static std::uint64_t parse_unsigned(const std::string& key, const std::string& s) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE) {
      throw UsageError(flag(key) + ": expected a nonnegative integer, got '" + s + "'");
    }
    return v;
  }
  std::string shown(const std::string& key, double v) const {
    return has(key) ? values_[key].dump() : csv::format_double(v);
  }

  Json values_ = Json::object();
};

ClassProbabilities classes_from(const Params& params) {
  try {
    return ClassProbabilities(params.list("p", {1.0}));
  } catch (const InvalidParameter& e) {
    throw UsageError(std::string("--p: ") + e.what());
  }
}

struct Context {
  Params params;
  std::string kind;
  std::filesystem::path out_dir;
  std::uint64_t seed = 42;
  unsigned jobs = 1;
  std::ostream* out = nullptr;
};

std::string write_artifact(const Context& ctx, const std::string& file,
                           const std::function<void(std::ostream&)>& body) {
  std::error_code ec;
  std::filesystem::create_directories(ctx.out_dir, ec);
  if (ec) {
    throw ResourceError("cannot create output directory " + ctx.out_dir.string() + ": " +
                        ec.message());
  }
  const auto path = ctx.out_dir / file;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ResourceError("cannot open " + path.string() + " for writing");
  body(f);
  f.flush();
  if (!f) throw ResourceError("failed writing " + path.string());
  return path.string();
}

std::string plot_kind(const Params& params, std::initializer_list<const char*> allowed) {
  const std::string kind = params.text("plot", "");
  if (kind.empty()) return kind;
  for (const char* a : allowed) {
    if (kind == a) return kind;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : " | ") + std::string(a);
  throw UsageError("--plot: expected one of " + list + " here, got '" + kind + "'");
}

int run_sample(Context& ctx) {
  const Params& prm = ctx.params;
  if (ctx.kind == "ml" || ctx.kind == "stable") {
    const double theta = prm.theta(0.5);
    const double lambda = prm.positive("lambda", 1.0);
    const auto n = prm.unsigned_int("replicas", 1000, 1);
    const std::string plot = plot_kind(prm, {"ecdf"});
    std::vector<double> values(n);
    const bool ml = ctx.kind == "ml";
    parallel_for(n, ctx.jobs, [&](std::size_t i) {
      RngStream rng(ctx.seed, i, 0);
      values[i] = ml ? sample_mittag_leffler({theta, lambda}, rng)
                     : sample_positive_stable(theta, rng);
    });
    const auto path = write_artifact(ctx, "sample_" + ctx.kind + ".csv", [&](std::ostream& f) {
      f << "value\n";
      for (double v : values) f << csv::format_double(v) << '\n';
    });
    *ctx.out << "sample " << ctx.kind << ": n=" << n
             << " median=" << csv::format_double(stats::median(values)) << " -> " << path << '\n';
    if (!plot.empty()) {
      const auto p = write_artifact(ctx, "sample_" + ctx.kind + "_ecdf.csv", [&](std::ostream& f) {
        csv::emit_plot_data(f, "ecdf", SamplePair{ctx.kind, values, {}});
      });
      *ctx.out << "plot data -> " << p << '\n';
    }
    return kExitOk;
  }
  if (ctx.kind == "inverse-clock") {
    const double theta = prm.theta(0.5);
    const double horizon = prm.positive("horizon", 1.0);
    const double step = prm.has("step") ? prm.positive("step", 0.0)
                                        : default_clock_step(theta, horizon);
    const std::string plot = plot_kind(prm, {"path"});
    RngStream rng(ctx.seed, 0, 0);
    const auto clock = simulate_inverse_clock(theta, horizon, step, rng);
    constexpr int kPoints = 1000;
    std::vector<double> t_grid(kPoints + 1);
    for (int k = 0; k <= kPoints; ++k) t_grid[k] = horizon * k / kPoints;
    t_grid.back() = horizon;
    const auto grid = invert_subordinator(clock.grid(), t_grid);
    const auto path = write_artifact(ctx, "sample_inverse_clock.csv",
                                     [&](std::ostream& f) { csv::write_clock_grid(f, grid); });
    *ctx.out << "sample inverse-clock: Y(" << csv::format_double(horizon)
             << ")=" << csv::format_double(grid.y_values.back()) << " -> " << path << '\n';
    if (!plot.empty()) {
      std::vector<std::pair<double, double>> rows;
      for (std::size_t k = 0; k < grid.t_grid.size(); ++k) {
        rows.emplace_back(grid.t_grid[k], grid.y_values[k]);
      }
      const auto p = write_artifact(ctx, "sample_inverse_clock_path.csv", [&](std::ostream& f) {
        csv::write_pairs(f, "time", "value", rows);
      });
      *ctx.out << "plot data -> " << p << '\n';
    }
    return kExitOk;
  }
  throw UsageError("sample: expected kind ml | stable | inverse-clock, got '" + ctx.kind + "'");
}

int run_fpp(Context& ctx) {
  const Params& prm = ctx.params;
  if (ctx.kind.empty()) ctx.kind = "renewal";
  if (ctx.kind != "renewal" && ctx.kind != "timechange") {
    throw UsageError("fpp: expected kind renewal | timechange, got '" + ctx.kind + "'");
  }
  const FppParams p{prm.theta(0.5), prm.positive("lambda", 1.0)};
  const double horizon = prm.positive("horizon", 1.0);
  const double step = prm.has("step") ? prm.positive("step", 0.0) : 0.0;
  const bool thin = prm.has("p");
  const auto classes = classes_from(prm);
  const std::string plot = plot_kind(prm, {"path"});
  RngStream rng(ctx.seed, 0, 0);
  EventTimeline events = ctx.kind == "renewal" ? simulate_fpp_renewal(p, horizon, rng)
                                               : simulate_fpp_timechange(p, horizon, step, rng);
  if (thin) events = thin_events(events, classes, rng);
  const auto path = write_artifact(ctx, "fpp_" + ctx.kind + ".csv",
                                   [&](std::ostream& f) { csv::write_timeline(f, events); });
  *ctx.out << "fpp " << ctx.kind << ": N(" << csv::format_double(horizon) << ")=" << events.size()
           << " -> " << path << '\n';
  if (!plot.empty()) {
    std::vector<std::pair<double, double>> rows;
    for (std::size_t k = 0; k < events.size(); ++k) {
      rows.emplace_back(events.times[k], static_cast<double>(k + 1));
    }
    const auto pp = write_artifact(ctx, "fpp_" + ctx.kind + "_path.csv", [&](std::ostream& f) {
      csv::write_pairs(f, "time", "value", rows);
    });
    *ctx.out << "plot data -> " << pp << '\n';
  }
  return kExitOk;
}

int run_queue(Context& ctx) {
  const Params& prm = ctx.params;
  if (!ctx.kind.empty()) throw UsageError("queue takes no kind, got '" + ctx.kind + "'");
  const double alpha = prm.index("alpha", 0.6);
  const FppParams arrivals{alpha, prm.positive("lambda", 1.0)};
  const FppParams departures{prm.index("beta", alpha), prm.positive("mu", 1.0)};
  const auto classes = classes_from(prm);
  const double horizon = prm.positive("horizon", 100.0);
  const std::string plot = plot_kind(prm, {"path"});
  RngStream rng(ctx.seed, 0, 0);
  const auto events = simulate_fpp_renewal(arrivals, horizon, rng);
  const auto labeled = thin_events(events, classes, rng);
  const auto deps = simulate_fpp_renewal(departures, horizon, rng);
  const auto traj = simulate_multiclass_queue(labeled, deps);
  const auto path = write_artifact(ctx, "queue_trajectory.csv",
                                   [&](std::ostream& f) { csv::write_trajectory(f, traj); });
  const std::int64_t final_total = traj.size() ? traj.total_length.back() : 0;
  *ctx.out << "queue: events=" << traj.size() << " emptyings=" << traj.emptying_times.size()
           << " wasted=" << traj.wasted_services << " q_total(" << csv::format_double(horizon)
           << ")=" << final_total << " -> " << path << '\n';
  if (!plot.empty()) {
    const auto pp = write_artifact(ctx, "queue_path.csv",
                                   [&](std::ostream& f) { csv::write_path(f, traj); });
    *ctx.out << "plot data -> " << pp << '\n';
  }
  return kExitOk;
}

int run_auction(Context& ctx) {
  const Params& prm = ctx.params;
  if (!ctx.kind.empty()) throw UsageError("auction takes no kind, got '" + ctx.kind + "'");
  const FppParams arrivals{prm.index("alpha", 0.9), prm.positive("lambda", 1.0)};
  const FppParams departures{prm.index("beta", 0.5), prm.positive("mu", 1.0)};
  const double horizon = prm.positive("horizon", 100.0);
  const std::string plot = plot_kind(prm, {"path"});
  std::optional<LocationSampler> locations;
  try {
    locations = LocationSampler::parse(prm.text("locations", "uniform:1,2"));
  } catch (const InvalidParameter& e) {
    throw UsageError(std::string("--locations: ") + e.what());
  }
  RngStream rng(ctx.seed, 0, 0);
  const auto arr = simulate_fpp_renewal(arrivals, horizon, rng);
  const auto dep = simulate_fpp_renewal(departures, horizon, rng);
  RngStream loc(ctx.seed, 0, 1);
  const auto res = simulate_continuum_queue(arr, *locations, dep, loc);
  const auto path = write_artifact(ctx, "auction_best_ask.csv", [&](std::ostream& f) {
    csv::write_best_ask(f, res.best_ask);
  });
  *ctx.out << "auction: arrivals=" << arr.size() << " departures=" << dep.size()
           << " queue=" << res.final_state.total()
           << " best_ask=" << csv::format_double(res.final_state.best_ask()) << " -> " << path
           << '\n';
  if (!plot.empty()) {
    std::vector<std::pair<double, double>> rows;
    rows.emplace_back(0.0, res.best_ask.initial_value);
    for (std::size_t k = 0; k < res.best_ask.jump_times.size(); ++k) {
      rows.emplace_back(res.best_ask.jump_times[k], res.best_ask.values[k]);
    }
    const auto pp = write_artifact(ctx, "auction_path.csv", [&](std::ostream& f) {
      csv::write_pairs(f, "time", "value", rows);
    });
    *ctx.out << "plot data -> " << pp << '\n';
  }
  return kExitOk;
}

std::uint64_t default_replicas(const std::string& kind) {
  if (kind == "pmf") return 100'000;
  if (kind == "covariance") return 1'000'000;
  if (kind == "recurrence" || kind == "oscillation" || kind == "best-ask") return 200;
  return 10'000;
}

int run_verify(Context& ctx) {
  const Params& prm = ctx.params;
  const std::string& kind = ctx.kind;
  static const char* const kKinds[] = {"pmf",          "covariance", "lln",
                                       "fclt",         "scaling",    "centered-clt",
                                       "recurrence",   "oscillation", "best-ask"};
  if (std::find_if(std::begin(kKinds), std::end(kKinds),
                   [&](const char* k) { return kind == k; }) == std::end(kKinds)) {
    throw UsageError(
        "verify: expected kind pmf | covariance | lln | fclt | scaling | centered-clt | "
        "recurrence | oscillation | best-ask, got '" + kind + "'");
  }
  ExperimentOptions opts;
  opts.replicas = prm.unsigned_int("replicas", default_replicas(kind), 1);
  opts.seed = ctx.seed;
  opts.jobs = ctx.jobs;
  opts.significance = prm.real("significance", 1e-3);
  if (!(opts.significance > 0.0 && opts.significance < 1.0)) {
    throw UsageError("--significance: expected a value in (0, 1)");
  }
  const std::string plot = plot_kind(prm, {"ecdf", "qq"});
  if (!plot.empty() && (kind == "covariance" || kind == "recurrence" || kind == "oscillation" ||
                        kind == "best-ask")) {
    throw UsageError("--plot: verify " + kind + " keeps no sample data to plot");
  }
  opts.keep_samples = !plot.empty();

  auto queue_model = [&](double alpha_default, double lambda_default) {
    QueueModel m;
    const double alpha = prm.index("alpha", alpha_default);
    m.arrivals = {alpha, prm.positive("lambda", lambda_default)};
    m.departures = {prm.index("beta", alpha), prm.positive("mu", 1.0)};
    m.classes = classes_from(prm);
    return m;
  };
  auto class_index = [&](const QueueModel& m) {
    const auto i = prm.unsigned_int("class", static_cast<std::uint64_t>(m.classes.size()), 1);
    if (i > static_cast<std::uint64_t>(m.classes.size())) {
      throw UsageError("--class: expected an index in 1.." + std::to_string(m.classes.size()));
    }
    return static_cast<int>(i);
  };
  auto horizons = [&](std::vector<double> fallback) { return prm.list("horizons", fallback); };

  std::function<ExperimentReport()> job;
  if (kind == "pmf") {
    const FppParams p{prm.theta(0.5), prm.positive("lambda", 1.0)};
    const double t = prm.positive("t", 1.0);
    job = [=] { return verify_pmf(p, t, opts); };
  } else if (kind == "covariance") {
    const FppParams p{prm.theta(0.7), prm.positive("lambda", 1.0)};
    const auto classes = prm.has("p") ? classes_from(prm) : ClassProbabilities({0.3, 0.7});
    const double t = prm.positive("t", 1.0);
    job = [=] { return verify_thinning(p, classes, t, opts); };
  } else if (kind == "lln" || kind == "fclt") {
    const FppParams p{prm.theta(0.7), prm.positive("lambda", 1.0)};
    const auto classes = prm.has("p") ? classes_from(prm) : ClassProbabilities({0.3, 0.7});
    const double t = prm.positive("t", 1.0);
    const double u = prm.positive("u", 1000.0);
    if (kind == "lln") {
      job = [=] { return verify_lln(p, classes, t, u, opts); };
    } else {
      job = [=] { return verify_fclt(p, classes, t, u, opts); };
    }
  } else if (kind == "scaling" || kind == "centered-clt") {
    const auto m = queue_model(0.6, 1.0);
    const int i = class_index(m);
    const double t = prm.positive("t", 1.0);
    const double u = prm.positive("u", 1000.0);
    if (kind == "scaling") {
      job = [=] { return verify_queue_scaling(m, i, t, u, opts); };
    } else {
      job = [=] { return verify_centered_queue_clt(m, i, t, u, opts); };
    }
  } else if (kind == "recurrence") {
    const auto m = queue_model(0.6, 2.0);
    if (m.arrivals.theta != m.departures.theta) {
      throw UsageError("--beta: recurrence needs beta == alpha");
    }
    const int i = class_index(m);
    const auto h = horizons({100.0, 1000.0, 10000.0});
    job = [=] { return verify_recurrence(m, i, h, opts); };
  } else if (kind == "oscillation") {
    const double theta = prm.theta(0.5);
    if (theta >= 1.0) throw UsageError("--theta: oscillation needs a value in (0, 1)");
    const double c = prm.positive("c", 1.0);
    const auto h = horizons({100.0, 1000.0, 10000.0});
    job = [=] { return verify_oscillation(theta, c, h, opts); };
  } else {
    const FppParams arrivals{prm.index("alpha", 0.9), prm.positive("lambda", 1.0)};
    const FppParams departures{prm.index("beta", 0.5), prm.positive("mu", 1.0)};
    if (!(arrivals.theta > departures.theta)) {
      throw UsageError("--alpha/--beta: best-ask needs alpha > beta");
    }
    std::optional<LocationSampler> loc;
    try {
      loc = LocationSampler::parse(prm.text("locations", "uniform:1,2"));
    } catch (const InvalidParameter& e) {
      throw UsageError(std::string("--locations: ") + e.what());
    }
    const auto t_values = horizons({10.0, 100.0, 1000.0});
    const LocationSampler locations = *loc;
    job = [=] { return verify_best_ask(arrivals, departures, locations, t_values, opts); };
  }

  ExperimentReport report = job();
  const std::string stem = "verify_" + kind;
  if (!plot.empty()) {
    if (report.samples.empty()) {
      throw UsageError("--plot: verify " + kind + " keeps no sample data to plot");
    }
    for (const auto& pair : report.samples) {
      const auto p = write_artifact(ctx, stem + "_" + pair.label + "_" + plot + ".csv",
                                    [&](std::ostream& f) { csv::emit_plot_data(f, plot, pair); });
      report.artifacts.push_back(p);
    }
  }
  const auto json_path = (ctx.out_dir / (stem + ".json")).string();
  report.artifacts.push_back(json_path);
  write_artifact(ctx, stem + ".json", [&](std::ostream& f) { f << report.to_json() << '\n'; });
  *ctx.out << report.summary_line() << '\n';
  return report.passed ? kExitOk : kExitFailed;
}

Json load_config(const std::string& file) {
  std::ifstream f(file);
  if (!f) throw UsageError("--config: cannot read '" + file + "'");
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw UsageError("--config: '" + file + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("--config: expected a JSON object");
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fracq: fractional Poisson processes, restless priority queues and their limits"};
  app.set_help_flag("-h,--help", "print this help and exit");
  std::string command;
  std::string kind;
  app.add_option("command", command, "sample | fpp | queue | auction | verify");
  app.add_option("kind", kind, "subcommand kind (e.g. ml, renewal, covariance)");
  std::map<std::string, std::string> raw;
  for (const auto& f : kFlags) app.add_option(flag(f.name), raw[f.name], f.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "fracq: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    Context ctx;
    ctx.out = &out;
    if (app.count("--config") > 0) {
      const Json config = load_config(raw["config"]);
      for (const auto& [key, value] : config.items()) {
        if (key == "command") {
          if (!value.is_string()) throw UsageError("--config: 'command' must be a string");
          if (command.empty()) command = value.get<std::string>();
          continue;
        }
        if (key == "kind") {
          if (!value.is_string()) throw UsageError("--config: 'kind' must be a string");
          if (kind.empty()) kind = value.get<std::string>();
          continue;
        }
        const bool known = std::any_of(std::begin(kFlags), std::end(kFlags),
                                       [&](const FlagSpec& f) { return key == f.name; });
        if (!known || key == "config") {
          throw UsageError("--config: unknown key '" + key + "'");
        }
        ctx.params.set(key, value);
      }
    }
    for (const auto& f : kFlags) {
      if (std::string(f.name) != "config" && app.count(flag(f.name)) > 0) {
        ctx.params.set(f.name, raw[f.name]);
      }
    }
    ctx.kind = kind;
    ctx.seed = ctx.params.unsigned_int("seed", 42, 0);
    ctx.jobs = static_cast<unsigned>(ctx.params.unsigned_int("jobs", 1, 1));
    const char* env_out = std::getenv("FRACQ_OUT");
    ctx.out_dir = ctx.params.text("out", env_out && *env_out ? env_out : ".");

    if (command == "sample") return run_sample(ctx);
    if (command == "fpp") return run_fpp(ctx);
    if (command == "queue") return run_queue(ctx);
    if (command == "auction") return run_auction(ctx);
    if (command == "verify") return run_verify(ctx);
    if (command.empty()) throw UsageError("missing command; see --help");
    throw UsageError("unknown command '" + command +
                     "'; expected sample | fpp | queue | auction | verify");
  } catch (const UsageError& e) {
    err << "fracq: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidParameter& e) {
    err << "fracq: invalid parameter: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "fracq: error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace fracq::cli
