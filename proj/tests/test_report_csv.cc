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

#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "fracq/csv.hpp"
#include "fracq/error.hpp"
#include "fracq/report.hpp"
#include "json.hpp"

namespace fracq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Direction, Satisfies) {
  EXPECT_TRUE(satisfies(2, 1, Direction::kGreater));
  EXPECT_FALSE(satisfies(1, 1, Direction::kGreater));
  EXPECT_TRUE(satisfies(1, 1, Direction::kGreaterEqual));
  EXPECT_TRUE(satisfies(0, 1, Direction::kLess));
  EXPECT_TRUE(satisfies(1, 1, Direction::kLessEqual));
  EXPECT_FALSE(satisfies(std::nan(""), 1, Direction::kLessEqual));
  EXPECT_STREQ(to_string(Direction::kGreaterEqual), ">=");
}

TEST(Report, VerdictFollowsChecks) {
  ExperimentReport single;
  single.add_check("ks_p", 0.2, 1e-3, Direction::kGreater);
  single.finalize();
  EXPECT_TRUE(single.passed);
  EXPECT_EQ(single.statistic, 0.2);
  EXPECT_EQ(single.threshold, 1e-3);
  EXPECT_EQ(single.direction, Direction::kGreater);

  ExperimentReport multi;
  multi.add_check("a", 1, 0, Direction::kGreater);
  multi.add_check("b", 1, 0, Direction::kLess);
  multi.add_check("c", 3, 0, Direction::kLess);
  multi.finalize();
  EXPECT_FALSE(multi.passed);
  EXPECT_EQ(multi.statistic, 2.0);
  EXPECT_EQ(multi.passed, satisfies(multi.statistic, multi.threshold, multi.direction));

  ExperimentReport none;
  none.finalize();
  EXPECT_FALSE(none.passed);
}

TEST(Report, JsonFields) {
  ExperimentReport r;
  r.name = "pmf";
  r.parameters["theta"] = 0.5;
  r.parameters["classes"] = std::int64_t{3};
  r.parameters["p"] = std::vector<double>{0.3, 0.7};
  r.parameters["g"] = std::string("uniform:1,2");
  r.replicas = 100;
  r.seed = 42;
  r.artifacts.push_back("x.csv");
  r.add_check("mass", 1e-12, 1e-8, Direction::kLessEqual);
  r.add_check("open", kInf, 1, Direction::kGreater, "diverges");
  r.finalize();
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_EQ(j["name"], "pmf");
  EXPECT_EQ(j["parameters"]["theta"], 0.5);
  EXPECT_EQ(j["parameters"]["classes"], 3);
  EXPECT_EQ(j["parameters"]["p"][1], 0.7);
  EXPECT_EQ(j["parameters"]["g"], "uniform:1,2");
  EXPECT_EQ(j["replicas"], 100);
  EXPECT_EQ(j["seed"], 42);
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_EQ(j["direction"], "<=");
  EXPECT_EQ(j["artifacts"][0], "x.csv");
  ASSERT_EQ(j["checks"].size(), 2u);
  EXPECT_EQ(j["checks"][1]["statistic"], "inf");
  EXPECT_EQ(j["checks"][1]["note"], "diverges");
  EXPECT_FALSE(j["checks"][0].contains("note"));
  EXPECT_EQ(r.to_json(), r.to_json());
  EXPECT_EQ(r.summary_line().rfind("PASS pmf | mass=", 0), 0u);
}

TEST(Csv, FormatDouble) {
  EXPECT_EQ(csv::format_double(0.5), "0.5");
  EXPECT_EQ(csv::format_double(3.0), "3");
  EXPECT_EQ(csv::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(csv::format_double(kInf), "inf");
  EXPECT_EQ(csv::format_double(-kInf), "-inf");
  EXPECT_EQ(csv::format_double(std::nan("")), "nan");
  const double v = 1.0 / 3.0;
  EXPECT_EQ(std::stod(csv::format_double(v)), v);
}

TEST(Csv, TimelineAndClock) {
  EventTimeline e;
  e.horizon = 2;
  e.times = {0.5, 1.25};
  std::ostringstream a;
  csv::write_timeline(a, e);
  EXPECT_EQ(a.str(), "time,class\n0.5,\n1.25,\n");
  e.labels = {2, 1};
  e.classes = 2;
  std::ostringstream b;
  csv::write_timeline(b, e);
  EXPECT_EQ(b.str(), "time,class\n0.5,2\n1.25,1\n");

  InverseClockGrid g;
  g.t_grid = {0, 1};
  g.y_values = {0, 0.75};
  std::ostringstream c;
  csv::write_clock_grid(c, g);
  EXPECT_EQ(c.str(), "t,y\n0,0\n1,0.75\n");
}

TEST(Csv, TrajectoryAndPath) {
  EventTimeline arr;
  arr.horizon = 4;
  arr.times = {1, 2};
  arr.labels = {2, 1};
  arr.classes = 2;
  EventTimeline dep;
  dep.horizon = 4;
  dep.times = {0.5, 3};
  const auto traj = simulate_multiclass_queue(arr, dep);
  std::ostringstream a;
  csv::write_trajectory(a, traj);
  EXPECT_EQ(a.str(),
            "time,event_type,class,q_1,q_2,q_total,infimum\n"
            "0.5,W,,0,0,0,-1\n"
            "1,A,2,0,1,1,-1\n"
            "2,A,1,1,1,2,-1\n"
            "3,D,1,0,1,1,-1\n");
  std::ostringstream b;
  csv::write_path(b, traj);
  EXPECT_EQ(b.str(), "time,value\n0.5,0\n1,1\n2,2\n3,1\n");
}

TEST(Csv, BestAskWritesEmptySentinel) {
  StepFunction f;
  f.initial_value = kInf;
  f.jump_times = {1, 2};
  f.values = {1.5, kInf};
  std::ostringstream out;
  csv::write_best_ask(out, f);
  EXPECT_EQ(out.str(), "time,best_ask\n0,inf\n1,1.5\n2,inf\n");
}

TEST(Csv, PlotData) {
  SamplePair pair{"x", {2, 1, 2}, {}};
  std::ostringstream e;
  csv::emit_plot_data(e, "ecdf", pair);
  EXPECT_EQ(e.str(), "value,cum_prob\n1,0.33333333333333331\n2,1\n");
  std::ostringstream q;
  EXPECT_THROW(csv::emit_plot_data(q, "qq", pair), InvalidParameter);
  pair.reference = {1, 2, 3};
  csv::emit_plot_data(q, "qq", pair);
  EXPECT_EQ(q.str(), "theoretical_q,empirical_q\n1,1\n2,2\n3,2\n");
  std::ostringstream p;
  csv::emit_plot_data(p, "path", SamplePair{"p", {0, 1, 2.5, 3}, {}});
  EXPECT_EQ(p.str(), "time,value\n0,1\n2.5,3\n");
  EXPECT_THROW(csv::emit_plot_data(p, "path", SamplePair{"p", {0}, {}}), InvalidParameter);
  EXPECT_THROW(csv::emit_plot_data(p, "histogram", pair), InvalidParameter);
}

}  // namespace
}  // namespace fracq
