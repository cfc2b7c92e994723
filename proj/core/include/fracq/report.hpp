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

#ifndef FRACQ_REPORT_HPP_
#define FRACQ_REPORT_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace fracq {

enum class Direction { kGreater, kLess, kGreaterEqual, kLessEqual };

bool satisfies(double statistic, double threshold, Direction direction);
const char* to_string(Direction direction);

/// One thresholded statistic inside an experiment.
struct Check {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  Direction direction = Direction::kGreater;
  bool passed = false;
  std::string note;
};

/// Observed and reference samples kept for plot-data output.
struct SamplePair {
  std::string label;
  std::vector<double> observed;
  std::vector<double> reference;
};

using ParamValue = std::variant<double, std::int64_t, std::string, std::vector<double>>;

/// Verdict of one verification run. With a single check the top-level
/// statistic/threshold/direction are that check's; with several they are
/// (number of failed checks, 0, <=). verdict == satisfies(statistic, ...).
struct ExperimentReport {
  std::string name;
  std::map<std::string, ParamValue> parameters;
  double statistic = 0.0;
  double threshold = 0.0;
  Direction direction = Direction::kLessEqual;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
  bool passed = false;
  std::vector<std::string> artifacts;
  std::vector<Check> checks;
  std::vector<SamplePair> samples;

  Check& add_check(std::string check_name, double value, double limit, Direction dir,
                   std::string note = {});
  void finalize();
  std::string to_json() const;
  std::string summary_line() const;
};

}  // namespace fracq

#endif  // FRACQ_REPORT_HPP_
