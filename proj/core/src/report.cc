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

#include "fracq/report.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace fracq {

bool satisfies(double statistic, double threshold, Direction direction) {
  if (std::isnan(statistic)) return false;
  switch (direction) {
    case Direction::kGreater: return statistic > threshold;
    case Direction::kLess: return statistic < threshold;
    case Direction::kGreaterEqual: return statistic >= threshold;
    case Direction::kLessEqual: return statistic <= threshold;
  }
  return false;
}

const char* to_string(Direction direction) {
  switch (direction) {
    case Direction::kGreater: return ">";
    case Direction::kLess: return "<";
    case Direction::kGreaterEqual: return ">=";
    case Direction::kLessEqual: return "<=";
  }
  return "?";
}

Check& ExperimentReport::add_check(std::string check_name, double value, double limit,
                                   Direction dir, std::string note) {
  Check c;
  c.name = std::move(check_name);
  c.statistic = value;
  c.threshold = limit;
  c.direction = dir;
  c.passed = satisfies(value, limit, dir);
  c.note = std::move(note);
  checks.push_back(std::move(c));
  return checks.back();
}

void ExperimentReport::finalize() {
  if (checks.size() == 1) {
    statistic = checks.front().statistic;
    threshold = checks.front().threshold;
    direction = checks.front().direction;
  } else {
    int failed = 0;
    for (const auto& c : checks) failed += c.passed ? 0 : 1;
    statistic = failed;
    threshold = 0.0;
    direction = Direction::kLessEqual;
  }
  passed = !checks.empty() && satisfies(statistic, threshold, direction);
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [key, value] : parameters) {
    std::visit([&](const auto& v) { params[key] = v; }, value);
  }
  j["parameters"] = params;
  j["statistic"] = number(statistic);
  j["threshold"] = number(threshold);
  j["direction"] = to_string(direction);
  j["replicas"] = replicas;
  j["seed"] = seed;
  j["verdict"] = passed ? "pass" : "fail";
  j["artifacts"] = artifacts;
  nlohmann::ordered_json cs = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["statistic"] = number(c.statistic);
    cj["threshold"] = number(c.threshold);
    cj["direction"] = to_string(c.direction);
    cj["pass"] = c.passed;
    if (!c.note.empty()) cj["note"] = c.note;
    cs.push_back(cj);
  }
  j["checks"] = cs;
  return j.dump(2);
}

std::string ExperimentReport::summary_line() const {
  std::string line = std::string(passed ? "PASS " : "FAIL ") + name;
  for (const auto& c : checks) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), " | %s=%.6g %s %.6g%s", c.name.c_str(), c.statistic,
                  to_string(c.direction), c.threshold, c.passed ? "" : " (fail)");
    line += buf;
  }
  return line;
}

}  // namespace fracq
