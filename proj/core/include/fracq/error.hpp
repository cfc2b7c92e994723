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

#ifndef FRACQ_ERROR_HPP_
#define FRACQ_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace fracq {

// Parameter outside the admissible set of an operation (theta not in (0,1],
// negative rate, malformed probabilities, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the numerically validated domain of an evaluation routine.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A simulated path does not cover a requested time range.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// A simulation exceeded a configured size cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition on its inputs.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace fracq

#endif  // FRACQ_ERROR_HPP_
