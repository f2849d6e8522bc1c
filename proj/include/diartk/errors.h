// Copyright (c) 2026 diartk authors
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

#ifndef DIARTK_ERRORS_H_
#define DIARTK_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace diartk {

// Bad argument values (thresholds out of order, empty inputs, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inputs that are individually valid but do not fit together.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated internal contract; indicates a bug in the caller or in diartk.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed text or binary input.  line() is 1-based, 0 when not
// applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " +
                                           what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A rate whose denominator is zero (e.g. DER with no reference speech).
class UndefinedRateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace diartk

#endif  // DIARTK_ERRORS_H_
