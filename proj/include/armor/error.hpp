// Copyright 2026 The ARMOR-Tabular Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace armor {

// Every error raised by the library derives from Error, so callers that only
// care about "something was wrong with the request" can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Array shapes do not agree (state/action counts, batch sizes).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A scalar argument is out of its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Dataset contents are inconsistent with the model they are used with.
class DataError : public Error {
 public:
  using Error::Error;
};

// A file exists but its contents are malformed. `line` is 1-based; 0 when the
// problem is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A request would enumerate more objects than the solver is sized for.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A NaN or infinity showed up in an iterative update.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::size_t step)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace armor
