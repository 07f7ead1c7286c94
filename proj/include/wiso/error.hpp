// Copyright 2026 The wiso Authors
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

#ifndef WISO_ERROR_HPP_
#define WISO_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wiso {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A point was handed to a space (or an operation) of a different kind.
class KindMismatchError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Two atoms of one measure share a base-space fiber where that is forbidden.
class FiberCollisionError : public DomainError {
 public:
  FiberCollisionError(const std::string& what, std::size_t first,
                      std::size_t second)
      : DomainError(what), first_(first), second_(second) {}

  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

/// Exact arithmetic was requested for a value that is not rational.
class InexactError : public Error {
 public:
  using Error::Error;
};

/// An iterative method ran out of budget or lost feasibility.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Combinatorial enumeration would exceed its configured budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    if (line == 0) return what;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

}  // namespace wiso

#endif  // WISO_ERROR_HPP_
