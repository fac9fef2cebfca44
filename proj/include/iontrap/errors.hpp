// Copyright 2026 The iontrap Authors
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

#include <stdexcept>
#include <string>

namespace iontrap {

// Malformed text input. Line and column are 1-based; 0 means unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(format(what, line, column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    if (line <= 0) return what;
    return "line " + std::to_string(line) + ", column " +
           std::to_string(column) + ": " + what;
  }

  int line_;
  int column_;
};

// A physical precondition that cannot be met, e.g. an unstable trap or a
// Lamb-Dicke parameter incompatible with the requested scheme.
class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure to read or write a file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace iontrap
