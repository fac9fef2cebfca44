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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iontrap::io {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// Shortest decimal that round-trips through strtod.
std::string format_double(double v);

// A whitespace-separated token and its 1-based column.
struct Token {
  std::string text;
  int column;
};

// Splits on whitespace; stops at '#'.
std::vector<Token> tokenize(std::string_view line);

// Full-token numeric parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::vector<std::string> split_lines(const std::string& text);

}  // namespace iontrap::io
