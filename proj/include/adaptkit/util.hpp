// Copyright 2026 The adaptkit Authors
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

#ifndef ADAPTKIT_UTIL_HPP_
#define ADAPTKIT_UTIL_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace adaptkit {

// log10 value formatted with 12 significant digits. Enough that a parse and
// re-format round-trips byte for byte, and that model-vs-file probability
// comparisons agree to well under 1e-9 relative.
std::string format_logprob(double v);

// Fixed-point with `decimals` places, round-half-up (report convention).
std::string format_fixed(double v, int decimals);

std::vector<std::string> split_ws(std::string_view line);

std::string join(const std::vector<std::string>& tokens, std::string_view sep);

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

// Calls fn for every line of the stream ('\n' terminated, terminator and any
// trailing '\r' stripped).
void for_each_line(std::istream& in,
                   const std::function<void(const std::string&)>& fn);

// Whole file as a vector of lines; throws DataError if unreadable.
std::vector<std::string> read_lines(const std::string& path);

// Writes to path + ".tmp" then renames, so failures cannot leave a truncated
// artifact behind.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace adaptkit

#endif  // ADAPTKIT_UTIL_HPP_
