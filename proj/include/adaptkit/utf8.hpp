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

#ifndef ADAPTKIT_UTF8_HPP_
#define ADAPTKIT_UTF8_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace adaptkit {
namespace utf8 {

using CodePoint = uint32_t;

// Decodes the whole string; throws DataError naming the byte offset of the
// first malformed sequence.
std::vector<CodePoint> decode(std::string_view text);

void append(std::string& out, CodePoint cp);

std::string encode(const std::vector<CodePoint>& cps);

}  // namespace utf8
}  // namespace adaptkit

#endif  // ADAPTKIT_UTF8_HPP_
