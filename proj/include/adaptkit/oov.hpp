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

#ifndef ADAPTKIT_OOV_HPP_
#define ADAPTKIT_OOV_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "adaptkit/utf8.hpp"

namespace adaptkit {

// Character-level transliteration table. Code points without an entry pass
// through unchanged; callers can count such fallbacks via the warning counter
// on transliterate_oov.
struct TranslitTable {
  std::map<utf8::CodePoint, std::string> mapping;

  // Arabic-to-ASCII romanization used by the stock tooling.
  static TranslitTable romanize_arabic();

  // TSV rows of <hex code point>\t<replacement string>.
  static TranslitTable load(std::istream& in);

  std::string transliterate(const std::string& word, std::size_t* unmapped) const;
};

// Tokens in `lines` that are absent from `vocab`, keyed by surface form with
// occurrence counts, in sorted order.
std::map<std::string, std::uint64_t> find_oov(
    const std::vector<std::vector<std::string>>& lines,
    const std::unordered_set<std::string>& vocab);

// Removes out-of-vocabulary tokens from a line.
std::vector<std::string> drop_oov(const std::vector<std::string>& tokens,
                                  const std::unordered_set<std::string>& vocab);

// Replaces out-of-vocabulary tokens by their transliteration. `unmapped`
// (optional) accumulates the number of code points that had no table entry.
std::vector<std::string> transliterate_oov(
    const std::vector<std::string>& tokens,
    const std::unordered_set<std::string>& vocab, const TranslitTable& table,
    std::size_t* unmapped);

}  // namespace adaptkit

#endif  // ADAPTKIT_OOV_HPP_
