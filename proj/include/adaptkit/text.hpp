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

#ifndef ADAPTKIT_TEXT_HPP_
#define ADAPTKIT_TEXT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "adaptkit/utf8.hpp"

namespace adaptkit {

// One (source, target) alignment link, zero-based.
using AlignLink = std::pair<uint32_t, uint32_t>;

struct SentencePair {
  std::vector<std::string> source;
  std::vector<std::string> target;
  std::optional<std::vector<AlignLink>> alignment;
};

// Character substitutions plus a strip set. Applying twice must equal
// applying once, which holds as long as no substitution output contains a
// code point that itself has a rule; load_rules verifies this.
struct NormalizationRules {
  std::unordered_map<utf8::CodePoint, std::string> substitutions;
  std::unordered_set<utf8::CodePoint> strip;

  // Alef/yaa/taa-marbuta folding, diacritic and tatweel stripping,
  // Arabic-Indic digit mapping.
  static NormalizationRules arabic_default();

  // TSV of `<hex codepoint>\t<replacement-or-DELETE>`.
  static NormalizationRules load(const std::string& path);
};

std::string normalize(std::string_view text, const NormalizationRules& rules);

// Whitespace split, then leading/trailing punctuation detached and internal
// punctuation isolated, keeping '.' and '\'' when both neighbours are
// alphanumeric ("3.75" and "don't" stay whole). Re-tokenizing the space-join
// of the output reproduces the output.
std::vector<std::string> tokenize(std::string_view text);

bool keeps_under_length(const SentencePair& pair, std::size_t max_len);

std::vector<SentencePair> length_filter(const std::vector<SentencePair>& corpus,
                                        std::size_t max_len);

// Pharaoh "i-j" alignment line; bounds are validated against the pair when
// attached via load_parallel_corpus.
std::vector<AlignLink> parse_pharaoh(const std::string& line, std::size_t lineno);
std::string format_pharaoh(const std::vector<AlignLink>& links);

// Line-parallel files; counts must agree. align_path may be empty.
std::vector<SentencePair> load_parallel_corpus(const std::string& src_path,
                                               const std::string& tgt_path,
                                               const std::string& align_path = "");

}  // namespace adaptkit

#endif  // ADAPTKIT_TEXT_HPP_
