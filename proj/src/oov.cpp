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

#include "adaptkit/oov.hpp"

#include <istream>

#include "adaptkit/errors.hpp"
#include "adaptkit/util.hpp"

namespace adaptkit {

TranslitTable TranslitTable::romanize_arabic() {
  TranslitTable t;
  t.mapping = {
      {0x0621, "'"}, {0x0627, "A"}, {0x0628, "b"}, {0x0629, "p"},
      {0x062A, "t"}, {0x062B, "v"}, {0x062C, "j"}, {0x062D, "H"},
      {0x062E, "x"}, {0x062F, "d"}, {0x0630, "*"}, {0x0631, "r"},
      {0x0632, "z"}, {0x0633, "s"}, {0x0634, "$"}, {0x0635, "S"},
      {0x0636, "D"}, {0x0637, "T"}, {0x0638, "Z"}, {0x0639, "E"},
      {0x063A, "g"}, {0x0641, "f"}, {0x0642, "q"}, {0x0643, "k"},
      {0x0644, "l"}, {0x0645, "m"}, {0x0646, "n"}, {0x0647, "h"},
      {0x0648, "w"}, {0x0649, "Y"}, {0x064A, "y"},
  };
  return t;
}

TranslitTable TranslitTable::load(std::istream& in) {
  TranslitTable t;
  std::size_t lineno = 0;
  for_each_line(in, [&](const std::string& line) {
    ++lineno;
    if (line.empty() || line[0] == '#') return;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw ParseError("transliteration row must be <hex>\\t<replacement>", lineno);
    utf8::CodePoint cp;
    try {
      cp = static_cast<utf8::CodePoint>(std::stoul(line.substr(0, tab), nullptr, 16));
    } catch (const std::logic_error&) {
      throw ParseError("malformed code point", lineno);
    }
    t.mapping[cp] = line.substr(tab + 1);
  });
  return t;
}

std::string TranslitTable::transliterate(const std::string& word,
                                         std::size_t* unmapped) const {
  std::string out;
  for (utf8::CodePoint cp : utf8::decode(word)) {
    auto it = mapping.find(cp);
    if (it != mapping.end()) {
      out += it->second;
    } else {
      utf8::append(out, cp);
      if (unmapped) ++*unmapped;
    }
  }
  return out;
}

std::map<std::string, std::uint64_t> find_oov(
    const std::vector<std::vector<std::string>>& lines,
    const std::unordered_set<std::string>& vocab) {
  std::map<std::string, std::uint64_t> oov;
  for (const auto& line : lines)
    for (const auto& tok : line)
      if (!vocab.count(tok)) ++oov[tok];
  return oov;
}

std::vector<std::string> drop_oov(const std::vector<std::string>& tokens,
                                  const std::unordered_set<std::string>& vocab) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens)
    if (vocab.count(tok)) out.push_back(tok);
  return out;
}

std::vector<std::string> transliterate_oov(
    const std::vector<std::string>& tokens,
    const std::unordered_set<std::string>& vocab, const TranslitTable& table,
    std::size_t* unmapped) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (vocab.count(tok))
      out.push_back(tok);
    else
      out.push_back(table.transliterate(tok, unmapped));
  }
  return out;
}

}  // namespace adaptkit
