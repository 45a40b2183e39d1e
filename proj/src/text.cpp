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

#include "adaptkit/text.hpp"

#include <cctype>
#include <cstdio>

#include "adaptkit/errors.hpp"
#include "adaptkit/util.hpp"

namespace adaptkit {

namespace {

void check_idempotent(const NormalizationRules& rules) {
  for (const auto& [cp, repl] : rules.substitutions) {
    for (utf8::CodePoint out : utf8::decode(repl)) {
      if (rules.substitutions.count(out) || rules.strip.count(out)) {
        throw ConfigError("normalization rules not idempotent: replacement of U+" +
                          std::to_string(cp) + " has its own rule");
      }
    }
    if (rules.strip.count(cp)) {
      throw ConfigError("code point U+" + std::to_string(cp) +
                        " both substituted and stripped");
    }
  }
}

}  // namespace

NormalizationRules NormalizationRules::arabic_default() {
  NormalizationRules r;
  auto sub = [&r](utf8::CodePoint from, utf8::CodePoint to) {
    std::string s;
    utf8::append(s, to);
    r.substitutions.emplace(from, s);
  };
  // Alef variants -> bare alef.
  sub(0x0623, 0x0627);  // alef with hamza above
  sub(0x0625, 0x0627);  // alef with hamza below
  sub(0x0622, 0x0627);  // alef with madda
  sub(0x0671, 0x0627);  // alef wasla
  sub(0x0649, 0x064A);  // alef maksura -> yaa
  sub(0x0629, 0x0647);  // taa marbuta -> haa
  // Arabic-Indic digits -> ASCII.
  for (utf8::CodePoint d = 0; d < 10; ++d) sub(0x0660 + d, '0' + d);
  // Tatweel and the eight diacritics fathatan..sukun.
  r.strip.insert(0x0640);
  for (utf8::CodePoint cp = 0x064B; cp <= 0x0652; ++cp) r.strip.insert(cp);
  check_idempotent(r);
  return r;
}

NormalizationRules NormalizationRules::load(const std::string& path) {
  NormalizationRules r;
  std::size_t lineno = 0;
  for (const std::string& line : read_lines(path)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("rules file: missing tab", lineno);
    utf8::CodePoint cp;
    try {
      cp = static_cast<utf8::CodePoint>(std::stoul(line.substr(0, tab), nullptr, 16));
    } catch (const std::exception&) {
      throw ParseError("rules file: bad hex code point", lineno);
    }
    std::string repl = line.substr(tab + 1);
    if (repl == "DELETE") {
      r.strip.insert(cp);
    } else {
      r.substitutions.emplace(cp, repl);
    }
  }
  check_idempotent(r);
  return r;
}

std::string normalize(std::string_view text, const NormalizationRules& rules) {
  std::string out;
  out.reserve(text.size());
  for (utf8::CodePoint cp : utf8::decode(text)) {
    if (rules.strip.count(cp)) continue;
    auto it = rules.substitutions.find(cp);
    if (it != rules.substitutions.end()) {
      out += it->second;
    } else {
      utf8::append(out, cp);
    }
  }
  return out;
}

namespace {

bool is_punct_cp(utf8::CodePoint cp) {
  if (cp < 0x80) {
    return std::ispunct(static_cast<int>(cp)) != 0;
  }
  switch (cp) {
    case 0x060C:  // arabic comma
    case 0x061B:  // arabic semicolon
    case 0x061F:  // arabic question mark
    case 0x066A:  // arabic percent
    case 0x00AB:  // «
    case 0x00BB:  // »
    case 0x201C:
    case 0x201D:
    case 0x2018:
    case 0x2019:
    case 0x2013:
    case 0x2014:
    case 0x2026:
    case 0x00A1:
    case 0x00BF:
      return true;
    default:
      return false;
  }
}

bool is_alnum_cp(utf8::CodePoint cp) {
  if (cp < 0x80) return std::isalnum(static_cast<int>(cp)) != 0;
  return !is_punct_cp(cp);
}

void emit(std::vector<std::string>& out, const std::vector<utf8::CodePoint>& cps,
          std::size_t begin, std::size_t end) {
  if (begin >= end) return;
  std::string tok;
  for (std::size_t i = begin; i < end; ++i) utf8::append(tok, cps[i]);
  out.push_back(std::move(tok));
}

// Splits one whitespace-delimited chunk into tokens.
void split_chunk(std::vector<std::string>& out, const std::vector<utf8::CodePoint>& cps) {
  std::size_t i = 0;
  std::size_t start = 0;
  while (i < cps.size()) {
    utf8::CodePoint cp = cps[i];
    if (!is_punct_cp(cp)) {
      ++i;
      continue;
    }
    bool keep = (cp == '.' || cp == '\'') && i > 0 && i + 1 < cps.size() &&
                is_alnum_cp(cps[i - 1]) && is_alnum_cp(cps[i + 1]);
    if (keep) {
      ++i;
      continue;
    }
    emit(out, cps, start, i);
    emit(out, cps, i, i + 1);
    ++i;
    start = i;
  }
  emit(out, cps, start, cps.size());
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::vector<utf8::CodePoint> chunk;
  auto flush = [&] {
    if (!chunk.empty()) {
      split_chunk(out, chunk);
      chunk.clear();
    }
  };
  for (utf8::CodePoint cp : utf8::decode(text)) {
    if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == 0x00A0) {
      flush();
    } else {
      chunk.push_back(cp);
    }
  }
  flush();
  return out;
}

bool keeps_under_length(const SentencePair& pair, std::size_t max_len) {
  return pair.source.size() <= max_len && pair.target.size() <= max_len;
}

std::vector<SentencePair> length_filter(const std::vector<SentencePair>& corpus,
                                        std::size_t max_len) {
  std::vector<SentencePair> out;
  for (const SentencePair& p : corpus) {
    if (keeps_under_length(p, max_len)) out.push_back(p);
  }
  return out;
}

std::vector<AlignLink> parse_pharaoh(const std::string& line, std::size_t lineno) {
  std::vector<AlignLink> links;
  for (const std::string& piece : split_ws(line)) {
    std::size_t dash = piece.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 >= piece.size()) {
      throw ParseError("bad alignment link '" + piece + "'", lineno);
    }
    try {
      links.emplace_back(static_cast<uint32_t>(std::stoul(piece.substr(0, dash))),
                         static_cast<uint32_t>(std::stoul(piece.substr(dash + 1))));
    } catch (const std::exception&) {
      throw ParseError("bad alignment link '" + piece + "'", lineno);
    }
  }
  return links;
}

std::string format_pharaoh(const std::vector<AlignLink>& links) {
  std::string out;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(links[i].first);
    out += '-';
    out += std::to_string(links[i].second);
  }
  return out;
}

std::vector<SentencePair> load_parallel_corpus(const std::string& src_path,
                                               const std::string& tgt_path,
                                               const std::string& align_path) {
  std::vector<std::string> src = read_lines(src_path);
  std::vector<std::string> tgt = read_lines(tgt_path);
  if (src.size() != tgt.size()) {
    throw DataError("parallel corpus line counts differ: " + src_path + " has " +
                    std::to_string(src.size()) + ", " + tgt_path + " has " +
                    std::to_string(tgt.size()));
  }
  std::vector<std::string> align;
  if (!align_path.empty()) {
    align = read_lines(align_path);
    if (align.size() != src.size()) {
      throw DataError("alignment line count differs from corpus: " + align_path);
    }
  }
  std::vector<SentencePair> out;
  out.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    SentencePair p;
    p.source = split_ws(src[i]);
    p.target = split_ws(tgt[i]);
    if (!align.empty()) {
      auto links = parse_pharaoh(align[i], i + 1);
      for (const AlignLink& l : links) {
        if (l.first >= p.source.size() || l.second >= p.target.size()) {
          throw ParseError("alignment link out of bounds", i + 1);
        }
      }
      p.alignment = std::move(links);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace adaptkit
