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

#include "adaptkit/bpe.hpp"

#include <istream>
#include <ostream>

#include "adaptkit/errors.hpp"
#include "adaptkit/utf8.hpp"
#include "adaptkit/util.hpp"

namespace adaptkit {

namespace {

constexpr const char* kEow = "</w>";

std::vector<std::string> split_symbols(const std::string& word) {
  auto cps = utf8::decode(word);
  std::vector<std::string> symbols;
  symbols.reserve(cps.size());
  for (auto cp : cps) {
    std::string s;
    utf8::append(s, cp);
    symbols.push_back(std::move(s));
  }
  symbols.back() += kEow;
  return symbols;
}

// Merges every non-overlapping occurrence of (left,right), leftmost first.
void merge_in_place(std::vector<std::string>* symbols, const std::string& left,
                    const std::string& right) {
  std::vector<std::string> out;
  out.reserve(symbols->size());
  std::size_t i = 0;
  while (i < symbols->size()) {
    if (i + 1 < symbols->size() && (*symbols)[i] == left &&
        (*symbols)[i + 1] == right) {
      out.push_back(left + right);
      i += 2;
    } else {
      out.push_back((*symbols)[i]);
      ++i;
    }
  }
  *symbols = std::move(out);
}

}  // namespace

BpeModel bpe_learn(const std::map<std::string, uint64_t>& word_freqs,
                   std::size_t num_merges) {
  if (word_freqs.empty()) throw DataError("cannot learn merges from an empty corpus");

  std::vector<std::pair<std::vector<std::string>, uint64_t>> words;
  words.reserve(word_freqs.size());
  for (const auto& [word, freq] : word_freqs)
    words.emplace_back(split_symbols(word), freq);

  using Pair = std::pair<std::string, std::string>;
  std::map<Pair, int64_t> counts;
  auto tally = [&](const std::vector<std::string>& sym, int64_t f) {
    for (std::size_t i = 0; i + 1 < sym.size(); ++i) {
      auto it = counts.find({sym[i], sym[i + 1]});
      if (it == counts.end()) {
        counts.emplace(Pair{sym[i], sym[i + 1]}, f);
      } else {
        it->second += f;
        if (it->second == 0) counts.erase(it);
      }
    }
  };
  for (const auto& [sym, freq] : words) tally(sym, static_cast<int64_t>(freq));

  BpeModel model;
  model.merges.reserve(num_merges);
  while (model.merges.size() < num_merges) {
    // counts is ordered by pair, so the first maximum is the
    // lexicographically smallest among ties.
    const Pair* best = nullptr;
    int64_t best_count = 0;
    for (const auto& [pair, count] : counts) {
      if (count > best_count) {
        best = &pair;
        best_count = count;
      }
    }
    if (!best || best_count < 2) break;
    Pair merge = *best;
    model.merges.push_back(merge);

    for (auto& [sym, freq] : words) {
      bool contains = false;
      for (std::size_t i = 0; i + 1 < sym.size(); ++i)
        if (sym[i] == merge.first && sym[i + 1] == merge.second) {
          contains = true;
          break;
        }
      if (!contains) continue;
      tally(sym, -static_cast<int64_t>(freq));
      merge_in_place(&sym, merge.first, merge.second);
      tally(sym, static_cast<int64_t>(freq));
    }
  }
  return model;
}

BpeModel bpe_learn_lines(const std::vector<std::string>& lines,
                         std::size_t num_merges) {
  std::map<std::string, uint64_t> freqs;
  for (const auto& line : lines)
    for (const auto& tok : split_ws(line)) ++freqs[tok];
  return bpe_learn(freqs, num_merges);
}

void BpeModel::save(std::ostream& out) const {
  out << "#version: 0.2\n";
  for (const auto& [left, right] : merges) out << left << ' ' << right << '\n';
}

BpeModel BpeModel::load(std::istream& in) {
  BpeModel model;
  std::map<std::pair<std::string, std::string>, bool> seen;
  std::size_t lineno = 0;
  bool first = true;
  for_each_line(in, [&](const std::string& line) {
    ++lineno;
    if (first && starts_with(line, "#version")) {
      first = false;
      return;
    }
    first = false;
    if (line.empty()) return;
    auto space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 == line.size() ||
        line.find(' ', space + 1) != std::string::npos)
      throw ParseError("merge line must be two space-separated symbols", lineno);
    std::pair<std::string, std::string> merge = {line.substr(0, space),
                                                 line.substr(space + 1)};
    if (!seen.emplace(merge, true).second)
      throw ParseError("duplicate merge pair", lineno);
    model.merges.push_back(std::move(merge));
  });
  return model;
}

BpeApplier::BpeApplier(BpeModel model) : model_(std::move(model)) {
  for (std::size_t r = 0; r < model_.merges.size(); ++r)
    rank_.emplace(model_.merges[r], r);
}

std::vector<std::string> BpeApplier::apply_word(const std::string& word) {
  auto cached = cache_.find(word);
  if (cached != cache_.end()) return cached->second;

  auto symbols = split_symbols(word);
  while (symbols.size() > 1) {
    std::size_t best_rank = model_.merges.size();
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      auto it = rank_.find({symbols[i], symbols[i + 1]});
      if (it != rank_.end() && it->second < best_rank) best_rank = it->second;
    }
    if (best_rank == model_.merges.size()) break;
    const auto& merge = model_.merges[best_rank];
    merge_in_place(&symbols, merge.first, merge.second);
  }

  std::vector<std::string> units;
  units.reserve(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i + 1 == symbols.size()) {
      units.push_back(symbols[i].substr(0, symbols[i].size() - 4));
    } else {
      units.push_back(symbols[i] + "@@");
    }
  }
  cache_.emplace(word, units);
  return units;
}

std::vector<std::string> BpeApplier::apply_line(
    const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  for (const auto& tok : tokens) {
    auto units = apply_word(tok);
    out.insert(out.end(), units.begin(), units.end());
  }
  return out;
}

std::vector<std::string> bpe_undo_line(const std::vector<std::string>& tokens,
                                       uint64_t* warnings) {
  std::vector<std::string> out;
  std::string pending;
  for (const auto& tok : tokens) {
    if (ends_with(tok, "@@")) {
      pending += tok.substr(0, tok.size() - 2);
    } else {
      out.push_back(pending + tok);
      pending.clear();
    }
  }
  if (!pending.empty()) {
    out.push_back(pending);
    if (warnings) ++*warnings;
  }
  return out;
}

}  // namespace adaptkit
