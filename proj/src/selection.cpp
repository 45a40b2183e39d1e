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

#include "adaptkit/selection.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "adaptkit/errors.hpp"
#include "adaptkit/util.hpp"

namespace adaptkit {

double cross_entropy(const std::vector<std::string>& tokens,
                     const NgramModel& model) {
  std::vector<double> lps;
  model.line_logprobs(tokens, &lps);
  double sum = 0.0;
  for (double lp : lps) sum += lp;
  return -sum / static_cast<double>(lps.size());
}

double ml_score(const std::vector<std::string>& tokens,
                const NgramModel& in_lm, const NgramModel& out_lm) {
  return cross_entropy(tokens, in_lm) - cross_entropy(tokens, out_lm);
}

double bilingual_score(const SentencePair& pair, const NgramModel& in_src,
                       const NgramModel& out_src, const NgramModel& in_tgt,
                       const NgramModel& out_tgt) {
  return ml_score(pair.source, in_src, out_src) +
         ml_score(pair.target, in_tgt, out_tgt);
}

uint64_t selection_count(uint64_t n, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw ConfigError("selection fraction must be in (0, 1]");
  long double product = static_cast<long double>(n) * fraction;
  product += product * 1e-12L;
  return static_cast<uint64_t>(std::floor(product));
}

std::vector<uint64_t> select_fraction(const std::vector<SelectionScore>& scores,
                                      double fraction) {
  uint64_t take = selection_count(scores.size(), fraction);
  std::vector<const SelectionScore*> order;
  order.reserve(scores.size());
  for (const auto& s : scores) order.push_back(&s);
  std::sort(order.begin(), order.end(),
            [](const SelectionScore* a, const SelectionScore* b) {
              if (a->score != b->score) return a->score < b->score;
              return a->index < b->index;
            });
  std::vector<uint64_t> picked;
  picked.reserve(take);
  for (uint64_t i = 0; i < take; ++i) picked.push_back(order[i]->index);
  std::sort(picked.begin(), picked.end());
  return picked;
}

void write_scores(std::ostream& out, const std::vector<SelectionScore>& scores) {
  for (const auto& s : scores)
    out << s.index << '\t' << format_logprob(s.score) << '\t'
        << format_logprob(s.src_score) << '\t' << format_logprob(s.tgt_score)
        << '\n';
}

std::vector<SelectionScore> read_scores(std::istream& in) {
  std::vector<SelectionScore> scores;
  std::size_t lineno = 0;
  for_each_line(in, [&](const std::string& line) {
    ++lineno;
    if (line.empty()) return;
    auto fields = split_ws(line);
    if (fields.size() != 4)
      throw ParseError("scores line needs 4 tab-separated fields", lineno);
    SelectionScore s;
    try {
      s.index = std::stoull(fields[0]);
      s.score = std::stod(fields[1]);
      s.src_score = std::stod(fields[2]);
      s.tgt_score = std::stod(fields[3]);
    } catch (const std::logic_error&) {
      throw ParseError("malformed scores line", lineno);
    }
    scores.push_back(s);
  });
  return scores;
}

}  // namespace adaptkit
