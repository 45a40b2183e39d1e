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

#ifndef ADAPTKIT_SELECTION_HPP_
#define ADAPTKIT_SELECTION_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "adaptkit/ngram.hpp"
#include "adaptkit/text.hpp"

namespace adaptkit {

struct SelectionScore {
  uint64_t index = 0;       // position in the scored corpus
  double score = 0.0;       // total cross-entropy difference; lower = more in-domain
  double src_score = 0.0;
  double tgt_score = 0.0;   // 0 when scoring monolingually
};

// Per-token cross-entropy of the sentence under the model, in log10 units,
// with the sentence-end event included (N = tokens + 1).
double cross_entropy(const std::vector<std::string>& tokens,
                     const NgramModel& model);

// Moore-Lewis score H_in(s) - H_out(s); lower means more in-domain-like.
double ml_score(const std::vector<std::string>& tokens,
                const NgramModel& in_lm, const NgramModel& out_lm);

// Bilingual variant: source-side difference plus target-side difference.
double bilingual_score(const SentencePair& pair, const NgramModel& in_src,
                       const NgramModel& out_src, const NgramModel& in_tgt,
                       const NgramModel& out_tgt);

// Indices of the floor(N * fraction) lowest scores, ties broken by corpus
// order, result sorted by corpus order.
std::vector<uint64_t> select_fraction(const std::vector<SelectionScore>& scores,
                                      double fraction);

// Number of items floor(N * fraction) selects, guarding against the binary
// representation of the fraction landing just below an exact product.
uint64_t selection_count(uint64_t n, double fraction);

// Scores TSV: index\tscore\tsrc_score\ttgt_score.
void write_scores(std::ostream& out, const std::vector<SelectionScore>& scores);
std::vector<SelectionScore> read_scores(std::istream& in);

}  // namespace adaptkit

#endif  // ADAPTKIT_SELECTION_HPP_
