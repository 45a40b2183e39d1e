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

#ifndef ADAPTKIT_EVALKIT_HPP_
#define ADAPTKIT_EVALKIT_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace adaptkit {

struct BleuReport {
  double bleu = 0.0;        // corpus score scaled to [0, 100]
  double precisions[4] = {0.0, 0.0, 0.0, 0.0};
  double brevity_penalty = 0.0;
  std::uint64_t hyp_len = 0;
  std::uint64_t ref_len = 0;
};

// Corpus-level BLEU with a single reference: geometric mean of clipped 1..4
// gram precisions times the brevity penalty, no smoothing, case sensitive.
// When `normalize_first` is set both sides are run through the default
// normalization rules before whitespace tokenization.
BleuReport bleu(const std::vector<std::string>& hypotheses,
                const std::vector<std::string>& references,
                bool normalize_first = false);

// One experiment per row, one test set per column, cells formatted to one
// decimal, with a trailing Avg column (arithmetic mean of the row).
std::string progress_table(
    const std::vector<std::string>& column_labels,
    const std::vector<std::pair<std::string, std::vector<double>>>& rows);

// One-line summary in the scorer's output format:
// BLEU = <x.y>, p1/p2/p3/p4 = a/b/c/d, BP = e, ratio = f
std::string format_bleu_summary(const BleuReport& report);

}  // namespace adaptkit

#endif  // ADAPTKIT_EVALKIT_HPP_
