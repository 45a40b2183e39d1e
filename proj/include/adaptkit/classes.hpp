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

#ifndef ADAPTKIT_CLASSES_HPP_
#define ADAPTKIT_CLASSES_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace adaptkit {

struct ClassMap {
  std::unordered_map<std::string, int> word_to_class;
  int k = 0;

  // Unknown words map to the reserved class id k.
  int class_of(const std::string& word) const;

  void save(std::ostream& out) const;  // TSV word\tclass, sorted by word
  static ClassMap load(std::istream& in);
};

struct ClusterTrace {
  std::vector<double> objective;  // after init, then after each sweep
  int sweeps = 0;
  int moves = 0;
};

struct ClusterOptions {
  int k = 50;
  int max_sweeps = 30;
};

// Exchange word clustering maximizing the class-bigram objective
// F = Σ_{c,c'} N(c,c')·ln N(c,c') − 2·Σ_c N(c)·ln N(c)   (0·ln 0 = 0)
// over within-line bigrams. Deterministic: the K−1 most frequent words
// start in singleton classes, the rest share the last class; words are
// visited by descending frequency (ties lexicographic) and a move is made
// only when it improves F by more than 1e-12.
ClassMap cluster_exchange(const std::vector<std::vector<std::string>>& lines,
                          const ClusterOptions& options,
                          ClusterTrace* trace = nullptr);

// Exhaustively computes F for a fixed assignment (oracle and diagnostics).
double class_bigram_objective(
    const std::vector<std::vector<std::string>>& lines, const ClassMap& map);

std::vector<std::string> apply_classes(const ClassMap& map,
                                       const std::vector<std::string>& tokens);

}  // namespace adaptkit

#endif  // ADAPTKIT_CLASSES_HPP_
