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

#ifndef ADAPTKIT_BPE_HPP_
#define ADAPTKIT_BPE_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace adaptkit {

// Ordered symbol-pair merges; rank = position. Words are split into code
// points with the end-of-word marker fused onto the last one, so "low"
// starts as l o w</w>.
struct BpeModel {
  std::vector<std::pair<std::string, std::string>> merges;

  void save(std::ostream& out) const;       // "#version: 0.2" header
  static BpeModel load(std::istream& in);
};

// Greedy merge learning over word-type frequencies: repeatedly merge the
// most frequent adjacent pair (ties broken lexicographically on the pair)
// until num_merges is reached or the best pair occurs fewer than 2 times.
BpeModel bpe_learn(const std::map<std::string, uint64_t>& word_freqs,
                   std::size_t num_merges);
BpeModel bpe_learn_lines(const std::vector<std::string>& lines,
                         std::size_t num_merges);

// Applies merges in rank order; caches segmentations per word type.
class BpeApplier {
 public:
  explicit BpeApplier(BpeModel model);

  std::vector<std::string> apply_word(const std::string& word);
  std::vector<std::string> apply_line(const std::vector<std::string>& tokens);

 private:
  BpeModel model_;
  std::map<std::pair<std::string, std::string>, std::size_t> rank_;
  std::unordered_map<std::string, std::vector<std::string>> cache_;
};

// Rejoins "@@ "-continued units. Dangling continuation markers at line end
// are stripped and counted through *warnings.
std::vector<std::string> bpe_undo_line(const std::vector<std::string>& tokens,
                                       uint64_t* warnings = nullptr);

}  // namespace adaptkit

#endif  // ADAPTKIT_BPE_HPP_
