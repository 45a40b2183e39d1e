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

#ifndef ADAPTKIT_NGRAM_HPP_
#define ADAPTKIT_NGRAM_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "adaptkit/vocab.hpp"

namespace adaptkit {

// Raw n-gram counts up to a fixed order. Each sentence is padded with a
// single <s> and </s>; for every predicted position (each token and </s>,
// never <s> itself) one k-gram is counted for each k with enough history.
// Counts stay raw so shards can be merged additively; smoothing statistics
// are derived at estimation time.
class NgramCounts {
 public:
  explicit NgramCounts(int order);

  void add_sentence(const std::vector<std::string>& tokens);
  void merge(const NgramCounts& other);

  int order() const { return order_; }
  const Vocabulary& vocab() const { return vocab_; }

  // Number of distinct k-grams seen.
  std::size_t distinct(int k) const { return maps_[k - 1].size(); }
  // Count of one specific k-gram (0 if unseen). Mostly for tests.
  uint64_t count(const std::vector<std::string>& gram) const;
  // Number of distinct k-grams with count exactly 1..4 (raw counts).
  std::array<uint64_t, 4> count_of_counts(int k) const;

 private:
  friend class NgramModel;

  int order_;
  Vocabulary vocab_;
  // maps_[k-1]: packed (k * 4 byte) word-id key -> raw count.
  std::vector<std::unordered_map<std::string, uint64_t>> maps_;
};

struct PplResult {
  double ppl = 0.0;          // 10^(-logprob / tokens)
  double logprob = 0.0;      // total log10 probability
  uint64_t tokens = 0;       // predicted events: words + one </s> per line
  uint64_t oov = 0;          // words mapped to <unk>
};

// Backoff n-gram model with modified Kneser-Ney estimation and ARPA
// import/export. Probabilities are log10 throughout; -99 marks entries
// kept only for structural reasons (<s>, a massless <unk>).
class NgramModel {
 public:
  // Estimates an interpolated modified Kneser-Ney model. Three discounts
  // per order are derived from the count-of-counts; if any of n1..n4 is
  // zero or a discount comes out negative, that order falls back to a
  // single absolute discount of 0.75.
  static NgramModel estimate(const NgramCounts& counts);

  static NgramModel from_arpa(std::istream& in);
  void to_arpa(std::ostream& out) const;

  // Builds a model from explicit entries (tokens, log10 p, log10 bow).
  // Used by the static mixture merge; entries must already satisfy the
  // backoff-structure requirement (every context stored one level down).
  struct RawEntry {
    std::vector<std::string> tokens;
    double logp;
    double logbow;
  };
  static NgramModel from_entries(
      int order, const std::vector<std::vector<RawEntry>>& per_level);

  // Calls fn(tokens, logp, logbow) for every stored k-gram, sorted by the
  // joined token string.
  void visit(int k,
             const std::function<void(const std::vector<std::string>&, double,
                                      double)>& fn) const;

  int order() const { return order_; }
  const Vocabulary& vocab() const { return vocab_; }
  std::size_t size(int k) const { return levels_[k - 1].size(); }

  // Longest-suffix backoff query. Unknown words must already be mapped to
  // <unk> by the caller (the string overload does this).
  double logprob_ids(const std::vector<WordId>& context, WordId word) const;
  double logprob(const std::vector<std::string>& context,
                 const std::string& word) const;

  // Appends the log10 probability of every predicted event of the line
  // (each word plus the closing </s>, with <s> as initial context).
  void line_logprobs(const std::vector<std::string>& tokens,
                     std::vector<double>* out, uint64_t* oov = nullptr) const;

  PplResult perplexity(const std::vector<std::vector<std::string>>& lines) const;

  // Stored log10 probability / backoff of an exact n-gram, if present.
  bool stored(const std::vector<std::string>& gram, double* logp,
              double* logbow = nullptr) const;

 private:
  struct Entry {
    double logp = 0.0;
    double logbow = 0.0;  // log10 backoff weight; 0 when unused
  };

  explicit NgramModel(int order);

  int order_;
  Vocabulary vocab_;
  std::vector<std::unordered_map<std::string, Entry>> levels_;  // [k-1]
};

}  // namespace adaptkit

#endif  // ADAPTKIT_NGRAM_HPP_
