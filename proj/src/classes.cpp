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

#include "adaptkit/classes.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "adaptkit/errors.hpp"
#include "adaptkit/util.hpp"

namespace adaptkit {

namespace {

constexpr double kMinGain = 1e-12;

double g(int64_t x) { return x > 0 ? static_cast<double>(x) * std::log(static_cast<double>(x)) : 0.0; }

struct Neighbor {
  int word;
  int64_t count;
};

}  // namespace

int ClassMap::class_of(const std::string& word) const {
  auto it = word_to_class.find(word);
  return it == word_to_class.end() ? k : it->second;
}

void ClassMap::save(std::ostream& out) const {
  std::map<std::string, int> sorted(word_to_class.begin(), word_to_class.end());
  for (const auto& [word, cls] : sorted) out << word << '\t' << cls << '\n';
}

ClassMap ClassMap::load(std::istream& in) {
  ClassMap map;
  std::size_t lineno = 0;
  for_each_line(in, [&](const std::string& line) {
    ++lineno;
    if (line.empty()) return;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw ParseError("class map line must be word\\tclass", lineno);
    int cls;
    try {
      cls = std::stoi(line.substr(tab + 1));
    } catch (const std::logic_error&) {
      throw ParseError("malformed class id", lineno);
    }
    if (cls < 0) throw ParseError("negative class id", lineno);
    if (!map.word_to_class.emplace(line.substr(0, tab), cls).second)
      throw ParseError("duplicate word in class map", lineno);
    map.k = std::max(map.k, cls + 1);
  });
  return map;
}

std::vector<std::string> apply_classes(const ClassMap& map,
                                       const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) out.push_back(std::to_string(map.class_of(tok)));
  return out;
}

double class_bigram_objective(
    const std::vector<std::vector<std::string>>& lines, const ClassMap& map) {
  const int k = map.k + 1;  // reserved unknown class included
  std::vector<int64_t> big(static_cast<std::size_t>(k) * k, 0);
  std::vector<int64_t> uni(k, 0);
  for (const auto& line : lines) {
    int prev = -1;
    for (const auto& tok : line) {
      int c = map.class_of(tok);
      ++uni[c];
      if (prev >= 0) ++big[static_cast<std::size_t>(prev) * k + c];
      prev = c;
    }
  }
  double f = 0.0;
  for (int64_t x : big) f += g(x);
  for (int64_t x : uni) f -= 2.0 * g(x);
  return f;
}

ClassMap cluster_exchange(const std::vector<std::vector<std::string>>& lines,
                          const ClusterOptions& options, ClusterTrace* trace) {
  const int k = options.k;
  if (k < 1) throw ConfigError("class count must be at least 1");

  std::unordered_map<std::string, int> word_id;
  std::vector<std::string> words;
  std::vector<int64_t> freq;
  auto id_of = [&](const std::string& w) {
    auto [it, added] = word_id.emplace(w, static_cast<int>(words.size()));
    if (added) {
      words.push_back(w);
      freq.push_back(0);
    }
    return it->second;
  };

  std::unordered_map<uint64_t, int64_t> bigram;
  for (const auto& line : lines) {
    int prev = -1;
    for (const auto& tok : line) {
      int cur = id_of(tok);
      ++freq[cur];
      if (prev >= 0)
        ++bigram[(static_cast<uint64_t>(prev) << 32) | static_cast<uint32_t>(cur)];
      prev = cur;
    }
  }
  const int v = static_cast<int>(words.size());
  if (v == 0) throw DataError("cannot cluster an empty corpus");
  if (k > v) throw ConfigError("more classes than distinct words");

  // Per-word neighbor profiles; the (w,w) bigram is kept separate so a move
  // does not double-count it.
  std::vector<std::vector<Neighbor>> right(v), left(v);
  std::vector<int64_t> self(v, 0);
  for (const auto& [key, count] : bigram) {
    int a = static_cast<int>(key >> 32);
    int b = static_cast<int>(key & 0xFFFFFFFF);
    if (a == b) {
      self[a] = count;
    } else {
      right[a].push_back({b, count});
      left[b].push_back({a, count});
    }
  }
  for (auto& vec : right)
    std::sort(vec.begin(), vec.end(),
              [](const Neighbor& x, const Neighbor& y) { return x.word < y.word; });
  for (auto& vec : left)
    std::sort(vec.begin(), vec.end(),
              [](const Neighbor& x, const Neighbor& y) { return x.word < y.word; });

  std::vector<int> order(v);
  for (int i = 0; i < v; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (freq[a] != freq[b]) return freq[a] > freq[b];
    return words[a] < words[b];
  });

  std::vector<int> cls(v, k - 1);
  for (int i = 0; i < k - 1; ++i) cls[order[i]] = i;
  std::vector<int64_t> class_size(k, 0);
  for (int w = 0; w < v; ++w) ++class_size[cls[w]];

  std::vector<int64_t> big(static_cast<std::size_t>(k) * k, 0);
  std::vector<int64_t> uni(k, 0);
  for (int w = 0; w < v; ++w) uni[cls[w]] += freq[w];
  for (const auto& [key, count] : bigram) {
    int a = cls[static_cast<int>(key >> 32)];
    int b = cls[static_cast<int>(key & 0xFFFFFFFF)];
    big[static_cast<std::size_t>(a) * k + b] += count;
  }

  auto objective = [&]() {
    double f = 0.0;
    for (int64_t x : big) f += g(x);
    for (int64_t x : uni) f -= 2.0 * g(x);
    return f;
  };

  if (trace) {
    trace->objective.clear();
    trace->objective.push_back(objective());
    trace->sweeps = 0;
    trace->moves = 0;
  }

  // Class profiles of the current word's neighbors, rebuilt per word.
  std::vector<int64_t> lw(k, 0), rw(k, 0);
  std::vector<int> touched_l, touched_r;
  std::vector<std::pair<int, int64_t>> delta;  // (cell, change)

  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    int moves = 0;
    for (int w : order) {
      const int a = cls[w];
      if (class_size[a] <= 1) continue;  // moving would empty the class

      touched_l.clear();
      touched_r.clear();
      for (const auto& nb : left[w]) {
        int c = cls[nb.word];
        if (lw[c] == 0) touched_l.push_back(c);
        lw[c] += nb.count;
      }
      for (const auto& nb : right[w]) {
        int c = cls[nb.word];
        if (rw[c] == 0) touched_r.push_back(c);
        rw[c] += nb.count;
      }
      std::sort(touched_l.begin(), touched_l.end());
      std::sort(touched_r.begin(), touched_r.end());

      double best_gain = kMinGain;
      int best_b = -1;
      for (int b = 0; b < k; ++b) {
        if (b == a) continue;
        delta.clear();
        for (int c : touched_l) {
          delta.emplace_back(c * k + a, -lw[c]);
          delta.emplace_back(c * k + b, lw[c]);
        }
        for (int c : touched_r) {
          delta.emplace_back(a * k + c, -rw[c]);
          delta.emplace_back(b * k + c, rw[c]);
        }
        if (self[w] != 0) {
          delta.emplace_back(a * k + a, -self[w]);
          delta.emplace_back(b * k + b, self[w]);
        }
        // Collapse duplicate cells so G is evaluated on final values.
        std::sort(delta.begin(), delta.end());
        double gain = 0.0;
        std::size_t i = 0;
        while (i < delta.size()) {
          int cell = delta[i].first;
          int64_t d = 0;
          while (i < delta.size() && delta[i].first == cell) d += delta[i++].second;
          if (d != 0) gain += g(big[cell] + d) - g(big[cell]);
        }
        gain -= 2.0 * (g(uni[a] - freq[w]) + g(uni[b] + freq[w]) - g(uni[a]) -
                       g(uni[b]));
        if (gain > best_gain) {
          best_gain = gain;
          best_b = b;
        }
      }

      if (best_b >= 0) {
        const int b = best_b;
        for (int c : touched_l) {
          big[c * k + a] -= lw[c];
          big[c * k + b] += lw[c];
        }
        for (int c : touched_r) {
          big[a * k + c] -= rw[c];
          big[b * k + c] += rw[c];
        }
        big[a * k + a] -= self[w];
        big[b * k + b] += self[w];
        uni[a] -= freq[w];
        uni[b] += freq[w];
        --class_size[a];
        ++class_size[b];
        cls[w] = b;
        ++moves;
      }

      for (int c : touched_l) lw[c] = 0;
      for (int c : touched_r) rw[c] = 0;
    }

    if (trace) {
      trace->objective.push_back(objective());
      trace->sweeps = sweep;
      trace->moves += moves;
    }
    if (moves == 0) break;
  }

  ClassMap map;
  map.k = k;
  for (int w = 0; w < v; ++w) map.word_to_class.emplace(words[w], cls[w]);
  return map;
}

}  // namespace adaptkit
