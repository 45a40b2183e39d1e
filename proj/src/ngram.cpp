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

#include "adaptkit/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "adaptkit/errors.hpp"
#include "adaptkit/util.hpp"

namespace adaptkit {

namespace {

constexpr double kLogZero = -99.0;
constexpr int kMaxOrder = 10;

std::string pack(const WordId* ids, std::size_t n) {
  std::string key(n * sizeof(WordId), '\0');
  std::memcpy(key.data(), ids, n * sizeof(WordId));
  return key;
}

std::string pack(const std::vector<WordId>& ids) {
  return pack(ids.data(), ids.size());
}

std::vector<WordId> unpack(const std::string& key) {
  std::vector<WordId> ids(key.size() / sizeof(WordId));
  std::memcpy(ids.data(), key.data(), key.size());
  return ids;
}

bool starts_with_bos(const std::string& key) {
  WordId first;
  std::memcpy(&first, key.data(), sizeof(WordId));
  return first == Vocabulary::kBos;
}

struct Discounts {
  double d1 = 0.75, d2 = 0.75, d3 = 0.75;

  double of(uint64_t count) const {
    if (count >= 3) return d3;
    return count == 2 ? d2 : d1;
  }
};

// Chen-Goodman discount estimates with a flat fallback when the
// count-of-counts are too sparse to support them.
Discounts estimate_discounts(uint64_t n1, uint64_t n2, uint64_t n3,
                             uint64_t n4) {
  Discounts d;
  if (n1 == 0 || n2 == 0 || n3 == 0 || n4 == 0) return d;
  double y = static_cast<double>(n1) / (n1 + 2.0 * n2);
  double d1 = 1.0 - 2.0 * y * n2 / n1;
  double d2 = 2.0 - 3.0 * y * n3 / n2;
  double d3 = 3.0 - 4.0 * y * n4 / n3;
  if (d1 <= 0.0 || d2 <= 0.0 || d3 <= 0.0) return d;
  d.d1 = d1;
  d.d2 = d2;
  d.d3 = d3;
  return d;
}

double to_log10(double p) {
  if (p <= 0.0) return kLogZero;
  return std::max(std::log10(p), kLogZero);
}

}  // namespace

NgramCounts::NgramCounts(int order) : order_(order) {
  if (order < 1 || order > kMaxOrder)
    throw ConfigError("n-gram order must be between 1 and " +
                      std::to_string(kMaxOrder));
  maps_.resize(order);
}

void NgramCounts::add_sentence(const std::vector<std::string>& tokens) {
  std::vector<WordId> ids;
  ids.reserve(tokens.size() + 2);
  ids.push_back(Vocabulary::kBos);
  for (const auto& tok : tokens) ids.push_back(vocab_.add(tok));
  ids.push_back(Vocabulary::kEos);

  for (std::size_t j = 1; j < ids.size(); ++j) {
    std::size_t max_k = std::min<std::size_t>(order_, j + 1);
    for (std::size_t k = 1; k <= max_k; ++k)
      ++maps_[k - 1][pack(&ids[j - k + 1], k)];
  }
}

void NgramCounts::merge(const NgramCounts& other) {
  if (other.order_ != order_)
    throw ConfigError("cannot merge counts of different order");
  std::vector<WordId> remap(other.vocab_.size());
  for (std::size_t id = 0; id < other.vocab_.size(); ++id)
    remap[id] = vocab_.add(other.vocab_.token(static_cast<WordId>(id)));
  // add() treats reserved tokens like any other lookup, so the markers
  // keep their fixed slots.
  std::vector<WordId> ids;
  for (int k = 1; k <= order_; ++k) {
    for (const auto& [key, count] : other.maps_[k - 1]) {
      ids = unpack(key);
      for (auto& id : ids) id = remap[id];
      maps_[k - 1][pack(ids)] += count;
    }
  }
}

std::array<uint64_t, 4> NgramCounts::count_of_counts(int k) const {
  std::array<uint64_t, 4> coc = {0, 0, 0, 0};
  for (const auto& [key, count] : maps_[k - 1])
    if (count >= 1 && count <= 4) ++coc[count - 1];
  return coc;
}

uint64_t NgramCounts::count(const std::vector<std::string>& gram) const {
  if (gram.empty() || gram.size() > static_cast<std::size_t>(order_)) return 0;
  std::vector<WordId> ids;
  for (const auto& tok : gram) {
    auto id = vocab_.lookup(tok);
    if (!id) return 0;
    ids.push_back(*id);
  }
  const auto& map = maps_[gram.size() - 1];
  auto it = map.find(pack(ids));
  return it == map.end() ? 0 : it->second;
}

NgramModel::NgramModel(int order) : order_(order) {
  if (order < 1 || order > kMaxOrder)
    throw ConfigError("n-gram order must be between 1 and " +
                      std::to_string(kMaxOrder));
  levels_.resize(order);
}

NgramModel NgramModel::estimate(const NgramCounts& counts) {
  const int n = counts.order();
  if (counts.maps_[0].empty()) throw DataError("cannot estimate from empty counts");

  NgramModel model(n);
  model.vocab_ = counts.vocab_;

  // Effective counts: raw at the highest order and for <s>-initial k-grams
  // (they have no left context), continuation counts elsewhere.
  std::vector<std::unordered_map<std::string, uint64_t>> eff(n);
  eff[n - 1] = counts.maps_[n - 1];
  for (int k = n - 1; k >= 1; --k) {
    auto& dst = eff[k - 1];
    for (const auto& [key, count] : counts.maps_[k])
      ++dst[key.substr(sizeof(WordId))];
    for (const auto& [key, count] : counts.maps_[k - 1])
      if (starts_with_bos(key)) dst[key] = count;
  }

  std::vector<Discounts> disc(n);
  for (int k = 1; k <= n; ++k) {
    uint64_t coc[4] = {0, 0, 0, 0};
    for (const auto& [key, count] : eff[k - 1])
      if (count >= 1 && count <= 4) ++coc[count - 1];
    disc[k - 1] = estimate_discounts(coc[0], coc[1], coc[2], coc[3]);
  }

  // <unk> receives the singleton mass of the unigram distribution. With no
  // singletons it stays structural only (-99, outside the event space).
  uint64_t unk_mass = 0;
  for (const auto& [key, count] : eff[0])
    if (count == 1) ++unk_mass;
  if (unk_mass > 0) eff[0][pack({Vocabulary::kUnk})] = unk_mass;

  // Deterministic float sums regardless of hash-map history.
  std::vector<std::vector<std::pair<std::string, uint64_t>>> sorted(n);
  for (int k = 1; k <= n; ++k) {
    auto& vec = sorted[k - 1];
    vec.assign(eff[k - 1].begin(), eff[k - 1].end());
    std::sort(vec.begin(), vec.end());
  }

  // Unigram level: interpolate with the uniform distribution over the
  // event space.
  std::unordered_map<std::string, double> p_prev;
  {
    const auto& vec = sorted[0];
    const Discounts& d = disc[0];
    double total = 0.0, reserved = 0.0;
    for (const auto& [key, count] : vec) {
      total += static_cast<double>(count);
      reserved += d.of(count);
    }
    double gamma = reserved / total;
    double uniform = 1.0 / static_cast<double>(vec.size());
    for (const auto& [key, count] : vec) {
      double p = (count - d.of(count)) / total + gamma * uniform;
      p_prev[key] = p;
      model.levels_[0][key] = {to_log10(p), 0.0};
    }
  }

  // Higher levels, grouped by shared history. The sort above makes runs
  // with equal history contiguous.
  std::vector<std::unordered_map<std::string, double>> bow(n);
  const std::size_t idw = sizeof(WordId);
  for (int k = 2; k <= n; ++k) {
    const auto& vec = sorted[k - 1];
    const Discounts& d = disc[k - 1];
    std::unordered_map<std::string, double> p_cur;
    p_cur.reserve(vec.size());
    std::size_t begin = 0;
    while (begin < vec.size()) {
      const std::size_t hist_len = (k - 1) * idw;
      std::size_t end = begin;
      double total = 0.0, reserved = 0.0;
      while (end < vec.size() &&
             vec[end].first.compare(0, hist_len, vec[begin].first, 0,
                                    hist_len) == 0) {
        total += static_cast<double>(vec[end].second);
        reserved += d.of(vec[end].second);
        ++end;
      }
      double gamma = reserved / total;
      for (std::size_t i = begin; i < end; ++i) {
        const auto& [key, count] = vec[i];
        auto low = p_prev.find(key.substr(idw));
        if (low == p_prev.end())
          throw NumericError("missing lower-order distribution for an n-gram");
        double p = (count - d.of(count)) / total + gamma * low->second;
        p_cur[key] = p;
        model.levels_[k - 1][key] = {to_log10(p), 0.0};
      }
      bow[k - 2][vec[begin].first.substr(0, hist_len)] = gamma;
      begin = end;
    }
    p_prev = std::move(p_cur);
  }

  // Structural unigrams: <s> never predicted, <unk> possibly massless.
  std::string bos_key = pack({Vocabulary::kBos});
  std::string unk_key = pack({Vocabulary::kUnk});
  model.levels_[0].emplace(bos_key, Entry{kLogZero, 0.0});
  if (unk_mass == 0) model.levels_[0].emplace(unk_key, Entry{kLogZero, 0.0});

  for (int k = 1; k < n; ++k) {
    for (auto& [key, entry] : model.levels_[k - 1]) {
      auto it = bow[k - 1].find(key);
      if (it != bow[k - 1].end()) entry.logbow = to_log10(it->second);
    }
  }
  return model;
}

double NgramModel::logprob_ids(const std::vector<WordId>& context,
                               WordId word) const {
  std::size_t m = std::min(context.size(),
                           static_cast<std::size_t>(order_ - 1));
  double backoff = 0.0;
  std::vector<WordId> key_ids;
  while (true) {
    key_ids.assign(context.end() - m, context.end());
    key_ids.push_back(word);
    const auto& level = levels_[m];
    auto it = level.find(pack(key_ids));
    if (it != level.end()) return backoff + it->second.logp;
    if (m == 0) return backoff + kLogZero;  // word absent even as unigram
    key_ids.pop_back();
    auto ctx = levels_[m - 1].find(pack(key_ids));
    if (ctx != levels_[m - 1].end()) backoff += ctx->second.logbow;
    --m;
  }
}

double NgramModel::logprob(const std::vector<std::string>& context,
                           const std::string& word) const {
  std::vector<WordId> ctx;
  ctx.reserve(context.size());
  for (const auto& tok : context) ctx.push_back(vocab_.lookup_or_unk(tok));
  return logprob_ids(ctx, vocab_.lookup_or_unk(word));
}

void NgramModel::line_logprobs(const std::vector<std::string>& tokens,
                               std::vector<double>* out,
                               uint64_t* oov) const {
  std::vector<WordId> ids;
  ids.reserve(tokens.size() + 2);
  ids.push_back(Vocabulary::kBos);
  for (const auto& tok : tokens) {
    WordId id = vocab_.lookup_or_unk(tok);
    if (id == Vocabulary::kUnk && oov) ++*oov;
    ids.push_back(id);
  }
  ids.push_back(Vocabulary::kEos);

  std::vector<WordId> context;
  for (std::size_t j = 1; j < ids.size(); ++j) {
    context.assign(ids.begin(), ids.begin() + j);
    out->push_back(logprob_ids(context, ids[j]));
  }
}

PplResult NgramModel::perplexity(
    const std::vector<std::vector<std::string>>& lines) const {
  PplResult r;
  std::vector<double> probs;
  for (const auto& line : lines) {
    probs.clear();
    line_logprobs(line, &probs, &r.oov);
    for (double lp : probs) r.logprob += lp;
    r.tokens += probs.size();
  }
  if (r.tokens == 0) throw DataError("perplexity over an empty corpus");
  r.ppl = std::pow(10.0, -r.logprob / static_cast<double>(r.tokens));
  return r;
}

bool NgramModel::stored(const std::vector<std::string>& gram, double* logp,
                        double* logbow) const {
  if (gram.empty() || gram.size() > static_cast<std::size_t>(order_))
    return false;
  std::vector<WordId> ids;
  for (const auto& tok : gram) {
    auto id = vocab_.lookup(tok);
    if (!id) return false;
    ids.push_back(*id);
  }
  const auto& level = levels_[gram.size() - 1];
  auto it = level.find(pack(ids));
  if (it == level.end()) return false;
  if (logp) *logp = it->second.logp;
  if (logbow) *logbow = it->second.logbow;
  return true;
}

NgramModel NgramModel::from_entries(
    int order, const std::vector<std::vector<RawEntry>>& per_level) {
  if (per_level.size() != static_cast<std::size_t>(order))
    throw ConfigError("entry levels do not match the model order");
  NgramModel model(order);
  for (int k = 1; k <= order; ++k) {
    for (const auto& raw : per_level[k - 1]) {
      if (raw.tokens.size() != static_cast<std::size_t>(k))
        throw ConfigError("entry token count does not match its level");
      std::vector<WordId> ids;
      for (const auto& tok : raw.tokens) ids.push_back(model.vocab_.add(tok));
      model.levels_[k - 1][pack(ids)] = {raw.logp, raw.logbow};
    }
  }
  return model;
}

void NgramModel::visit(
    int k, const std::function<void(const std::vector<std::string>&, double,
                                    double)>& fn) const {
  std::vector<std::pair<std::string, const Entry*>> items;
  items.reserve(levels_[k - 1].size());
  for (const auto& [key, entry] : levels_[k - 1]) {
    auto ids = unpack(key);
    std::string text = vocab_.token(ids[0]);
    for (std::size_t i = 1; i < ids.size(); ++i) {
      text += ' ';
      text += vocab_.token(ids[i]);
    }
    items.emplace_back(std::move(text), &entry);
  }
  std::sort(items.begin(), items.end());
  for (const auto& [text, entry] : items)
    fn(split_ws(text), entry->logp, entry->logbow);
}

void NgramModel::to_arpa(std::ostream& out) const {
  out << "\\data\\\n";
  for (int k = 1; k <= order_; ++k)
    out << "ngram " << k << "=" << levels_[k - 1].size() << "\n";
  out << "\n";

  std::vector<std::pair<std::string, const Entry*>> lines;
  for (int k = 1; k <= order_; ++k) {
    lines.clear();
    lines.reserve(levels_[k - 1].size());
    for (const auto& [key, entry] : levels_[k - 1]) {
      auto ids = unpack(key);
      std::string text = vocab_.token(ids[0]);
      for (std::size_t i = 1; i < ids.size(); ++i) {
        text += ' ';
        text += vocab_.token(ids[i]);
      }
      lines.emplace_back(std::move(text), &entry);
    }
    std::sort(lines.begin(), lines.end());

    out << "\\" << k << "-grams:\n";
    for (const auto& [text, entry] : lines) {
      out << format_logprob(entry->logp) << '\t' << text;
      if (k < order_) out << '\t' << format_logprob(entry->logbow);
      out << "\n";
    }
    out << "\n";
  }
  out << "\\end\\\n";
}

NgramModel NgramModel::from_arpa(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&](bool required) {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    if (required) throw ParseError("unexpected end of ARPA file", lineno);
    return false;
  };

  next_line(true);
  if (line != "\\data\\")
    throw ParseError("expected \\data\\ header", lineno);

  std::vector<std::size_t> sizes;
  while (next_line(true) && starts_with(line, "ngram ")) {
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("malformed ngram count line", lineno);
    try {
      int k = std::stoi(line.substr(6, eq - 6));
      if (k != static_cast<int>(sizes.size()) + 1)
        throw ParseError("ngram counts out of order", lineno);
      sizes.push_back(std::stoull(line.substr(eq + 1)));
    } catch (const std::logic_error&) {
      throw ParseError("malformed ngram count line", lineno);
    }
  }
  if (sizes.empty()) throw ParseError("ARPA file declares no orders", lineno);

  NgramModel model(static_cast<int>(sizes.size()));
  const int n = model.order_;
  for (int k = 1; k <= n; ++k) {
    std::string header = "\\" + std::to_string(k) + "-grams:";
    if (line != header)
      throw ParseError("expected " + header, lineno);
    for (std::size_t i = 0; i < sizes[k - 1]; ++i) {
      next_line(true);
      std::vector<std::string> fields;
      std::size_t start = 0;
      while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
          fields.push_back(line.substr(start));
          break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
      }
      if (fields.size() < 2 || fields.size() > 3)
        throw ParseError("malformed n-gram entry", lineno);
      Entry entry;
      try {
        entry.logp = std::stod(fields[0]);
        if (fields.size() == 3) entry.logbow = std::stod(fields[2]);
      } catch (const std::logic_error&) {
        throw ParseError("malformed probability field", lineno);
      }
      auto tokens = split_ws(fields[1]);
      if (tokens.size() != static_cast<std::size_t>(k))
        throw ParseError("n-gram token count does not match section", lineno);
      std::vector<WordId> ids;
      for (const auto& tok : tokens) ids.push_back(model.vocab_.add(tok));
      if (!model.levels_[k - 1].emplace(pack(ids), entry).second)
        throw ParseError("duplicate n-gram entry", lineno);
    }
    next_line(true);
  }
  if (line != "\\end\\") throw ParseError("expected \\end\\ marker", lineno);
  return model;
}

}  // namespace adaptkit
