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

#include "adaptkit/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "adaptkit/errors.hpp"
#include "adaptkit/util.hpp"

namespace adaptkit {

namespace {

constexpr double kLogZero = -99.0;

double to_log10(double p) {
  if (p <= 0.0) return kLogZero;
  return std::max(std::log10(p), kLogZero);
}

}  // namespace

std::vector<double> em_fit(const std::vector<const NgramModel*>& components,
                           const std::vector<std::vector<std::string>>& tune,
                           const EmOptions& options, EmTrace* trace) {
  const std::size_t k = components.size();
  if (k < 2) throw ConfigError("interpolation needs at least two components");
  if (tune.empty()) throw DataError("empty tune corpus");

  // Score every tune event once per component; EM then only reweights.
  std::vector<std::vector<double>> prob(k);
  std::vector<double> lps;
  for (std::size_t i = 0; i < k; ++i) {
    lps.clear();
    for (const auto& line : tune) components[i]->line_logprobs(line, &lps);
    prob[i].reserve(lps.size());
    for (double lp : lps) prob[i].push_back(std::pow(10.0, lp));
  }
  const std::size_t events = prob[0].size();
  if (events == 0) throw DataError("empty tune corpus");

  auto event_name = [&](std::size_t e) {
    std::size_t seen = 0;
    for (const auto& line : tune) {
      if (e < seen + line.size() + 1) {
        std::size_t j = e - seen;
        return j < line.size() ? line[j] : std::string(Vocabulary::kEosToken);
      }
      seen += line.size() + 1;
    }
    return std::string("?");
  };

  std::vector<double> lambda(k, 1.0 / static_cast<double>(k));
  std::vector<double> mix(events);
  auto mix_ppl = [&]() {
    double lp_sum = 0.0;
    for (std::size_t e = 0; e < events; ++e) {
      double m = 0.0;
      for (std::size_t i = 0; i < k; ++i) m += lambda[i] * prob[i][e];
      if (m <= 0.0)
        throw NumericError("all components assign zero probability to tune event '" +
                           event_name(e) + "' (index " + std::to_string(e) + ")");
      mix[e] = m;
      lp_sum += std::log10(m);
    }
    return std::pow(10.0, -lp_sum / static_cast<double>(events));
  };

  double ppl = mix_ppl();
  if (trace) {
    trace->ppl.clear();
    trace->ppl.push_back(ppl);
    trace->iterations = 0;
    trace->converged = false;
  }

  std::vector<double> next(k);
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t e = 0; e < events; ++e)
      for (std::size_t i = 0; i < k; ++i)
        next[i] += lambda[i] * prob[i][e] / mix[e];
    for (std::size_t i = 0; i < k; ++i)
      lambda[i] = next[i] / static_cast<double>(events);

    double updated = mix_ppl();
    if (trace) {
      trace->ppl.push_back(updated);
      trace->iterations = iter;
    }
    double improvement = (ppl - updated) / ppl;
    ppl = updated;
    if (improvement < options.tol) {
      if (trace) trace->converged = true;
      break;
    }
  }
  return lambda;
}

MixtureModel::MixtureModel(std::vector<NgramModel> components,
                           std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
  if (components_.size() != weights_.size() || components_.empty())
    throw ConfigError("component and weight counts differ");
  double sum = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw ConfigError("negative mixture weight");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw ConfigError("mixture weights must sum to one");
}

double MixtureModel::logprob(const std::vector<std::string>& context,
                             const std::string& word) const {
  // Shift by the max component logprob so tiny probabilities survive.
  std::vector<double> lps(components_.size());
  double max_lp = kLogZero;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    lps[i] = components_[i].logprob(context, word);
    if (weights_[i] > 0.0) max_lp = std::max(max_lp, lps[i]);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i)
    if (weights_[i] > 0.0)
      acc += weights_[i] * std::pow(10.0, lps[i] - max_lp);
  return to_log10(acc) + max_lp;
}

PplResult MixtureModel::perplexity(
    const std::vector<std::vector<std::string>>& lines) const {
  PplResult r;
  for (const auto& line : lines) {
    std::vector<std::string> context = {Vocabulary::kBosToken};
    for (std::size_t j = 0; j <= line.size(); ++j) {
      const std::string& word =
          j < line.size() ? line[j] : Vocabulary::kEosToken;
      r.logprob += logprob(context, word);
      context.push_back(word);
      ++r.tokens;
    }
    for (const auto& tok : line) {
      bool oov = true;
      for (const auto& c : components_)
        if (c.vocab().contains(tok)) oov = false;
      if (oov) ++r.oov;
    }
  }
  if (r.tokens == 0) throw DataError("perplexity over an empty corpus");
  r.ppl = std::pow(10.0, -r.logprob / static_cast<double>(r.tokens));
  return r;
}

NgramModel MixtureModel::merge_static() const {
  int order = 1;
  for (const auto& c : components_) order = std::max(order, c.order());

  struct Item {
    std::vector<std::string> tokens;
    double p = 0.0;       // merged conditional probability
    double bow = 1.0;
  };
  // Keyed by joined token string: deterministic order, and the sort groups
  // entries sharing a history prefix contiguously.
  std::vector<std::map<std::string, Item>> levels(order);
  for (const auto& c : components_) {
    for (int k = 1; k <= c.order(); ++k) {
      c.visit(k, [&](const std::vector<std::string>& tokens, double, double) {
        auto& item = levels[k - 1][join(tokens, " ")];
        if (item.tokens.empty()) item.tokens = tokens;
      });
    }
  }

  const std::string bos = Vocabulary::kBosToken;
  for (int k = 1; k <= order; ++k) {
    for (auto& [joined, item] : levels[k - 1]) {
      std::vector<std::string> context(item.tokens.begin(),
                                       item.tokens.end() - 1);
      const std::string& word = item.tokens.back();
      double p = 0.0;
      for (std::size_t i = 0; i < components_.size(); ++i)
        p += weights_[i] *
             std::pow(10.0, components_[i].logprob(context, word));
      item.p = p;
    }
  }

  // The unigram level must normalize on its own: component unknown mass
  // makes the union sum exceed one, so renormalize (<s> stays structural).
  double uni_sum = 0.0;
  for (const auto& [joined, item] : levels[0])
    if (joined != bos) uni_sum += item.p;
  if (uni_sum <= 0.0) throw NumericError("merged unigram mass vanished");
  for (auto& [joined, item] : levels[0])
    if (joined != bos) item.p /= uni_sum;

  // Dynamic-mixture fallback for lower-order conditionals whose exact
  // suffix is not stored (cannot happen for models estimated here).
  auto lower_prob = [&](const std::vector<std::string>& tokens, int k) {
    std::vector<std::string> suffix(tokens.begin() + 1, tokens.end());
    auto it = levels[k - 2].find(join(suffix, " "));
    if (it != levels[k - 2].end()) return it->second.p;
    std::vector<std::string> context(suffix.begin(), suffix.end() - 1);
    double p = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i)
      p += weights_[i] *
           std::pow(10.0, components_[i].logprob(context, suffix.back()));
    return p;
  };

  // Backoff weights bottom-up: whatever conditional mass the stored
  // extensions of a history do not cover flows through its backoff.
  for (int k = 2; k <= order; ++k) {
    auto it = levels[k - 1].begin();
    while (it != levels[k - 1].end()) {
      std::string history = join(
          {it->second.tokens.begin(), it->second.tokens.end() - 1}, " ");
      std::string prefix = history + " ";
      double sum_p = 0.0, sum_low = 0.0;
      auto run = it;
      for (; run != levels[k - 1].end() &&
             starts_with(run->first, prefix);
           ++run) {
        sum_p += run->second.p;
        sum_low += lower_prob(run->second.tokens, k);
      }
      auto hist_it = levels[k - 2].find(history);
      if (hist_it != levels[k - 2].end()) {
        double num = 1.0 - sum_p;
        double den = 1.0 - sum_low;
        hist_it->second.bow = (num > 1e-12 && den > 1e-12) ? num / den : 1.0;
      }
      it = run;
    }
  }

  std::vector<std::vector<NgramModel::RawEntry>> raw(order);
  for (int k = 1; k <= order; ++k) {
    raw[k - 1].reserve(levels[k - 1].size());
    for (const auto& [joined, item] : levels[k - 1]) {
      double logp = (k == 1 && joined == bos) ? kLogZero : to_log10(item.p);
      raw[k - 1].push_back(
          {item.tokens, logp, k < order ? to_log10(item.bow) : 0.0});
    }
  }
  return NgramModel::from_entries(order, raw);
}

}  // namespace adaptkit
