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

#include "adaptkit/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "adaptkit/errors.hpp"
#include "adaptkit/text.hpp"
#include "adaptkit/util.hpp"

namespace adaptkit {

namespace {

void count_ngrams(const std::vector<std::string>& tokens, int n,
                  std::unordered_map<std::string, std::uint64_t>* out) {
  if (tokens.size() < static_cast<std::size_t>(n)) return;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int j = 1; j < n; ++j) {
      key += '\x1f';
      key += tokens[i + j];
    }
    ++(*out)[key];
  }
}

}  // namespace

BleuReport bleu(const std::vector<std::string>& hypotheses,
                const std::vector<std::string>& references,
                bool normalize_first) {
  if (hypotheses.size() != references.size())
    throw DataError("hypothesis/reference line counts differ: " +
                    std::to_string(hypotheses.size()) + " vs " +
                    std::to_string(references.size()));

  NormalizationRules rules;
  if (normalize_first) rules = NormalizationRules::arabic_default();

  std::uint64_t matched[4] = {0, 0, 0, 0};
  std::uint64_t total[4] = {0, 0, 0, 0};
  BleuReport report;

  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    std::string hyp_line = hypotheses[i];
    std::string ref_line = references[i];
    if (normalize_first) {
      hyp_line = normalize(hyp_line, rules);
      ref_line = normalize(ref_line, rules);
    }
    auto hyp = split_ws(hyp_line);
    auto ref = split_ws(ref_line);
    report.hyp_len += hyp.size();
    report.ref_len += ref.size();
    for (int n = 1; n <= 4; ++n) {
      if (hyp.size() < static_cast<std::size_t>(n)) continue;
      total[n - 1] += hyp.size() - n + 1;
      std::unordered_map<std::string, std::uint64_t> hyp_counts, ref_counts;
      count_ngrams(hyp, n, &hyp_counts);
      count_ngrams(ref, n, &ref_counts);
      for (const auto& [gram, count] : hyp_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matched[n - 1] += std::min(count, it->second);
      }
    }
  }

  if (report.hyp_len == 0) return report;

  report.brevity_penalty =
      report.hyp_len >= report.ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(report.ref_len) /
                               static_cast<double>(report.hyp_len));

  double log_sum = 0.0;
  bool zero = false;
  for (int n = 0; n < 4; ++n) {
    // An order with no n-grams anywhere in the hypothesis (every line
    // shorter than n) is vacuously perfect; otherwise identity pairs of
    // short sentences could never reach 100.
    report.precisions[n] =
        total[n] == 0 ? 1.0
                      : static_cast<double>(matched[n]) / static_cast<double>(total[n]);
    if (report.precisions[n] <= 0.0)
      zero = true;
    else
      log_sum += std::log(report.precisions[n]);
  }
  if (!zero)
    report.bleu = 100.0 * report.brevity_penalty * std::exp(log_sum / 4.0);
  return report;
}

std::string format_bleu_summary(const BleuReport& report) {
  std::string out = "BLEU = " + format_fixed(report.bleu, 1) + ", p1/p2/p3/p4 = ";
  for (int n = 0; n < 4; ++n) {
    if (n > 0) out += '/';
    out += format_fixed(report.precisions[n], 4);
  }
  out += ", BP = " + format_fixed(report.brevity_penalty, 4);
  double ratio = report.ref_len == 0
                     ? 0.0
                     : static_cast<double>(report.hyp_len) /
                           static_cast<double>(report.ref_len);
  out += ", ratio = " + format_fixed(ratio, 4);
  return out;
}

std::string progress_table(
    const std::vector<std::string>& column_labels,
    const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
  for (const auto& [label, values] : rows)
    if (values.size() != column_labels.size())
      throw ConfigError("row '" + label + "' has " + std::to_string(values.size()) +
                        " cells, expected " + std::to_string(column_labels.size()));

  const std::size_t cols = column_labels.size() + 1;
  std::vector<std::vector<std::string>> cells;
  cells.push_back({""});
  for (const auto& label : column_labels) cells.back().push_back(label);
  cells.back().push_back("Avg");
  for (const auto& [label, values] : rows) {
    std::vector<std::string> row{label};
    double sum = 0.0;
    for (double v : values) {
      row.push_back(format_fixed(v, 1));
      sum += v;
    }
    row.push_back(format_fixed(values.empty() ? 0.0 : sum / values.size(), 1));
    cells.push_back(std::move(row));
  }

  std::vector<std::size_t> width(cols + 1, 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());

  std::string out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += "  ";
      // Label column left aligned, numeric columns right aligned.
      std::size_t pad = width[c] - row[c].size();
      if (c == 0) {
        out += row[c];
        out.append(pad, ' ');
      } else {
        out.append(pad, ' ');
        out += row[c];
      }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

}  // namespace adaptkit
