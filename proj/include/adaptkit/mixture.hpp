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

#ifndef ADAPTKIT_MIXTURE_HPP_
#define ADAPTKIT_MIXTURE_HPP_

#include <string>
#include <vector>

#include "adaptkit/ngram.hpp"

namespace adaptkit {

struct EmTrace {
  // Tune perplexity before the first update, then after every iteration.
  std::vector<double> ppl;
  int iterations = 0;
  bool converged = false;
};

struct EmOptions {
  double tol = 1e-4;   // relative perplexity improvement to keep iterating
  int max_iter = 100;
};

// EM fit of simplex weights minimizing tune-set perplexity. Each component
// scores every predicted event of the tune corpus (words plus sentence ends)
// through its own vocabulary and unknown handling.
std::vector<double> em_fit(const std::vector<const NgramModel*>& components,
                           const std::vector<std::vector<std::string>>& tune,
                           const EmOptions& options, EmTrace* trace = nullptr);

class MixtureModel {
 public:
  MixtureModel(std::vector<NgramModel> components, std::vector<double> weights);

  std::size_t size() const { return components_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const NgramModel& component(std::size_t i) const { return components_[i]; }

  // log10 of Σ_i λ_i · p_i(word | context).
  double logprob(const std::vector<std::string>& context,
                 const std::string& word) const;

  PplResult perplexity(const std::vector<std::vector<std::string>>& lines) const;

  // Statically interpolated backoff model over the union n-gram set: an
  // approximation of the dynamic mixture (unigrams renormalized, backoff
  // weights recomputed bottom-up so every context still sums to one).
  NgramModel merge_static() const;

 private:
  std::vector<NgramModel> components_;
  std::vector<double> weights_;
};

}  // namespace adaptkit

#endif  // ADAPTKIT_MIXTURE_HPP_
