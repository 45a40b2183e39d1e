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

#ifndef ADAPTKIT_VOCAB_HPP_
#define ADAPTKIT_VOCAB_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace adaptkit {

using WordId = uint32_t;

// Token <-> id bijection with frequencies. Ids 0..2 are reserved for the
// unknown token and the sentence boundary markers.
class Vocabulary {
 public:
  static constexpr WordId kUnk = 0;
  static constexpr WordId kBos = 1;
  static constexpr WordId kEos = 2;
  static constexpr const char* kUnkToken = "<unk>";
  static constexpr const char* kBosToken = "<s>";
  static constexpr const char* kEosToken = "</s>";

  Vocabulary();

  // Inserts if absent, bumps the frequency, returns the id.
  WordId add(std::string_view token);

  std::optional<WordId> lookup(std::string_view token) const;
  WordId lookup_or_unk(std::string_view token) const;

  const std::string& token(WordId id) const { return id_to_token_[id]; }
  uint64_t freq(WordId id) const { return freq_[id]; }
  std::size_t size() const { return id_to_token_.size(); }

  bool contains(std::string_view token) const { return lookup(token).has_value(); }

 private:
  std::vector<std::string> id_to_token_;
  std::vector<uint64_t> freq_;
  std::unordered_map<std::string, WordId> token_to_id_;
};

}  // namespace adaptkit

#endif  // ADAPTKIT_VOCAB_HPP_
