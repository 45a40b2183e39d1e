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

#include "adaptkit/vocab.hpp"

namespace adaptkit {

Vocabulary::Vocabulary() {
  // Reserved entries start with frequency 0; real occurrences bump them.
  for (const char* tok : {kUnkToken, kBosToken, kEosToken}) {
    WordId id = static_cast<WordId>(id_to_token_.size());
    id_to_token_.emplace_back(tok);
    freq_.push_back(0);
    token_to_id_.emplace(tok, id);
  }
}

WordId Vocabulary::add(std::string_view token) {
  auto it = token_to_id_.find(std::string(token));
  if (it != token_to_id_.end()) {
    ++freq_[it->second];
    return it->second;
  }
  WordId id = static_cast<WordId>(id_to_token_.size());
  id_to_token_.emplace_back(token);
  freq_.push_back(1);
  token_to_id_.emplace(id_to_token_.back(), id);
  return id;
}

std::optional<WordId> Vocabulary::lookup(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  if (it == token_to_id_.end()) return std::nullopt;
  return it->second;
}

WordId Vocabulary::lookup_or_unk(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? kUnk : it->second;
}

}  // namespace adaptkit
