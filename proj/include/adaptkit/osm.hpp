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

#ifndef ADAPTKIT_OSM_HPP_
#define ADAPTKIT_OSM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "adaptkit/text.hpp"

namespace adaptkit {

// One step of the linearized translation/reordering process. The decoder
// interprets the sequence against a growing list of source slots: gaps are
// marked positions that a later JUMP_BACK reopens for insertion.
struct Operation {
  enum Kind {
    kGen,         // translate source word -> target word
    kGenIdent,    // translate a word to itself
    kGenSrcOnly,  // emit an untranslated source word
    kGenTgtOnly,  // emit a target word with no source
    kInsertGap,   // mark the current insertion point as a reopenable gap
    kJumpBack,    // reopen the k-th gap counted from the right
    kJumpFwd,     // move insertion to the end of the sequence
  };

  Kind kind;
  std::string src;   // kGen, kGenIdent, kGenSrcOnly
  std::string tgt;   // kGen, kGenTgtOnly
  uint32_t jump = 0; // kJumpBack, 1-based

  bool operator==(const Operation&) const = default;

  // One whitespace-free token per operation; underscores in payload tokens
  // are doubled so the encoding stays unambiguous.
  std::string serialize() const;
  static Operation parse(const std::string& token);
};

// Drops alignment links so that every target word keeps at most one source
// link (the lowest source index) and every source word keeps at most one
// target link (the lowest target index). The result is what the encoder
// round-trips.
std::vector<AlignLink> functionalize_alignment(
    const std::vector<AlignLink>& links, std::size_t src_len,
    std::size_t tgt_len);

std::vector<Operation> osm_encode(const SentencePair& pair);
SentencePair osm_decode(const std::vector<Operation>& ops);

// One serialized line per pair; encode errors are rethrown with the pair
// index prepended.
std::vector<std::string> osm_corpus(const std::vector<SentencePair>& pairs);

}  // namespace adaptkit

#endif  // ADAPTKIT_OSM_HPP_
