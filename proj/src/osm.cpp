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

#include "adaptkit/osm.hpp"

#include <algorithm>
#include <list>

#include "adaptkit/errors.hpp"
#include "adaptkit/util.hpp"

namespace adaptkit {

namespace {

std::string escape(const std::string& payload) {
  std::string out;
  out.reserve(payload.size());
  for (char c : payload) {
    out += c;
    if (c == '_') out += '_';
  }
  return out;
}

// Unescapes a full payload; a lone underscore is malformed.
std::string unescape(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '_') {
      if (i + 1 >= s.size() || s[i + 1] != '_')
        throw DataError("stray underscore in operation payload: " + s);
      ++i;
    }
    out += s[i];
  }
  if (out.empty()) throw DataError("empty operation payload");
  return out;
}

}  // namespace

std::string Operation::serialize() const {
  switch (kind) {
    case kGen:
      return "GEN_" + escape(src) + "_" + escape(tgt);
    case kGenIdent:
      return "GEN_IDENT_" + escape(src);
    case kGenSrcOnly:
      return "GEN_SRC_ONLY_" + escape(src);
    case kGenTgtOnly:
      return "GEN_TGT_ONLY_" + escape(tgt);
    case kInsertGap:
      return "INSERT_GAP";
    case kJumpBack:
      return "JUMP_BACK_" + std::to_string(jump);
    case kJumpFwd:
      return "JUMP_FWD";
  }
  throw DataError("unknown operation kind");
}

Operation Operation::parse(const std::string& token) {
  // Kind prefixes are matched greedily, longest first: a GEN whose source
  // token literally starts with "IDENT_" etc. is not representable.
  if (token == "INSERT_GAP") return {kInsertGap, "", "", 0};
  if (token == "JUMP_FWD") return {kJumpFwd, "", "", 0};
  if (starts_with(token, "JUMP_BACK_")) {
    uint32_t k = 0;
    try {
      unsigned long v = std::stoul(token.substr(10));
      k = static_cast<uint32_t>(v);
    } catch (const std::logic_error&) {
      throw DataError("malformed jump operation: " + token);
    }
    if (k < 1) throw DataError("jump distance must be at least 1: " + token);
    return {kJumpBack, "", "", k};
  }
  if (starts_with(token, "GEN_IDENT_"))
    return {kGenIdent, unescape(token.substr(10)), "", 0};
  if (starts_with(token, "GEN_SRC_ONLY_"))
    return {kGenSrcOnly, unescape(token.substr(13)), "", 0};
  if (starts_with(token, "GEN_TGT_ONLY_"))
    return {kGenTgtOnly, "", unescape(token.substr(13)), 0};
  if (starts_with(token, "GEN_")) {
    const std::string payload = token.substr(4);
    std::string src;
    for (std::size_t i = 0; i < payload.size(); ++i) {
      if (payload[i] == '_') {
        if (i + 1 < payload.size() && payload[i + 1] == '_') {
          src += '_';
          ++i;
          continue;
        }
        if (src.empty()) throw DataError("empty operation payload");
        return {kGen, src, unescape(payload.substr(i + 1)), 0};
      }
      src += payload[i];
    }
    throw DataError("translation operation needs two payloads: " + token);
  }
  throw DataError("unknown operation token: " + token);
}

std::vector<AlignLink> functionalize_alignment(
    const std::vector<AlignLink>& links, std::size_t src_len,
    std::size_t tgt_len) {
  std::vector<int64_t> t2s(tgt_len, -1);
  for (const auto& [s, t] : links) {
    if (s >= src_len || t >= tgt_len)
      throw DataError("alignment link out of range");
    if (t2s[t] < 0 || static_cast<int64_t>(s) < t2s[t]) t2s[t] = s;
  }
  std::vector<bool> src_taken(src_len, false);
  std::vector<AlignLink> out;
  for (std::size_t t = 0; t < tgt_len; ++t) {
    if (t2s[t] < 0) continue;
    auto s = static_cast<std::size_t>(t2s[t]);
    if (src_taken[s]) continue;
    src_taken[s] = true;
    out.push_back({static_cast<uint32_t>(s), static_cast<uint32_t>(t)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Operation> osm_encode(const SentencePair& pair) {
  const std::size_t n = pair.source.size();
  const std::size_t m = pair.target.size();
  if (n == 0 || m == 0)
    throw DataError("cannot encode an empty sentence pair");
  if (!pair.alignment) throw DataError("sentence pair has no alignment");

  auto links = functionalize_alignment(*pair.alignment, n, m);
  std::vector<int64_t> t2s(m, -1);
  std::vector<bool> linked(n, false);
  for (const auto& [s, t] : links) {
    t2s[t] = s;
    linked[s] = true;
  }

  std::vector<Operation> ops;
  std::vector<bool> covered(n, false);
  // Open gaps: skipped uncovered blocks, in source order, each owning one
  // pending marker in the decoder's list.
  std::vector<std::pair<std::size_t, std::size_t>> gaps;
  std::size_t p = 0;        // source position of the insertion point
  std::size_t frontier = 0; // 1 + highest covered position
  bool at_end = true;       // insertion point at the very end
  bool in_region = false;   // filling a reopened gap that ends at region_end
  std::size_t region_end = 0;

  auto register_gap = [&](std::size_t a, std::size_t b) {
    ops.push_back({Operation::kInsertGap, "", "", 0});
    auto pos = std::lower_bound(
        gaps.begin(), gaps.end(), std::make_pair(a, b));
    gaps.insert(pos, {a, b});
  };

  // Moves the insertion point in front of source position s.
  auto navigate = [&](std::size_t s) {
    if (in_region) {
      if (s >= p && s < region_end) {
        if (s > p) register_gap(p, s);
        return;
      }
      register_gap(p, region_end);
      in_region = false;
    }
    if (s < frontier) {
      // Inside one of the open gaps: reopen it.
      std::size_t idx = gaps.size();
      for (std::size_t g = 0; g < gaps.size(); ++g)
        if (gaps[g].first <= s && s < gaps[g].second) idx = g;
      if (idx == gaps.size())
        throw DataError("internal error: uncovered position outside any gap");
      ops.push_back({Operation::kJumpBack, "", "",
                     static_cast<uint32_t>(gaps.size() - idx)});
      auto [a, b] = gaps[idx];
      gaps.erase(gaps.begin() + static_cast<std::ptrdiff_t>(idx));
      if (s > a) register_gap(a, s);
      in_region = true;
      region_end = b;
      at_end = false;
    } else {
      if (!at_end) {
        ops.push_back({Operation::kJumpFwd, "", "", 0});
        at_end = true;
      }
      if (s > frontier) register_gap(frontier, s);
    }
  };

  // Emits the generation op plus eager GEN_SRC_ONLY for the unlinked run
  // right behind it, then restores the gap bookkeeping.
  auto generate = [&](std::size_t s, Operation op) {
    navigate(s);
    ops.push_back(std::move(op));
    covered[s] = true;
    std::size_t q = s + 1;
    while (q < n && !covered[q] && !linked[q]) {
      ops.push_back({Operation::kGenSrcOnly, pair.source[q], "", 0});
      covered[q] = true;
      ++q;
    }
    p = q;
    if (in_region && q >= region_end) in_region = false;
    if (!in_region && q > frontier) frontier = q;
  };

  for (std::size_t t = 0; t < m; ++t) {
    if (t2s[t] < 0) {
      ops.push_back({Operation::kGenTgtOnly, "", pair.target[t], 0});
      continue;
    }
    auto s = static_cast<std::size_t>(t2s[t]);
    if (pair.source[s] == pair.target[t]) {
      generate(s, {Operation::kGenIdent, pair.source[s], "", 0});
    } else {
      generate(s, {Operation::kGen, pair.source[s], pair.target[t], 0});
    }
  }

  // Unlinked source words not swallowed by an eager run.
  for (std::size_t s = 0; s < n; ++s) {
    if (covered[s]) continue;
    generate(s, {Operation::kGenSrcOnly, pair.source[s], "", 0});
  }
  return ops;
}

SentencePair osm_decode(const std::vector<Operation>& ops) {
  if (ops.empty()) throw DataError("empty operation sequence");

  struct Node {
    bool marker;
    std::string src;
    int64_t tgt = -1;    // target index for aligned cells
    std::size_t op = 0;  // op that created a marker, for error messages
  };
  std::list<Node> slots;
  auto ins = slots.end();
  std::vector<std::string> target;

  auto fail = [](std::size_t index, const std::string& what) {
    throw DataError("operation " + std::to_string(index) + ": " + what);
  };

  for (std::size_t i = 0; i < ops.size(); ++i) {
    const Operation& op = ops[i];
    switch (op.kind) {
      case Operation::kInsertGap:
        slots.insert(ins, {true, "", -1, i});
        break;
      case Operation::kJumpBack: {
        if (op.jump < 1) fail(i, "jump distance must be at least 1");
        std::vector<std::list<Node>::iterator> markers;
        for (auto it = slots.begin(); it != slots.end(); ++it)
          if (it->marker) markers.push_back(it);
        if (op.jump > markers.size())
          fail(i, "jump back " + std::to_string(op.jump) + " with only " +
                      std::to_string(markers.size()) + " open gaps");
        ins = slots.erase(markers[markers.size() - op.jump]);
        break;
      }
      case Operation::kJumpFwd:
        ins = slots.end();
        break;
      case Operation::kGen:
        if (op.src.empty() || op.tgt.empty()) fail(i, "empty payload");
        slots.insert(ins,
                     {false, op.src, static_cast<int64_t>(target.size()), i});
        target.push_back(op.tgt);
        break;
      case Operation::kGenIdent:
        if (op.src.empty()) fail(i, "empty payload");
        slots.insert(ins,
                     {false, op.src, static_cast<int64_t>(target.size()), i});
        target.push_back(op.src);
        break;
      case Operation::kGenSrcOnly:
        if (op.src.empty()) fail(i, "empty payload");
        slots.insert(ins, {false, op.src, -1, i});
        break;
      case Operation::kGenTgtOnly:
        if (op.tgt.empty()) fail(i, "empty payload");
        target.push_back(op.tgt);
        break;
    }
  }

  SentencePair pair;
  pair.alignment.emplace();
  for (const auto& node : slots) {
    if (node.marker)
      throw DataError("operation " + std::to_string(node.op) +
                      ": gap never closed by a jump");
    if (node.tgt >= 0)
      pair.alignment->push_back({static_cast<uint32_t>(pair.source.size()),
                                 static_cast<uint32_t>(node.tgt)});
    pair.source.push_back(node.src);
  }
  pair.target = std::move(target);
  return pair;
}

std::vector<std::string> osm_corpus(const std::vector<SentencePair>& pairs) {
  std::vector<std::string> lines;
  lines.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      auto ops = osm_encode(pairs[i]);
      std::vector<std::string> tokens;
      tokens.reserve(ops.size());
      for (const auto& op : ops) tokens.push_back(op.serialize());
      lines.push_back(join(tokens, " "));
    } catch (const DataError& e) {
      throw DataError("pair " + std::to_string(i) + ": " + e.what());
    }
  }
  return lines;
}

}  // namespace adaptkit
