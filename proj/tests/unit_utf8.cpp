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

#include "adaptkit/utf8.hpp"

#include "adaptkit/errors.hpp"
#include "adaptkit/rng.hpp"
#include "adaptkit/vocab.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace adaptkit;

TEST_SUITE("utf8") {

TEST_CASE("decode handles 1..4 byte sequences") {
  // "a", U+0627 (2 bytes), U+20AC (3 bytes), U+1F600 (4 bytes)
  std::string text = "a\xD8\xA7\xE2\x82\xAC\xF0\x9F\x98\x80";
  CHECK(utf8::decode(text) ==
        std::vector<utf8::CodePoint>{0x61, 0x0627, 0x20AC, 0x1F600});
  CHECK(utf8::decode("").empty());
}

TEST_CASE("encode is the inverse of decode") {
  Rng rng(103);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<utf8::CodePoint> cps;
    std::size_t len = rng.next_below(20);
    for (std::size_t i = 0; i < len; ++i) {
      utf8::CodePoint cp;
      do {
        cp = static_cast<utf8::CodePoint>(rng.next_below(0x110000));
      } while (cp >= 0xD800 && cp <= 0xDFFF);  // no surrogates
      cps.push_back(cp);
    }
    CHECK(utf8::decode(utf8::encode(cps)) == cps);
  }
}

TEST_CASE("malformed input names the byte offset") {
  using oracles::throws_with;
  // truncated 2-byte sequence
  CHECK(throws_with<DataError>([] { utf8::decode("ab\xD8"); }, "byte offset 2"));
  // stray continuation byte at the start
  CHECK(throws_with<DataError>([] { utf8::decode("\x80m"); }, "byte offset 0"));
  // bad continuation inside a 3-byte sequence
  CHECK(throws_with<DataError>([] { utf8::decode("x\xE2\x41\x82"); },
                               "byte offset 1"));
  // overlong encoding of '/'
  CHECK(throws_with<DataError>([] { utf8::decode("\xC0\xAF"); },
                               "byte offset 0"));
}

}  // TEST_SUITE

TEST_SUITE("vocab") {

TEST_CASE("reserved tokens occupy the first three ids") {
  Vocabulary vocab;
  CHECK(vocab.size() == 3);
  CHECK(vocab.token(Vocabulary::kUnk) == "<unk>");
  CHECK(vocab.token(Vocabulary::kBos) == "<s>");
  CHECK(vocab.token(Vocabulary::kEos) == "</s>");
  CHECK(vocab.lookup("<s>") == Vocabulary::kBos);
}

TEST_CASE("add assigns dense ids and tracks frequencies") {
  Vocabulary vocab;
  auto a = vocab.add("alpha");
  auto b = vocab.add("beta");
  CHECK(a == 3);
  CHECK(b == 4);
  CHECK(vocab.add("alpha") == a);
  CHECK(vocab.freq(a) == 2);
  CHECK(vocab.freq(b) == 1);
  CHECK(vocab.size() == 5);
}

TEST_CASE("lookups fall back to the unknown id") {
  Vocabulary vocab;
  vocab.add("seen");
  CHECK(vocab.lookup("unseen") == std::nullopt);
  CHECK(vocab.lookup_or_unk("unseen") == Vocabulary::kUnk);
  CHECK(vocab.lookup_or_unk("seen") == *vocab.lookup("seen"));
  CHECK(vocab.contains("seen"));
  CHECK(!vocab.contains("unseen"));
}

}  // TEST_SUITE
