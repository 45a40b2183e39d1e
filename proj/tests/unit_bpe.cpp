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

#include "adaptkit/bpe.hpp"

#include <sstream>

#include "adaptkit/errors.hpp"
#include "adaptkit/rng.hpp"
#include "adaptkit/util.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace adaptkit;

namespace {

const std::map<std::string, uint64_t> kFixture = {
    {"low", 5}, {"lower", 2}, {"newest", 6}, {"widest", 3}};

}  // namespace

TEST_SUITE("bpe") {

TEST_CASE("first merge on the classic fixture") {
  auto model = bpe_learn(kFixture, 1);
  REQUIRE(model.merges.size() == 1);
  // ("e","s") and ("s","t</w>") both occur 9 times; the tie breaks
  // lexicographically.
  CHECK(model.merges[0] == std::pair<std::string, std::string>{"e", "s"});
}

TEST_CASE("learned merges match the brute-force oracle") {
  auto expected = oracles::bpe_oracle(kFixture, 10);
  auto model = bpe_learn(kFixture, 10);
  CHECK(model.merges == expected);

  Rng rng(67);
  std::map<std::string, uint64_t> random_freqs;
  const std::string alphabet = "abcdef";
  for (int i = 0; i < 60; ++i) {
    std::string word;
    std::size_t len = 1 + rng.next_below(8);
    for (std::size_t j = 0; j < len; ++j)
      word += alphabet[rng.next_below(alphabet.size())];
    random_freqs[word] += 1 + rng.next_below(20);
  }
  CHECK(bpe_learn(random_freqs, 40).merges ==
        oracles::bpe_oracle(random_freqs, 40));
}

TEST_CASE("learning stops when no pair repeats") {
  std::map<std::string, uint64_t> freqs{{"ab", 1}, {"cd", 1}};
  CHECK(bpe_learn(freqs, 100).merges.empty());
  CHECK_THROWS_AS(bpe_learn({}, 5), DataError);
}

TEST_CASE("codes round-trip with a version header") {
  auto model = bpe_learn(kFixture, 6);
  std::ostringstream out;
  model.save(out);
  CHECK(out.str().rfind("#version: 0.2\n", 0) == 0);
  std::istringstream in(out.str());
  auto reloaded = BpeModel::load(in);
  CHECK(reloaded.merges == model.merges);
}

TEST_CASE("apply marks continuations and strips the end marker") {
  auto model = bpe_learn(kFixture, 2);  // ("e","s"), ("es","t</w>")
  BpeApplier applier(model);
  CHECK(applier.apply_word("newest") ==
        std::vector<std::string>{"n@@", "e@@", "w@@", "est"});
  // repeated application of the cache path is identical
  CHECK(applier.apply_word("newest") ==
        std::vector<std::string>{"n@@", "e@@", "w@@", "est"});
  // unseen characters survive as singletons
  CHECK(applier.apply_word("zz") == std::vector<std::string>{"z@@", "z"});
}

TEST_CASE("undo inverts apply on random text") {
  Rng rng(71);
  std::vector<std::string> lines;
  const std::string alphabet = "abcdefgh";
  for (int i = 0; i < 300; ++i) {
    std::string line;
    std::size_t words = 1 + rng.next_below(9);
    for (std::size_t w = 0; w < words; ++w) {
      if (w > 0) line += ' ';
      std::size_t len = 1 + rng.next_below(10);
      for (std::size_t j = 0; j < len; ++j)
        line += alphabet[rng.next_below(alphabet.size())];
    }
    lines.push_back(line);
  }
  BpeApplier applier(bpe_learn_lines(lines, 50));
  uint64_t warnings = 0;
  for (const auto& line : lines) {
    auto segmented = applier.apply_line(split_ws(line));
    auto restored = bpe_undo_line(segmented, &warnings);
    CHECK(join(restored, " ") == line);
  }
  CHECK(warnings == 0);
}

TEST_CASE("undo strips dangling continuation markers with a warning") {
  uint64_t warnings = 0;
  auto restored = bpe_undo_line({"lo@@", "w", "trail@@"}, &warnings);
  CHECK(restored == std::vector<std::string>{"low", "trail"});
  CHECK(warnings == 1);
}

TEST_CASE("empty lines pass through") {
  BpeApplier applier(bpe_learn(kFixture, 3));
  CHECK(applier.apply_line({}).empty());
  CHECK(bpe_undo_line({}).empty());
}

TEST_CASE("multibyte symbols stay intact") {
  std::map<std::string, uint64_t> freqs{{"\xD9\x83\xD8\xAA\xD8\xA7\xD8\xA8", 4}};
  auto model = bpe_learn(freqs, 3);
  BpeApplier applier(model);
  auto units = applier.apply_word("\xD9\x83\xD8\xAA\xD8\xA7\xD8\xA8");
  std::string rebuilt;
  for (const auto& u : units)
    rebuilt += ends_with(u, "@@") ? u.substr(0, u.size() - 2) : u;
  CHECK(rebuilt == "\xD9\x83\xD8\xAA\xD8\xA7\xD8\xA8");
}

TEST_CASE("malformed code files report their line") {
  std::istringstream in("#version: 0.2\na b\nonefield\n");
  CHECK(oracles::throws_with<ParseError>([&] { BpeModel::load(in); }, "line 3"));
}

}  // TEST_SUITE
