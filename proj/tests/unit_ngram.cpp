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

#include <cmath>
#include <sstream>

#include "adaptkit/errors.hpp"
#include "adaptkit/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace adaptkit;

namespace {

NgramModel train(const std::vector<std::vector<std::string>>& lines, int order) {
  NgramCounts counts(order);
  for (const auto& line : lines) counts.add_sentence(line);
  return NgramModel::estimate(counts);
}

std::string to_arpa_string(const NgramModel& model) {
  std::ostringstream out;
  model.to_arpa(out);
  return out.str();
}

}  // namespace

TEST_SUITE("ngram") {

TEST_CASE("counting pads one sentence marker per side") {
  NgramCounts counts(2);
  counts.add_sentence({"a", "b"});
  CHECK(counts.count({"<s>", "a"}) == 1);
  CHECK(counts.count({"a", "b"}) == 1);
  CHECK(counts.count({"b", "</s>"}) == 1);
  CHECK(counts.count({"a"}) == 1);
  CHECK(counts.count({"</s>"}) == 1);
  CHECK(counts.count({"<s>"}) == 0);  // never predicted
  CHECK(counts.distinct(2) == 3);
}

TEST_CASE("order-1 counting") {
  NgramCounts counts(1);
  counts.add_sentence({"a", "a"});
  CHECK(counts.count({"a"}) == 2);
  CHECK(counts.count({"</s>"}) == 1);
  CHECK(counts.distinct(1) == 2);
}

TEST_CASE("count of counts") {
  NgramCounts counts(1);
  counts.add_sentence({"a", "a", "b"});
  // a:2 b:1 </s>:1
  auto n = counts.count_of_counts(1);
  CHECK(n[0] == 2);
  CHECK(n[1] == 1);
  CHECK(n[2] == 0);
  CHECK(n[3] == 0);
}

TEST_CASE("merging shards equals counting the whole corpus") {
  Rng rng(13);
  auto vocab = oracles::make_vocab("w", 15);
  auto corpus = oracles::random_corpus(rng, vocab, 60, 1, 9);

  NgramCounts whole(3);
  for (const auto& line : corpus) whole.add_sentence(line);

  NgramCounts a(3), b(3);
  for (std::size_t i = 0; i < corpus.size(); ++i)
    (i % 2 ? a : b).add_sentence(corpus[i]);
  a.merge(b);

  for (int k = 1; k <= 3; ++k) CHECK(a.distinct(k) == whole.distinct(k));
  for (const auto& line : corpus)
    for (std::size_t i = 0; i + 1 < line.size(); ++i)
      CHECK(a.count({line[i], line[i + 1]}) ==
            whole.count({line[i], line[i + 1]}));
  // identical models from identical counts
  CHECK(to_arpa_string(NgramModel::estimate(a)) ==
        to_arpa_string(NgramModel::estimate(whole)));
}

// Corpus ["a b", "a b"], order 2, worked by hand.
//
// Bigram counts are all 2, so n1..n4 = (0,3,0,0) forces the single-discount
// fallback D = 0.75. For p(b|a): (2 - 0.75)/2 + bow(a) * p(b) with
// bow(a) = 0.75 * 1/2 = 0.375. Unigram continuation counts are 1 for each
// of a, b, </s>, so n1 = 3 gives <unk> a mass of 3 and again the fallback
// discount; with A = 6 and uniform interpolation over 4 event types:
// p(a) = p(b) = p(</s>) = 0.25/6 + (0.75*4/6)/4 = 1/6 and p(<unk>) = 0.5.
// Hence p(b|a) = 0.625 + 0.375/6 = 0.6875.
TEST_CASE("kneser-ney fixture matches the hand derivation") {
  auto model = train({{"a", "b"}, {"a", "b"}}, 2);

  double logp;
  REQUIRE(model.stored({"a", "b"}, &logp));
  CHECK(logp == doctest::Approx(std::log10(0.6875)).epsilon(1e-12));
  REQUIRE(model.stored({"a"}, &logp));
  CHECK(logp == doctest::Approx(std::log10(1.0 / 6.0)).epsilon(1e-12));
  REQUIRE(model.stored({"<unk>"}, &logp));
  CHECK(logp == doctest::Approx(std::log10(0.5)).epsilon(1e-12));

  double bow;
  REQUIRE(model.stored({"a"}, &logp, &bow));
  CHECK(bow == doctest::Approx(std::log10(0.375)).epsilon(1e-12));
}

TEST_CASE("kneser-ney fixture exports exact arpa bytes") {
  auto model = train({{"a", "b"}, {"a", "b"}}, 2);
  CHECK(to_arpa_string(model) ==
        "\\data\\\n"
        "ngram 1=5\n"
        "ngram 2=3\n"
        "\n"
        "\\1-grams:\n"
        "-0.778151250384\t</s>\t0\n"
        "-99\t<s>\t-0.425968732272\n"
        "-0.301029995664\t<unk>\t0\n"
        "-0.778151250384\ta\t-0.425968732272\n"
        "-0.778151250384\tb\t-0.425968732272\n"
        "\n"
        "\\2-grams:\n"
        "-0.162727297498\t<s> a\n"
        "-0.162727297498\ta b\n"
        "-0.162727297498\tb </s>\n"
        "\n"
        "\\end\\\n");
}

TEST_CASE("order-1 estimation with top-level raw counts") {
  auto model = train({{"a", "a"}}, 1);
  // raw counts a:2, </s>:1; n1 = 1 so <unk> mass 1; fallback D = 0.75;
  // A = 4, uniform over {a, </s>, <unk>}.
  CHECK(model.logprob({}, "a") == doctest::Approx(std::log10(0.5)).epsilon(1e-12));
  CHECK(model.logprob({}, "</s>") ==
        doctest::Approx(std::log10(0.25)).epsilon(1e-12));
  CHECK(model.logprob({}, "<unk>") ==
        doctest::Approx(std::log10(0.25)).epsilon(1e-12));
}

TEST_CASE("conditional distributions sum to one") {
  Rng rng(29);
  auto vocab = oracles::make_vocab("v", 12);
  auto model = train(oracles::random_corpus(rng, vocab, 80, 1, 7), 3);

  std::vector<std::string> events = vocab;
  events.push_back("</s>");
  events.push_back("<unk>");

  std::vector<std::vector<std::string>> contexts = {
      {},
      {"<s>"},
      {"v0"},
      {"v0", "v1"},
      {"<s>", "v3"},
      {"zzz-unseen"},
      {"v5", "zzz-unseen"},
      {"v1", "v1"},
  };
  for (const auto& context : contexts) {
    double sum = 0.0;
    for (const auto& w : events) sum += std::pow(10.0, model.logprob(context, w));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("model agrees with an independent backoff walker") {
  Rng rng(31);
  auto vocab = oracles::make_vocab("w", 25);
  auto train_corpus = oracles::random_corpus(rng, vocab, 150, 1, 10);
  auto model = train(train_corpus, 3);

  auto wide = oracles::make_vocab("w", 32);  // last 7 are OOV
  auto eval_corpus = oracles::random_corpus(rng, wide, 30, 1, 10);

  auto walker = oracles::ArpaWalker::parse(to_arpa_string(model));
  PplResult mine = model.perplexity(eval_corpus);

  double logprob;
  uint64_t tokens, oov;
  walker.score(eval_corpus, &logprob, &tokens, &oov);
  CHECK(tokens == mine.tokens);
  CHECK(oov == mine.oov);
  CHECK(mine.logprob ==
        doctest::Approx(logprob).epsilon(1e-9));
}

TEST_CASE("arpa round-trip is byte identical") {
  Rng rng(37);
  auto vocab = oracles::make_vocab("t", 18);
  auto model = train(oracles::random_corpus(rng, vocab, 90, 1, 8), 3);
  std::string first = to_arpa_string(model);
  std::istringstream in(first);
  auto reloaded = NgramModel::from_arpa(in);
  CHECK(to_arpa_string(reloaded) == first);
}

TEST_CASE("arpa import tolerates optional backoff and blank lines") {
  std::string text =
      "\\data\\\n"
      "ngram 1=3\n"
      "ngram 2=1\n"
      "\n"
      "\\1-grams:\n"
      "-0.5\t</s>\n"
      "\n"
      "-99\t<s>\t-0.3\n"
      "-0.4\ta\n"
      "\n"
      "\\2-grams:\n"
      "-0.2\t<s> a\n"
      "\n"
      "\\end\\\n";
  std::istringstream in(text);
  auto model = NgramModel::from_arpa(in);
  CHECK(model.order() == 2);
  double logp, bow;
  REQUIRE(model.stored({"a"}, &logp, &bow));
  CHECK(logp == -0.4);
  CHECK(bow == 0.0);
}

TEST_CASE("arpa import reports line numbers on malformed input") {
  std::string bad =
      "\\data\\\n"
      "ngram 1=2\n"
      "\n"
      "\\1-grams:\n"
      "-0.5\t</s>\n"
      "oops\ta\n"
      "\\end\\\n";
  CHECK(oracles::throws_with<ParseError>(
      [&] {
        std::istringstream in(bad);
        NgramModel::from_arpa(in);
      },
      "line 6"));
}

TEST_CASE("arpa import rejects duplicate entries") {
  std::string bad =
      "\\data\\\n"
      "ngram 1=2\n"
      "\n"
      "\\1-grams:\n"
      "-0.5\t</s>\n"
      "-0.6\t</s>\n"
      "\\end\\\n";
  CHECK(oracles::throws_with<ParseError>(
      [&] {
        std::istringstream in(bad);
        NgramModel::from_arpa(in);
      },
      "duplicate"));
}

TEST_CASE("perplexity counts events and OOVs") {
  auto model = train({{"a", "b"}, {"a", "b"}}, 2);
  PplResult r = model.perplexity({{"a", "b"}, {"q"}});
  CHECK(r.tokens == 5);  // 2 + </s> + 1 + </s>
  CHECK(r.oov == 1);
  CHECK(r.ppl > 1.0);
  CHECK_THROWS_AS(model.perplexity({}), DataError);

  std::vector<double> probs;
  uint64_t oov = 0;
  model.line_logprobs({"a", "zzz"}, &probs, &oov);
  CHECK(probs.size() == 3);
  CHECK(oov == 1);
}

TEST_CASE("start symbol is structural only") {
  auto model = train({{"a", "b"}, {"a", "b"}}, 2);
  CHECK(model.logprob({}, "<s>") == -99.0);
  // but it carries a usable backoff weight
  double logp, bow;
  REQUIRE(model.stored({"<s>"}, &logp, &bow));
  CHECK(bow < 0.0);
}

TEST_CASE("estimation is deterministic") {
  Rng rng(41);
  auto vocab = oracles::make_vocab("d", 10);
  auto corpus = oracles::random_corpus(rng, vocab, 50, 1, 6);
  CHECK(to_arpa_string(train(corpus, 3)) == to_arpa_string(train(corpus, 3)));
}

}  // TEST_SUITE
