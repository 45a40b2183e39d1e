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

#include "adaptkit/pipeline.hpp"

#include <unistd.h>

#include <filesystem>
#include <sstream>

#include "adaptkit/errors.hpp"
#include "adaptkit/sha256.hpp"
#include "adaptkit/util.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace adaptkit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;

  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("adaptkit-ut-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }

  std::string file(const std::string& name,
                   const std::vector<std::string>& lines) const {
    auto p = (path / name).string();
    atomic_write(p, lines.empty() ? "" : join(lines, "\n") + "\n");
    return p;
  }
};

PipelineConfig parse_str(const std::string& text) {
  std::istringstream in(text);
  return PipelineConfig::parse(in);
}

// Manifest rows as {stage, path, sha256} triples.
std::vector<std::vector<std::string>> read_manifest(const fs::path& out) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& line : read_lines((out / "manifest.tsv").string())) {
    std::vector<std::string> row;
    std::size_t start = 0;
    for (std::size_t tab = line.find('\t'); tab != std::string::npos;
         tab = line.find('\t', start)) {
      row.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    row.push_back(line.substr(start));
    rows.push_back(row);
  }
  return rows;
}

void expect_invalid(const std::string& config_text, const std::string& needle) {
  auto config = parse_str(config_text);
  TempDir tmp;
  fs::path out = tmp.path / "out";
  CHECK(oracles::throws_with<ConfigError>(
      [&] { run_pipeline(config, out.string()); }, needle));
  CHECK(!fs::exists(out));
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("configs parse into corpora, stages and globals") {
  auto config = parse_str(
      "# comment\n"
      "seed 7\r\n"
      "\n"
      "[corpus ted]\n"
      "role\tin-domain\n"
      "src data/ted.ar\n"
      "tgt data/ted.en\n"
      "align data/ted.align\n"
      "[stage filter]\n"
      "max_len 50\n"
      "[stage train_lm]\n"
      "corpus ted\n"
      "side tgt\n"
      "order 3\n"
      "name base\n");
  CHECK(config.seed == 7);
  REQUIRE(config.corpora.size() == 1);
  CHECK(config.corpora[0].name == "ted");
  CHECK(config.corpora[0].role == "in-domain");
  CHECK(config.corpora[0].align == "data/ted.align");
  REQUIRE(config.stages.size() == 2);
  CHECK(config.stages[0].type == "filter");
  CHECK(config.stages[0].params.at("max_len") == "50");
  CHECK(config.stages[1].params.at("name") == "base");

  CHECK(parse_str("").seed == 42);  // default
}

TEST_CASE("parse errors carry the offending line number") {
  using oracles::throws_with;
  auto parse_fails = [](const std::string& text, const std::string& needle) {
    return oracles::throws_with<ConfigError>([&] { parse_str(text); }, needle);
  };
  CHECK(parse_fails("justakey\n", "config line 1: expected 'key value'"));
  CHECK(parse_fails("[corpus c\n", "config line 1: unterminated"));
  CHECK(parse_fails("[corpus]\n", "section header must be"));
  CHECK(parse_fails("[model x]\n", "unknown section 'model'"));
  CHECK(parse_fails("verbosity 3\n", "unknown global key 'verbosity'"));
  CHECK(parse_fails("seed x1\n", "must be a non-negative integer"));
  CHECK(parse_fails("[corpus c]\nsrc a\nsrc b\n",
                    "config line 3: duplicate corpus key 'src'"));
  CHECK(parse_fails("[stage filter]\nmax_len 1\nmax_len 2\n",
                    "config line 3: duplicate stage parameter"));
  CHECK(parse_fails("seed \n", "expected 'key value'"));
}

TEST_CASE("validation rejects bad configs before touching the disk") {
  const std::string corpus =
      "[corpus a]\nrole in-domain\nsrc a.src\ntgt a.tgt\n";
  expect_invalid(corpus + "[stage explode]\n", "unknown stage type 'explode'");
  expect_invalid(corpus + "[stage tokenize]\nbogus 1\n",
                 "stage 1 (tokenize): unknown parameter 'bogus'");
  expect_invalid(corpus + "[stage mml_select]\n",
                 "missing required parameter 'fraction'");
  expect_invalid(corpus +
                     "[corpus o]\nrole out-domain\nsrc o.src\ntgt o.tgt\n"
                     "[stage mml_select]\nfraction 1.5\n",
                 "fraction must be in (0, 1]");
  expect_invalid(corpus + "[stage train_lm]\ncorpus ghost\nname m\n",
                 "references unknown corpus 'ghost'");
  expect_invalid(corpus + "[stage interpolate]\nmodels a,b\nname m\n",
                 "unknown model 'a'");
  expect_invalid(
      corpus +
          "[stage train_lm]\ncorpus a\nname m1\n"
          "[stage train_lm]\ncorpus a\nname m2\n"
          "[stage interpolate]\nmodels m1,m2\nname mix\n",
      "needs a tune corpus or an explicit");
  expect_invalid(corpus + "[corpus a]\nrole tune\nsrc b.src\ntgt b.tgt\n",
                 "duplicate corpus 'a'");
  expect_invalid(corpus +
                     "[corpus t1]\nrole tune\nsrc 1.src\ntgt 1.tgt\n"
                     "[corpus t2]\nrole tune\nsrc 2.src\ntgt 2.tgt\n",
                 "at most one tune corpus");
  expect_invalid("[corpus a]\nrole boss\nsrc a.src\ntgt a.tgt\n",
                 "unknown role 'boss'");
  expect_invalid("[corpus a]\nrole tune\nsrc a.src\n",
                 "needs src and tgt paths");
  expect_invalid(corpus + "[stage classes]\ncorpus a\nside tgt\nk 0\n",
                 "k must be at least 1");
  expect_invalid(corpus + "[stage bleu]\nhyp a.ar\nref a.tgt\n",
                 "side must be src or tgt");
}

TEST_CASE("missing input files fail before any stage runs") {
  TempDir tmp;
  auto src = tmp.file("a.src", {"x"});
  auto config = parse_str("[corpus a]\nrole in-domain\nsrc " + src + "\ntgt " +
                          (tmp.path / "a.tgt").string() +
                          "\n[stage tokenize]\n");
  fs::path out = tmp.path / "out";
  CHECK(oracles::throws_with<DataError>(
      [&] { run_pipeline(config, out.string()); }, "input file not found"));
  CHECK(!fs::exists(out));
}

TEST_CASE("corpus line-count mismatches are reported") {
  TempDir tmp;
  auto src = tmp.file("a.src", {"one", "two"});
  auto tgt = tmp.file("a.tgt", {"one"});
  auto config = parse_str("[corpus a]\nrole in-domain\nsrc " + src + "\ntgt " +
                          tgt + "\n[stage tokenize]\n");
  CHECK(oracles::throws_with<DataError>(
      [&] { run_pipeline(config, (tmp.path / "out").string()); },
      "2 source lines vs 1 target lines"));
}

TEST_CASE("runs are bit-identical and manifests list valid digests") {
  TempDir tmp;
  std::vector<std::string> ted_src, ted_tgt;
  for (int i = 0; i < 12; ++i) {
    ted_src.push_back("s" + std::to_string(i % 4) + " s" +
                      std::to_string(i % 3) + " end.");
    ted_tgt.push_back("t" + std::to_string(i % 4) + " t" +
                      std::to_string(i % 3) + " stop.");
  }
  auto config_text =
      "seed 9\n"
      "[corpus ted]\nrole in-domain\nsrc " + tmp.file("ted.src", ted_src) +
      "\ntgt " + tmp.file("ted.tgt", ted_tgt) +
      "\n[corpus dev]\nrole tune\nsrc " +
      tmp.file("dev.src", {"s1 s2", "s0 end."}) + "\ntgt " +
      tmp.file("dev.tgt", {"t1 t2", "t0 stop."}) +
      "\n[stage tokenize]\n"
      "[stage filter]\nmax_len 20\n"
      "[stage train_lm]\ncorpus ted\nside tgt\norder 2\nname lm\n"
      "[stage bleu]\nhyp dev.tgt\nref dev.tgt\n";
  auto config = parse_str(config_text);

  fs::path run1 = tmp.path / "run1";
  fs::path run2 = tmp.path / "run2";
  run_pipeline(config, run1.string());
  run_pipeline(config, run2.string());

  CHECK(read_file((run1 / "manifest.tsv").string()) ==
        read_file((run2 / "manifest.tsv").string()));

  auto rows = read_manifest(run1);
  CHECK(rows.size() == 8);  // 4 tokenize + 2 filter + 1 arpa + 1 bleu
  for (const auto& row : rows) {
    REQUIRE(row.size() == 3);
    CHECK(sha256_file((run1 / row[1]).string()) == row[2]);
    CHECK(read_file((run1 / row[1]).string()) ==
          read_file((run2 / row[1]).string()));
  }
  CHECK(rows.front()[0] == "01_tokenize");
  CHECK(rows.back()[1] == "04_bleu/bleu.txt");
  CHECK(starts_with(read_file((run1 / "04_bleu" / "bleu.txt").string()),
                    "BLEU = 100.0"));
}

TEST_CASE("artifacts of completed stages survive a later failure") {
  TempDir tmp;
  auto config = parse_str(
      "[corpus ted]\nrole in-domain\nsrc " +
      tmp.file("ted.src", {"a b", "c d"}) + "\ntgt " +
      tmp.file("ted.tgt", {"x y", "z w"}) +
      "\n[stage tokenize]\n"
      "[stage filter]\nmax_len 1\n"  // drops every pair
      "[stage train_lm]\ncorpus ted\nside tgt\norder 2\nname lm\n");
  fs::path out = tmp.path / "out";
  CHECK(oracles::throws_with<DataError>(
      [&] { run_pipeline(config, out.string()); }, "has no sentences"));

  auto rows = read_manifest(out);
  CHECK(rows.size() == 4);  // 2 tokenize + 2 filter, nothing from train_lm
  for (const auto& row : rows) {
    CHECK(row[0] != "03_train_lm");
    CHECK(fs::exists(out / row[1]));
  }
  // the filtered corpus is really empty
  CHECK(read_file((out / "02_filter" / "ted.tgt").string()).empty());
}

}  // TEST_SUITE
