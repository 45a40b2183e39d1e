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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "adaptkit/bpe.hpp"
#include "adaptkit/classes.hpp"
#include "adaptkit/errors.hpp"
#include "adaptkit/evalkit.hpp"
#include "adaptkit/mixture.hpp"
#include "adaptkit/ngram.hpp"
#include "adaptkit/oov.hpp"
#include "adaptkit/osm.hpp"
#include "adaptkit/rng.hpp"
#include "adaptkit/selection.hpp"
#include "adaptkit/sha256.hpp"
#include "adaptkit/text.hpp"
#include "adaptkit/util.hpp"

namespace fs = std::filesystem;

namespace adaptkit {

namespace {

const std::set<std::string> kRoles = {"in-domain", "out-domain", "tune", "test"};

// Allowed parameter keys per stage type; unknown keys are configuration
// errors so typos fail fast instead of silently using a default.
const std::map<std::string, std::set<std::string>>& stage_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"normalize", {"rules", "corpora", "sides"}},
      {"tokenize", {"corpora", "sides"}},
      {"filter", {"max_len", "corpora"}},
      {"mml_select", {"fraction", "order", "name", "in", "out", "bilingual"}},
      {"train_lm", {"corpus", "side", "order", "name"}},
      {"interpolate", {"models", "tune", "side", "name", "merge"}},
      {"osm_encode", {"corpus", "name"}},
      {"classes", {"corpus", "side", "k", "name"}},
      {"class_apply", {"corpus", "side", "map"}},
      {"bpe_learn", {"corpus", "side", "merges", "name"}},
      {"bpe_apply", {"corpus", "side", "codes"}},
      {"oov", {"corpus", "side", "mode", "vocab", "vocab_from", "table"}},
      {"bleu", {"hyp", "ref", "normalize", "name"}},
  };
  return keys;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

uint64_t to_u64(const std::string& v, const std::string& what) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError(what + " must be a non-negative integer, got '" + v + "'");
  try {
    return std::stoull(v);
  } catch (const std::logic_error&) {
    throw ConfigError(what + " out of range: '" + v + "'");
  }
}

double to_double(const std::string& v, const std::string& what) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw ConfigError(what + " is not a number: '" + v + "'");
    return d;
  } catch (const std::logic_error&) {
    throw ConfigError(what + " is not a number: '" + v + "'");
  }
}

bool to_bool(const std::string& v, const std::string& what) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(what + " must be true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    std::size_t comma = v.find(',', pos);
    if (comma == std::string::npos) comma = v.size();
    std::string item = trim(v.substr(pos, comma - pos));
    if (!item.empty()) out.push_back(item);
    pos = comma + 1;
  }
  return out;
}

// Helpers shared by static validation and execution, so the names the
// validator predicts are exactly the names the runner creates.

std::string param(const PipelineConfig::StageDecl& stage, const std::string& key,
                  const std::string& fallback = "") {
  auto it = stage.params.find(key);
  return it == stage.params.end() ? fallback : it->second;
}

std::string default_artifact_name(const PipelineConfig::StageDecl& stage) {
  std::string corpus = param(stage, "corpus");
  std::replace(corpus.begin(), corpus.end(), ',', '_');
  const std::string side = param(stage, "side", "tgt");
  if (stage.type == "mml_select") return param(stage, "name", "selected");
  if (stage.type == "train_lm")
    return param(stage, "name", corpus + "_" + side);
  if (stage.type == "interpolate") return param(stage, "name", "interpolated");
  if (stage.type == "osm_encode") return param(stage, "name", corpus + "_ops");
  if (stage.type == "classes")
    return param(stage, "name", corpus + "_" + side + "_classes");
  if (stage.type == "bpe_learn")
    return param(stage, "name", corpus + "_" + side + "_codes");
  if (stage.type == "bleu") return param(stage, "name", "bleu");
  return "";
}

struct SideRef {
  std::string corpus;
  std::string side;
};

SideRef parse_side_ref(const std::string& v, const std::string& what) {
  auto dot = v.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == v.size())
    throw ConfigError(what + " must be <corpus>.<side>, got '" + v + "'");
  SideRef ref{v.substr(0, dot), v.substr(dot + 1)};
  if (ref.side != "src" && ref.side != "tgt")
    throw ConfigError(what + " side must be src or tgt, got '" + ref.side + "'");
  return ref;
}

// Static checks over the whole config: roles, parameter ranges, and every
// cross-stage reference, simulating the corpora and artifacts each stage
// will create. Nothing runs until this passes.
void validate(const PipelineConfig& config) {
  std::map<std::string, bool> corpora_aligned;  // name -> has alignment
  std::set<std::string> roles_seen_tune;
  std::size_t in_domain = 0, out_domain = 0, tune_count = 0;

  for (const auto& c : config.corpora) {
    if (!valid_name(c.name))
      throw ConfigError("invalid corpus name '" + c.name + "'");
    if (corpora_aligned.count(c.name))
      throw ConfigError("duplicate corpus '" + c.name + "'");
    if (!kRoles.count(c.role))
      throw ConfigError("corpus '" + c.name + "': unknown role '" + c.role + "'");
    if (c.src.empty() || c.tgt.empty())
      throw ConfigError("corpus '" + c.name + "' needs src and tgt paths");
    corpora_aligned[c.name] = !c.align.empty();
    if (c.role == "in-domain") ++in_domain;
    if (c.role == "out-domain") ++out_domain;
    if (c.role == "tune") ++tune_count;
  }
  if (tune_count > 1) throw ConfigError("at most one tune corpus is allowed");

  std::set<std::string> lms, codes, maps;

  auto need_corpus = [&](const std::string& name, const std::string& what) {
    if (!corpora_aligned.count(name))
      throw ConfigError(what + " references unknown corpus '" + name + "'");
  };

  for (std::size_t i = 0; i < config.stages.size(); ++i) {
    const auto& stage = config.stages[i];
    const std::string where = "stage " + std::to_string(i + 1) + " (" +
                              stage.type + ")";
    auto allowed = stage_keys().find(stage.type);
    if (allowed == stage_keys().end())
      throw ConfigError("unknown stage type '" + stage.type + "'");
    for (const auto& [key, value] : stage.params) {
      if (!allowed->second.count(key))
        throw ConfigError(where + ": unknown parameter '" + key + "'");
      if (value.empty())
        throw ConfigError(where + ": empty value for '" + key + "'");
    }

    auto require = [&](const std::string& key) {
      if (!stage.params.count(key))
        throw ConfigError(where + ": missing required parameter '" + key + "'");
    };
    auto check_side = [&](const std::string& v) {
      if (v != "src" && v != "tgt")
        throw ConfigError(where + ": side must be src or tgt, got '" + v + "'");
    };
    auto check_targets = [&]() {
      for (const auto& name : split_list(param(stage, "corpora")))
        need_corpus(name, where);
    };

    if (stage.type == "normalize" || stage.type == "tokenize") {
      check_targets();
      const std::string sides = param(stage, "sides", "both");
      if (sides != "src" && sides != "tgt" && sides != "both")
        throw ConfigError(where + ": sides must be src, tgt or both");
    } else if (stage.type == "filter") {
      check_targets();
      if (to_u64(param(stage, "max_len", "80"), where + ": max_len") < 1)
        throw ConfigError(where + ": max_len must be at least 1");
    } else if (stage.type == "mml_select") {
      require("fraction");
      double f = to_double(stage.params.at("fraction"), where + ": fraction");
      if (!(f > 0.0 && f <= 1.0))
        throw ConfigError(where + ": fraction must be in (0, 1]");
      if (to_u64(param(stage, "order", "5"), where + ": order") < 1)
        throw ConfigError(where + ": order must be at least 1");
      if (stage.params.count("bilingual"))
        to_bool(stage.params.at("bilingual"), where + ": bilingual");
      bool aligned = true;
      if (stage.params.count("in")) {
        for (const auto& name : split_list(stage.params.at("in")))
          need_corpus(name, where + ": in");
      } else if (in_domain == 0) {
        throw ConfigError(where + ": no in-domain corpus declared");
      }
      if (stage.params.count("out")) {
        need_corpus(stage.params.at("out"), where + ": out");
        aligned = corpora_aligned[stage.params.at("out")];
      } else if (out_domain != 1) {
        throw ConfigError(where + ": needs exactly one out-domain corpus or "
                          "an explicit out parameter");
      } else {
        for (const auto& c : config.corpora)
          if (c.role == "out-domain") aligned = !c.align.empty();
      }
      const std::string name = default_artifact_name(stage);
      if (!valid_name(name))
        throw ConfigError(where + ": invalid artifact name '" + name + "'");
      if (corpora_aligned.count(name))
        throw ConfigError(where + ": corpus '" + name + "' already exists");
      corpora_aligned[name] = aligned;
    } else if (stage.type == "train_lm") {
      require("corpus");
      for (const auto& name : split_list(stage.params.at("corpus")))
        need_corpus(name, where);
      check_side(param(stage, "side", "tgt"));
      if (to_u64(param(stage, "order", "5"), where + ": order") < 1)
        throw ConfigError(where + ": order must be at least 1");
      const std::string name = default_artifact_name(stage);
      if (!valid_name(name))
        throw ConfigError(where + ": invalid artifact name '" + name + "'");
      if (!lms.insert(name).second)
        throw ConfigError(where + ": model '" + name + "' already exists");
    } else if (stage.type == "interpolate") {
      require("models");
      auto models = split_list(stage.params.at("models"));
      if (models.size() < 2)
        throw ConfigError(where + ": needs at least two models");
      for (const auto& m : models)
        if (!lms.count(m))
          throw ConfigError(where + ": unknown model '" + m + "'");
      if (stage.params.count("tune"))
        need_corpus(stage.params.at("tune"), where + ": tune");
      else if (tune_count != 1)
        throw ConfigError(where + ": needs a tune corpus or an explicit "
                          "tune parameter");
      check_side(param(stage, "side", "tgt"));
      bool merge = true;
      if (stage.params.count("merge"))
        merge = to_bool(stage.params.at("merge"), where + ": merge");
      const std::string name = default_artifact_name(stage);
      if (!valid_name(name))
        throw ConfigError(where + ": invalid artifact name '" + name + "'");
      if (merge && !lms.insert(name).second)
        throw ConfigError(where + ": model '" + name + "' already exists");
    } else if (stage.type == "osm_encode") {
      require("corpus");
      need_corpus(stage.params.at("corpus"), where);
      if (!corpora_aligned[stage.params.at("corpus")])
        throw ConfigError(where + ": corpus '" + stage.params.at("corpus") +
                          "' has no alignment");
    } else if (stage.type == "classes") {
      require("corpus");
      require("side");
      need_corpus(stage.params.at("corpus"), where);
      check_side(stage.params.at("side"));
      if (to_u64(param(stage, "k", "50"), where + ": k") < 1)
        throw ConfigError(where + ": k must be at least 1");
      const std::string name = default_artifact_name(stage);
      if (!maps.insert(name).second)
        throw ConfigError(where + ": class map '" + name + "' already exists");
    } else if (stage.type == "class_apply") {
      require("corpus");
      require("side");
      require("map");
      need_corpus(stage.params.at("corpus"), where);
      check_side(stage.params.at("side"));
      if (!maps.count(stage.params.at("map")))
        throw ConfigError(where + ": unknown class map '" +
                          stage.params.at("map") + "'");
    } else if (stage.type == "bpe_learn") {
      require("corpus");
      require("side");
      require("merges");
      need_corpus(stage.params.at("corpus"), where);
      check_side(stage.params.at("side"));
      to_u64(stage.params.at("merges"), where + ": merges");
      const std::string name = default_artifact_name(stage);
      if (!codes.insert(name).second)
        throw ConfigError(where + ": codes '" + name + "' already exists");
    } else if (stage.type == "bpe_apply") {
      require("corpus");
      require("side");
      require("codes");
      need_corpus(stage.params.at("corpus"), where);
      check_side(stage.params.at("side"));
      if (!codes.count(stage.params.at("codes")))
        throw ConfigError(where + ": unknown codes '" +
                          stage.params.at("codes") + "'");
    } else if (stage.type == "oov") {
      require("corpus");
      require("side");
      require("mode");
      need_corpus(stage.params.at("corpus"), where);
      check_side(stage.params.at("side"));
      const std::string mode = stage.params.at("mode");
      if (mode != "drop" && mode != "translit")
        throw ConfigError(where + ": mode must be drop or translit");
      const bool has_vocab = stage.params.count("vocab") > 0;
      const bool has_from = stage.params.count("vocab_from") > 0;
      if (has_vocab == has_from)
        throw ConfigError(where + ": exactly one of vocab or vocab_from "
                          "is required");
      if (has_from) {
        auto ref = parse_side_ref(stage.params.at("vocab_from"),
                                  where + ": vocab_from");
        need_corpus(ref.corpus, where + ": vocab_from");
      }
    } else if (stage.type == "bleu") {
      require("hyp");
      require("ref");
      auto hyp = parse_side_ref(stage.params.at("hyp"), where + ": hyp");
      auto ref = parse_side_ref(stage.params.at("ref"), where + ": ref");
      need_corpus(hyp.corpus, where + ": hyp");
      need_corpus(ref.corpus, where + ": ref");
      if (stage.params.count("normalize"))
        to_bool(stage.params.at("normalize"), where + ": normalize");
    }
  }
}

struct Corpus {
  std::string name;
  std::string role;
  std::vector<std::string> src;
  std::vector<std::string> tgt;
  std::vector<std::string> align;  // raw Pharaoh lines, empty when unaligned
  bool aligned = false;
};

struct LmEntry {
  NgramModel model;
  std::string path;  // manifest-relative path of the exported ARPA file
};

class Runner {
 public:
  Runner(const PipelineConfig& config, const std::string& out_dir)
      : config_(config), out_(out_dir), rng_(config.seed) {}

  void run() {
    validate(config_);
    check_inputs();
    fs::create_directories(out_);
    load_corpora();
    for (std::size_t i = 0; i < config_.stages.size(); ++i) {
      const auto& stage = config_.stages[i];
      char tag[32];
      std::snprintf(tag, sizeof(tag), "%02zu_%s", i + 1, stage.type.c_str());
      tag_ = tag;
      dispatch(stage);
      write_manifest();
    }
  }

 private:
  void check_inputs() {
    auto need_file = [](const std::string& path) {
      if (path.empty()) return;
      if (!fs::exists(path))
        throw DataError("input file not found: " + path);
    };
    for (const auto& c : config_.corpora) {
      need_file(c.src);
      need_file(c.tgt);
      need_file(c.align);
    }
    for (const auto& stage : config_.stages) {
      need_file(param(stage, "rules"));
      need_file(param(stage, "table"));
      need_file(param(stage, "vocab"));
    }
  }

  void load_corpora() {
    for (const auto& decl : config_.corpora) {
      Corpus c;
      c.name = decl.name;
      c.role = decl.role;
      c.src = read_lines(decl.src);
      c.tgt = read_lines(decl.tgt);
      if (c.src.size() != c.tgt.size())
        throw DataError("corpus '" + c.name + "': " +
                        std::to_string(c.src.size()) + " source lines vs " +
                        std::to_string(c.tgt.size()) + " target lines");
      if (!decl.align.empty()) {
        c.align = read_lines(decl.align);
        c.aligned = true;
        if (c.align.size() != c.src.size())
          throw DataError("corpus '" + c.name + "': " +
                          std::to_string(c.align.size()) +
                          " alignment lines vs " +
                          std::to_string(c.src.size()) + " sentence pairs");
      }
      corpus_index_[c.name] = corpora_.size();
      corpora_.push_back(std::move(c));
    }
  }

  Corpus& corpus(const std::string& name) {
    return corpora_[corpus_index_.at(name)];
  }

  std::vector<Corpus*> targets(const PipelineConfig::StageDecl& stage,
                               bool training_only = false) {
    std::vector<Corpus*> out;
    if (stage.params.count("corpora")) {
      for (const auto& name : split_list(stage.params.at("corpora")))
        out.push_back(&corpus(name));
    } else {
      for (auto& c : corpora_)
        if (!training_only || c.role == "in-domain" || c.role == "out-domain")
          out.push_back(&c);
    }
    return out;
  }

  std::vector<std::string>& side_lines(Corpus& c, const std::string& side) {
    return side == "src" ? c.src : c.tgt;
  }

  static std::vector<std::vector<std::string>> tokenized(
      const std::vector<std::string>& lines) {
    std::vector<std::vector<std::string>> out;
    out.reserve(lines.size());
    for (const auto& line : lines) out.push_back(split_ws(line));
    return out;
  }

  void emit(const std::string& rel, const std::string& content) {
    fs::path full = out_ / rel;
    fs::create_directories(full.parent_path());
    atomic_write(full.string(), content);
    manifest_.push_back({tag_, rel, sha256_hex(content)});
  }

  static std::string lines_content(const std::vector<std::string>& lines) {
    if (lines.empty()) return "";
    return join(lines, "\n") + "\n";
  }

  void emit_corpus(const Corpus& c) {
    emit(tag_ + "/" + c.name + ".src", lines_content(c.src));
    emit(tag_ + "/" + c.name + ".tgt", lines_content(c.tgt));
    if (c.aligned) emit(tag_ + "/" + c.name + ".align", lines_content(c.align));
  }

  void write_manifest() {
    std::string content;
    for (const auto& row : manifest_)
      content += row.stage + "\t" + row.path + "\t" + row.hash + "\n";
    atomic_write((out_ / "manifest.tsv").string(), content);
  }

  void dispatch(const PipelineConfig::StageDecl& stage) {
    if (stage.type == "normalize") {
      run_normalize(stage);
    } else if (stage.type == "tokenize") {
      run_tokenize(stage);
    } else if (stage.type == "filter") {
      run_filter(stage);
    } else if (stage.type == "mml_select") {
      run_mml_select(stage);
    } else if (stage.type == "train_lm") {
      run_train_lm(stage);
    } else if (stage.type == "interpolate") {
      run_interpolate(stage);
    } else if (stage.type == "osm_encode") {
      run_osm_encode(stage);
    } else if (stage.type == "classes") {
      run_classes(stage);
    } else if (stage.type == "class_apply") {
      run_class_apply(stage);
    } else if (stage.type == "bpe_learn") {
      run_bpe_learn(stage);
    } else if (stage.type == "bpe_apply") {
      run_bpe_apply(stage);
    } else if (stage.type == "oov") {
      run_oov(stage);
    } else {
      run_bleu(stage);
    }
  }

  void transform_sides(const PipelineConfig::StageDecl& stage,
                       const std::function<std::string(const std::string&)>& fn) {
    const std::string sides = param(stage, "sides", "both");
    for (Corpus* c : targets(stage)) {
      if (sides != "tgt")
        for (auto& line : c->src) line = fn(line);
      if (sides != "src")
        for (auto& line : c->tgt) line = fn(line);
      emit_corpus(*c);
    }
  }

  void run_normalize(const PipelineConfig::StageDecl& stage) {
    NormalizationRules rules = stage.params.count("rules")
                                   ? NormalizationRules::load(stage.params.at("rules"))
                                   : NormalizationRules::arabic_default();
    transform_sides(stage,
                    [&](const std::string& line) { return normalize(line, rules); });
  }

  void run_tokenize(const PipelineConfig::StageDecl& stage) {
    transform_sides(stage, [](const std::string& line) {
      return join(tokenize(line), " ");
    });
  }

  void run_filter(const PipelineConfig::StageDecl& stage) {
    const std::size_t max_len = to_u64(param(stage, "max_len", "80"), "max_len");
    for (Corpus* c : targets(stage, /*training_only=*/true)) {
      std::vector<std::string> src, tgt, align;
      for (std::size_t i = 0; i < c->src.size(); ++i) {
        if (split_ws(c->src[i]).size() > max_len ||
            split_ws(c->tgt[i]).size() > max_len)
          continue;
        src.push_back(c->src[i]);
        tgt.push_back(c->tgt[i]);
        if (c->aligned) align.push_back(c->align[i]);
      }
      c->src = std::move(src);
      c->tgt = std::move(tgt);
      c->align = std::move(align);
      emit_corpus(*c);
    }
  }

  NgramModel train_model(const std::vector<std::vector<std::string>>& sentences,
                         int order, const std::string& what) {
    if (sentences.empty()) throw DataError(what + " has no sentences");
    NgramCounts counts(order);
    for (const auto& s : sentences) counts.add_sentence(s);
    return NgramModel::estimate(counts);
  }

  void run_mml_select(const PipelineConfig::StageDecl& stage) {
    const double fraction = to_double(stage.params.at("fraction"), "fraction");
    const int order = static_cast<int>(to_u64(param(stage, "order", "5"), "order"));
    const bool bilingual = !stage.params.count("bilingual") ||
                           to_bool(stage.params.at("bilingual"), "bilingual");

    std::vector<std::string> in_names;
    if (stage.params.count("in")) {
      in_names = split_list(stage.params.at("in"));
    } else {
      for (const auto& c : corpora_)
        if (c.role == "in-domain") in_names.push_back(c.name);
    }
    std::string out_name = param(stage, "out");
    if (out_name.empty())
      for (const auto& c : corpora_)
        if (c.role == "out-domain") out_name = c.name;
    Corpus& pool = corpus(out_name);

    std::vector<std::vector<std::string>> in_src, in_tgt;
    for (const auto& name : in_names) {
      Corpus& c = corpus(name);
      for (const auto& line : c.src) in_src.push_back(split_ws(line));
      for (const auto& line : c.tgt) in_tgt.push_back(split_ws(line));
    }
    auto pool_src = tokenized(pool.src);
    auto pool_tgt = tokenized(pool.tgt);

    // The out-of-domain scoring models see a random sample of the pool of
    // the same size as the in-domain data, so both sides of the difference
    // are estimated from comparable amounts of text.
    const std::size_t sample_size = std::min(in_src.size(), pool_src.size());
    std::vector<std::size_t> order_idx(pool_src.size());
    std::iota(order_idx.begin(), order_idx.end(), 0);
    rng_.shuffle(order_idx);
    order_idx.resize(sample_size);
    std::sort(order_idx.begin(), order_idx.end());
    std::vector<std::vector<std::string>> sample_src, sample_tgt;
    for (std::size_t i : order_idx) {
      sample_src.push_back(pool_src[i]);
      sample_tgt.push_back(pool_tgt[i]);
    }

    NgramModel in_src_lm = train_model(in_src, order, "in-domain source");
    NgramModel out_src_lm = train_model(sample_src, order, "out-domain sample");

    std::vector<SelectionScore> scores;
    scores.reserve(pool_src.size());
    if (bilingual) {
      NgramModel in_tgt_lm = train_model(in_tgt, order, "in-domain target");
      NgramModel out_tgt_lm = train_model(sample_tgt, order, "out-domain sample");
      for (std::size_t i = 0; i < pool_src.size(); ++i) {
        SelectionScore s;
        s.index = i;
        s.src_score = ml_score(pool_src[i], in_src_lm, out_src_lm);
        s.tgt_score = ml_score(pool_tgt[i], in_tgt_lm, out_tgt_lm);
        s.score = s.src_score + s.tgt_score;
        scores.push_back(s);
      }
    } else {
      for (std::size_t i = 0; i < pool_src.size(); ++i) {
        SelectionScore s;
        s.index = i;
        s.src_score = ml_score(pool_src[i], in_src_lm, out_src_lm);
        s.score = s.src_score;
        scores.push_back(s);
      }
    }

    std::ostringstream score_out;
    write_scores(score_out, scores);
    emit(tag_ + "/scores.tsv", score_out.str());

    auto picked = select_fraction(scores, fraction);
    std::string indices;
    for (uint64_t i : picked) indices += std::to_string(i) + "\n";
    emit(tag_ + "/indices.txt", indices);

    Corpus selected;
    selected.name = default_artifact_name(stage);
    selected.role = "in-domain";
    selected.aligned = pool.aligned;
    for (uint64_t i : picked) {
      selected.src.push_back(pool.src[i]);
      selected.tgt.push_back(pool.tgt[i]);
      if (pool.aligned) selected.align.push_back(pool.align[i]);
    }
    emit_corpus(selected);
    corpus_index_[selected.name] = corpora_.size();
    corpora_.push_back(std::move(selected));
  }

  void run_train_lm(const PipelineConfig::StageDecl& stage) {
    const std::string side = param(stage, "side", "tgt");
    const int order = static_cast<int>(to_u64(param(stage, "order", "5"), "order"));
    std::vector<std::vector<std::string>> sentences;
    for (const auto& name : split_list(stage.params.at("corpus"))) {
      Corpus& c = corpus(name);
      for (const auto& line : side_lines(c, side))
        sentences.push_back(split_ws(line));
    }
    const std::string name = default_artifact_name(stage);
    NgramModel model = train_model(sentences, order, "corpus for model " + name);
    std::ostringstream arpa;
    model.to_arpa(arpa);
    const std::string rel = tag_ + "/" + name + ".arpa";
    emit(rel, arpa.str());
    lms_.emplace(name, LmEntry{std::move(model), rel});
  }

  void run_interpolate(const PipelineConfig::StageDecl& stage) {
    auto model_names = split_list(stage.params.at("models"));
    std::string tune_name = param(stage, "tune");
    if (tune_name.empty())
      for (const auto& c : corpora_)
        if (c.role == "tune") tune_name = c.name;
    const std::string side = param(stage, "side", "tgt");
    auto tune = tokenized(side_lines(corpus(tune_name), side));

    std::vector<const NgramModel*> components;
    for (const auto& name : model_names)
      components.push_back(&lms_.at(name).model);
    EmTrace trace;
    auto weights = em_fit(components, tune, EmOptions{}, &trace);

    std::string weight_rows;
    for (std::size_t i = 0; i < weights.size(); ++i)
      weight_rows += lms_.at(model_names[i]).path + "\t" +
                     format_logprob(weights[i]) + "\n";
    const std::string name = default_artifact_name(stage);
    emit(tag_ + "/" + name + ".weights.tsv", weight_rows);

    bool merge = !stage.params.count("merge") ||
                 to_bool(stage.params.at("merge"), "merge");
    if (merge) {
      std::vector<NgramModel> copies;
      for (const auto* m : components) copies.push_back(*m);
      MixtureModel mixture(std::move(copies), weights);
      NgramModel merged = mixture.merge_static();
      std::ostringstream arpa;
      merged.to_arpa(arpa);
      const std::string rel = tag_ + "/" + name + ".arpa";
      emit(rel, arpa.str());
      lms_.emplace(name, LmEntry{std::move(merged), rel});
    }
  }

  void run_osm_encode(const PipelineConfig::StageDecl& stage) {
    Corpus& c = corpus(stage.params.at("corpus"));
    std::vector<SentencePair> pairs;
    pairs.reserve(c.src.size());
    for (std::size_t i = 0; i < c.src.size(); ++i) {
      SentencePair pair;
      pair.source = split_ws(c.src[i]);
      pair.target = split_ws(c.tgt[i]);
      pair.alignment = parse_pharaoh(c.align[i], i + 1);
      pairs.push_back(std::move(pair));
    }
    auto lines = osm_corpus(pairs);
    emit(tag_ + "/" + default_artifact_name(stage) + ".txt",
         lines_content(lines));
  }

  void run_classes(const PipelineConfig::StageDecl& stage) {
    Corpus& c = corpus(stage.params.at("corpus"));
    auto lines = tokenized(side_lines(c, stage.params.at("side")));
    ClusterOptions options;
    options.k = static_cast<int>(to_u64(param(stage, "k", "50"), "k"));
    ClassMap map = cluster_exchange(lines, options, nullptr);
    std::ostringstream out;
    map.save(out);
    const std::string name = default_artifact_name(stage);
    emit(tag_ + "/" + name + ".tsv", out.str());
    class_maps_.emplace(name, std::move(map));
  }

  void run_class_apply(const PipelineConfig::StageDecl& stage) {
    const ClassMap& map = class_maps_.at(stage.params.at("map"));
    Corpus& c = corpus(stage.params.at("corpus"));
    for (auto& line : side_lines(c, stage.params.at("side")))
      line = join(apply_classes(map, split_ws(line)), " ");
    emit_corpus(c);
  }

  void run_bpe_learn(const PipelineConfig::StageDecl& stage) {
    Corpus& c = corpus(stage.params.at("corpus"));
    BpeModel model =
        bpe_learn_lines(side_lines(c, stage.params.at("side")),
                        to_u64(stage.params.at("merges"), "merges"));
    std::ostringstream out;
    model.save(out);
    const std::string name = default_artifact_name(stage);
    emit(tag_ + "/" + name + ".codes", out.str());
    codes_.emplace(name, std::move(model));
  }

  void run_bpe_apply(const PipelineConfig::StageDecl& stage) {
    BpeApplier applier(codes_.at(stage.params.at("codes")));
    Corpus& c = corpus(stage.params.at("corpus"));
    for (auto& line : side_lines(c, stage.params.at("side")))
      line = join(applier.apply_line(split_ws(line)), " ");
    emit_corpus(c);
  }

  void run_oov(const PipelineConfig::StageDecl& stage) {
    std::unordered_set<std::string> vocab;
    if (stage.params.count("vocab")) {
      for (const auto& line : read_lines(stage.params.at("vocab"))) {
        std::string token = trim(line);
        if (!token.empty()) vocab.insert(token);
      }
    } else {
      auto ref = parse_side_ref(stage.params.at("vocab_from"), "vocab_from");
      for (const auto& line : side_lines(corpus(ref.corpus), ref.side))
        for (auto& token : split_ws(line)) vocab.insert(std::move(token));
    }

    Corpus& c = corpus(stage.params.at("corpus"));
    auto& lines = side_lines(c, stage.params.at("side"));
    if (stage.params.at("mode") == "drop") {
      for (auto& line : lines) line = join(drop_oov(split_ws(line), vocab), " ");
    } else {
      TranslitTable table;
      if (stage.params.count("table")) {
        std::ifstream in(stage.params.at("table"));
        table = TranslitTable::load(in);
      } else {
        table = TranslitTable::romanize_arabic();
      }
      std::size_t unmapped = 0;
      for (auto& line : lines)
        line = join(transliterate_oov(split_ws(line), vocab, table, &unmapped),
                    " ");
    }
    emit_corpus(c);
  }

  void run_bleu(const PipelineConfig::StageDecl& stage) {
    auto hyp = parse_side_ref(stage.params.at("hyp"), "hyp");
    auto ref = parse_side_ref(stage.params.at("ref"), "ref");
    bool normalize_first = stage.params.count("normalize") &&
                           to_bool(stage.params.at("normalize"), "normalize");
    BleuReport report = bleu(side_lines(corpus(hyp.corpus), hyp.side),
                             side_lines(corpus(ref.corpus), ref.side),
                             normalize_first);
    emit(tag_ + "/" + default_artifact_name(stage) + ".txt",
         format_bleu_summary(report) + "\n");
  }

  struct ManifestRow {
    std::string stage;
    std::string path;
    std::string hash;
  };

  const PipelineConfig& config_;
  fs::path out_;
  Rng rng_;
  std::string tag_;
  std::vector<Corpus> corpora_;
  std::map<std::string, std::size_t> corpus_index_;
  std::map<std::string, LmEntry> lms_;
  std::map<std::string, BpeModel> codes_;
  std::map<std::string, ClassMap> class_maps_;
  std::vector<ManifestRow> manifest_;
};

}  // namespace

PipelineConfig PipelineConfig::parse(std::istream& in) {
  PipelineConfig config;
  enum class Section { kGlobal, kCorpus, kStage };
  Section section = Section::kGlobal;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = "config line " + std::to_string(lineno) + ": ";

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(where + "unterminated section header");
      auto fields = split_ws(line.substr(1, line.size() - 2));
      if (fields.size() != 2)
        throw ConfigError(where + "section header must be [corpus <name>] or "
                          "[stage <type>]");
      if (fields[0] == "corpus") {
        config.corpora.push_back({fields[1], "", "", "", ""});
        section = Section::kCorpus;
      } else if (fields[0] == "stage") {
        config.stages.push_back({fields[1], {}});
        section = Section::kStage;
      } else {
        throw ConfigError(where + "unknown section '" + fields[0] + "'");
      }
      continue;
    }

    auto space = line.find_first_of(" \t");
    if (space == std::string::npos)
      throw ConfigError(where + "expected 'key value'");
    const std::string key = line.substr(0, space);
    const std::string value = trim(line.substr(space + 1));

    if (section == Section::kGlobal) {
      if (key == "seed")
        config.seed = to_u64(value, where + "seed");
      else
        throw ConfigError(where + "unknown global key '" + key + "'");
    } else if (section == Section::kCorpus) {
      auto& c = config.corpora.back();
      std::string* slot = nullptr;
      if (key == "role")
        slot = &c.role;
      else if (key == "src")
        slot = &c.src;
      else if (key == "tgt")
        slot = &c.tgt;
      else if (key == "align")
        slot = &c.align;
      else
        throw ConfigError(where + "unknown corpus key '" + key + "'");
      if (!slot->empty())
        throw ConfigError(where + "duplicate corpus key '" + key + "'");
      *slot = value;
    } else {
      auto& stage = config.stages.back();
      if (!stage.params.emplace(key, value).second)
        throw ConfigError(where + "duplicate stage parameter '" + key + "'");
    }
  }
  return config;
}

void run_pipeline(const PipelineConfig& config, const std::string& out_dir) {
  Runner runner(config, out_dir);
  runner.run();
}

}  // namespace adaptkit
