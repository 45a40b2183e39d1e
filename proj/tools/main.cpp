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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include "CLI11.hpp"
#include "adaptkit/bpe.hpp"
#include "adaptkit/classes.hpp"
#include "adaptkit/errors.hpp"
#include "adaptkit/evalkit.hpp"
#include "adaptkit/mixture.hpp"
#include "adaptkit/ngram.hpp"
#include "adaptkit/oov.hpp"
#include "adaptkit/osm.hpp"
#include "adaptkit/pipeline.hpp"
#include "adaptkit/selection.hpp"
#include "adaptkit/text.hpp"
#include "adaptkit/util.hpp"

namespace {

using namespace adaptkit;

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

NgramModel load_arpa(const std::string& path) {
  auto in = open_or_throw(path);
  return NgramModel::from_arpa(in);
}

std::vector<std::vector<std::string>> tokenized_lines(const std::string& path) {
  std::vector<std::vector<std::string>> out;
  for (const auto& line : read_lines(path)) out.push_back(split_ws(line));
  return out;
}

std::string format_double(double v) { return format_logprob(v); }

int cmd_normalize(const std::string& rules_path) {
  NormalizationRules rules = rules_path.empty()
                                 ? NormalizationRules::arabic_default()
                                 : NormalizationRules::load(rules_path);
  for_each_line(std::cin, [&](const std::string& line) {
    std::cout << normalize(line, rules) << '\n';
  });
  return 0;
}

int cmd_tokenize() {
  for_each_line(std::cin, [&](const std::string& line) {
    std::cout << join(tokenize(line), " ") << '\n';
  });
  return 0;
}

int cmd_filter(std::size_t max_len, const std::string& src,
               const std::string& tgt, const std::string& align,
               const std::string& out_prefix) {
  auto src_lines = read_lines(src);
  auto tgt_lines = read_lines(tgt);
  if (src_lines.size() != tgt_lines.size())
    throw DataError("line count mismatch: " + std::to_string(src_lines.size()) +
                    " vs " + std::to_string(tgt_lines.size()));
  std::vector<std::string> align_lines;
  if (!align.empty()) {
    align_lines = read_lines(align);
    if (align_lines.size() != src_lines.size())
      throw DataError("alignment line count mismatch: " +
                      std::to_string(align_lines.size()) + " vs " +
                      std::to_string(src_lines.size()));
  }
  std::string out_src, out_tgt, out_align;
  for (std::size_t i = 0; i < src_lines.size(); ++i) {
    if (split_ws(src_lines[i]).size() > max_len ||
        split_ws(tgt_lines[i]).size() > max_len)
      continue;
    out_src += src_lines[i] + "\n";
    out_tgt += tgt_lines[i] + "\n";
    if (!align.empty()) out_align += align_lines[i] + "\n";
  }
  atomic_write(out_prefix + ".src", out_src);
  atomic_write(out_prefix + ".tgt", out_tgt);
  if (!align.empty()) atomic_write(out_prefix + ".align", out_align);
  return 0;
}

int cmd_train_lm(int order, const std::string& text, const std::string& arpa) {
  NgramCounts counts(order);
  auto in = open_or_throw(text);
  bool any = false;
  for_each_line(in, [&](const std::string& line) {
    counts.add_sentence(split_ws(line));
    any = true;
  });
  if (!any) throw DataError(text + " has no sentences");
  NgramModel model = NgramModel::estimate(counts);
  std::ostringstream out;
  model.to_arpa(out);
  atomic_write(arpa, out.str());
  return 0;
}

int cmd_ppl(const std::string& arpa, const std::string& text) {
  NgramModel model = load_arpa(arpa);
  PplResult r = model.perplexity(tokenized_lines(text));
  std::cout << "ppl=" << format_double(r.ppl) << " tokens=" << r.tokens
            << " oov=" << r.oov << '\n';
  return 0;
}

int cmd_interpolate(const std::vector<std::string>& arpas,
                    const std::string& tune, const std::string& out_weights,
                    const std::string& merge_arpa) {
  std::vector<NgramModel> models;
  models.reserve(arpas.size());
  for (const auto& path : arpas) models.push_back(load_arpa(path));
  std::vector<const NgramModel*> components;
  for (const auto& m : models) components.push_back(&m);

  auto tune_lines = tokenized_lines(tune);
  EmTrace trace;
  auto weights = em_fit(components, tune_lines, EmOptions{}, &trace);

  std::string rows;
  for (std::size_t i = 0; i < weights.size(); ++i)
    rows += arpas[i] + "\t" + format_double(weights[i]) + "\n";
  atomic_write(out_weights, rows);
  std::cerr << "tune ppl " << format_double(trace.ppl.front()) << " -> "
            << format_double(trace.ppl.back()) << " in " << trace.iterations
            << " iterations\n";

  if (!merge_arpa.empty()) {
    MixtureModel mixture(std::move(models), weights);
    NgramModel merged = mixture.merge_static();
    std::ostringstream out;
    merged.to_arpa(out);
    atomic_write(merge_arpa, out.str());
  }
  return 0;
}

int cmd_mml_score(const std::string& in_src_lm, const std::string& out_src_lm,
                  const std::string& in_tgt_lm, const std::string& out_tgt_lm,
                  const std::string& src, const std::string& tgt,
                  const std::string& out_path) {
  const bool bilingual = !in_tgt_lm.empty();
  NgramModel in_src = load_arpa(in_src_lm);
  NgramModel out_src = load_arpa(out_src_lm);
  auto src_lines = tokenized_lines(src);

  std::vector<SelectionScore> scores;
  scores.reserve(src_lines.size());
  if (bilingual) {
    NgramModel in_tgt = load_arpa(in_tgt_lm);
    NgramModel out_tgt = load_arpa(out_tgt_lm);
    auto tgt_lines = tokenized_lines(tgt);
    if (src_lines.size() != tgt_lines.size())
      throw DataError("line count mismatch: " +
                      std::to_string(src_lines.size()) + " vs " +
                      std::to_string(tgt_lines.size()));
    for (std::size_t i = 0; i < src_lines.size(); ++i) {
      SelectionScore s;
      s.index = i;
      s.src_score = ml_score(src_lines[i], in_src, out_src);
      s.tgt_score = ml_score(tgt_lines[i], in_tgt, out_tgt);
      s.score = s.src_score + s.tgt_score;
      scores.push_back(s);
    }
  } else {
    for (std::size_t i = 0; i < src_lines.size(); ++i) {
      SelectionScore s;
      s.index = i;
      s.src_score = ml_score(src_lines[i], in_src, out_src);
      s.score = s.src_score;
      scores.push_back(s);
    }
  }
  std::ostringstream out;
  write_scores(out, scores);
  atomic_write(out_path, out.str());
  return 0;
}

int cmd_mml_select(const std::string& scores_path, double fraction,
                   const std::string& out_path) {
  auto in = open_or_throw(scores_path);
  auto scores = read_scores(in);
  auto picked = select_fraction(scores, fraction);
  std::string rows;
  for (uint64_t i : picked) rows += std::to_string(i) + "\n";
  atomic_write(out_path, rows);
  return 0;
}

int cmd_bpe_learn(std::size_t merges, const std::string& in_path,
                  const std::string& out_path) {
  BpeModel model = bpe_learn_lines(read_lines(in_path), merges);
  std::ostringstream out;
  model.save(out);
  atomic_write(out_path, out.str());
  return 0;
}

int cmd_bpe_apply(const std::string& codes) {
  auto in = open_or_throw(codes);
  BpeApplier applier(BpeModel::load(in));
  for_each_line(std::cin, [&](const std::string& line) {
    std::cout << join(applier.apply_line(split_ws(line)), " ") << '\n';
  });
  return 0;
}

int cmd_bpe_undo() {
  uint64_t warnings = 0;
  for_each_line(std::cin, [&](const std::string& line) {
    std::cout << join(bpe_undo_line(split_ws(line), &warnings), " ") << '\n';
  });
  if (warnings > 0)
    std::cerr << warnings << " dangling continuation markers stripped\n";
  return 0;
}

int cmd_osm_encode(const std::string& src, const std::string& tgt,
                   const std::string& align, const std::string& out_path) {
  auto pairs = load_parallel_corpus(src, tgt, align);
  auto lines = osm_corpus(pairs);
  std::string content;
  for (const auto& line : lines) content += line + "\n";
  atomic_write(out_path, content);
  return 0;
}

int cmd_classes(int k, const std::string& in_path, const std::string& out_path) {
  std::vector<std::vector<std::string>> lines;
  for (const auto& line : read_lines(in_path)) lines.push_back(split_ws(line));
  ClusterOptions options;
  options.k = k;
  ClusterTrace trace;
  ClassMap map = cluster_exchange(lines, options, &trace);
  std::ostringstream out;
  map.save(out);
  atomic_write(out_path, out.str());
  std::cerr << trace.moves << " moves in " << trace.sweeps << " sweeps\n";
  return 0;
}

int cmd_class_apply(const std::string& map_path) {
  auto in = open_or_throw(map_path);
  ClassMap map = ClassMap::load(in);
  for_each_line(std::cin, [&](const std::string& line) {
    std::cout << join(apply_classes(map, split_ws(line)), " ") << '\n';
  });
  return 0;
}

int cmd_oov(const std::string& vocab_path, const std::string& mode,
            const std::string& table_path) {
  std::unordered_set<std::string> vocab;
  for (const auto& line : read_lines(vocab_path)) {
    auto tokens = split_ws(line);
    for (auto& t : tokens) vocab.insert(std::move(t));
  }
  TranslitTable table;
  if (mode == "translit") {
    if (table_path.empty()) {
      table = TranslitTable::romanize_arabic();
    } else {
      auto in = open_or_throw(table_path);
      table = TranslitTable::load(in);
    }
  }
  std::size_t unmapped = 0;
  for_each_line(std::cin, [&](const std::string& line) {
    auto tokens = split_ws(line);
    if (mode == "drop")
      std::cout << join(drop_oov(tokens, vocab), " ") << '\n';
    else
      std::cout << join(transliterate_oov(tokens, vocab, table, &unmapped), " ")
                << '\n';
  });
  if (unmapped > 0)
    std::cerr << unmapped << " code points had no transliteration\n";
  return 0;
}

int cmd_bleu(const std::string& hyp, const std::string& ref, bool normalize) {
  BleuReport report = bleu(read_lines(hyp), read_lines(ref), normalize);
  std::cout << format_bleu_summary(report) << '\n';
  return 0;
}

// Report layout: a file with one `columns` line naming the test sets,
// then `row <label> <v1> <v2> ...` lines.
int cmd_report(const std::string& layout_path) {
  std::vector<std::string> columns;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  auto in = open_or_throw(layout_path);
  std::size_t lineno = 0;
  for_each_line(in, [&](const std::string& line) {
    ++lineno;
    if (line.empty() || line[0] == '#') return;
    auto fields = split_ws(line);
    if (fields[0] == "columns") {
      columns.assign(fields.begin() + 1, fields.end());
    } else if (fields[0] == "row") {
      if (fields.size() < 2) throw ParseError("row needs a label", lineno);
      std::vector<double> values;
      for (std::size_t i = 2; i < fields.size(); ++i) {
        try {
          values.push_back(std::stod(fields[i]));
        } catch (const std::logic_error&) {
          throw ParseError("malformed value '" + fields[i] + "'", lineno);
        }
      }
      rows.emplace_back(fields[1], std::move(values));
    } else {
      throw ParseError("expected 'columns' or 'row', got '" + fields[0] + "'",
                       lineno);
    }
  });
  std::cout << progress_table(columns, rows);
  return 0;
}

int cmd_pipeline(const std::string& config_path, const std::string& out_dir) {
  auto in = open_or_throw(config_path);
  PipelineConfig config = PipelineConfig::parse(in);
  run_pipeline(config, out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"language model adaptation toolkit"};
  app.require_subcommand(1);

  std::string rules_path, src, tgt, align, out_prefix, text, arpa, tune;
  std::string out_weights, merge_arpa, in_src_lm, out_src_lm, in_tgt_lm;
  std::string out_tgt_lm, out_path, scores_path, in_path, codes, map_path;
  std::string vocab_path, mode, table_path, hyp, ref, layout_path, config_path;
  std::string out_dir;
  std::vector<std::string> arpas;
  std::size_t max_len = 80, merges = 0;
  int order = 5, k = 50;
  double fraction = 0.0;
  bool normalize_flag = false;

  auto* normalize_cmd = app.add_subcommand("normalize", "apply character normalization to stdin");
  normalize_cmd->add_option("--rules", rules_path, "substitution table (TSV hex\\treplacement-or-DELETE)");

  auto* tokenize_cmd = app.add_subcommand("tokenize", "tokenize stdin");

  auto* filter_cmd = app.add_subcommand("filter", "drop pairs longer than --max-len");
  filter_cmd->add_option("--max-len", max_len, "maximum tokens per side")->capture_default_str();
  filter_cmd->add_option("--src", src, "source file")->required();
  filter_cmd->add_option("--tgt", tgt, "target file")->required();
  filter_cmd->add_option("--align", align, "alignment file kept in sync");
  filter_cmd->add_option("--out-prefix", out_prefix, "output prefix")->required();

  auto* train_cmd = app.add_subcommand("train-lm", "estimate a smoothed n-gram model");
  train_cmd->add_option("--order", order, "model order")->capture_default_str();
  train_cmd->add_option("--text", text, "training text, one sentence per line")->required();
  train_cmd->add_option("--arpa", arpa, "output model file")->required();

  auto* ppl_cmd = app.add_subcommand("ppl", "perplexity of a text under a model");
  ppl_cmd->add_option("--arpa", arpa, "model file")->required();
  ppl_cmd->add_option("--text", text, "evaluation text")->required();

  auto* interp_cmd = app.add_subcommand("interpolate", "fit mixture weights on a tune set");
  interp_cmd->add_option("--arpa", arpas, "component model (repeatable)")->required();
  interp_cmd->add_option("--tune", tune, "tune text")->required();
  interp_cmd->add_option("--out-weights", out_weights, "weights TSV output")->required();
  interp_cmd->add_option("--merge-arpa", merge_arpa, "also write a statically merged model");

  auto* score_cmd = app.add_subcommand("mml-score", "cross-entropy difference scores");
  score_cmd->add_option("--in-src-lm", in_src_lm, "in-domain source model")->required();
  score_cmd->add_option("--out-src-lm", out_src_lm, "out-domain source model")->required();
  score_cmd->add_option("--in-tgt-lm", in_tgt_lm, "in-domain target model");
  score_cmd->add_option("--out-tgt-lm", out_tgt_lm, "out-domain target model");
  score_cmd->add_option("--src", src, "source file")->required();
  score_cmd->add_option("--tgt", tgt, "target file");
  score_cmd->add_option("--out", out_path, "scores TSV output")->required();

  auto* select_cmd = app.add_subcommand("mml-select", "pick the lowest-scoring fraction");
  select_cmd->add_option("--scores", scores_path, "scores TSV")->required();
  select_cmd->add_option("--fraction", fraction, "fraction in (0,1]")->required();
  select_cmd->add_option("--out", out_path, "selected indices output")->required();

  auto* bpe_learn_cmd = app.add_subcommand("bpe-learn", "learn subword merge operations");
  bpe_learn_cmd->add_option("--merges", merges, "number of merges")->required();
  bpe_learn_cmd->add_option("--in", in_path, "training text")->required();
  bpe_learn_cmd->add_option("--out", out_path, "codes output")->required();

  auto* bpe_apply_cmd = app.add_subcommand("bpe-apply", "segment stdin with learned codes");
  bpe_apply_cmd->add_option("--codes", codes, "codes file")->required();

  auto* bpe_undo_cmd = app.add_subcommand("bpe-undo", "rejoin subword units from stdin");

  auto* osm_cmd = app.add_subcommand("osm-encode", "linearize aligned pairs into operation sequences");
  osm_cmd->add_option("--src", src, "source file")->required();
  osm_cmd->add_option("--tgt", tgt, "target file")->required();
  osm_cmd->add_option("--align", align, "alignments, one i-j list per line")->required();
  osm_cmd->add_option("--out", out_path, "operations output")->required();

  auto* classes_cmd = app.add_subcommand("classes", "cluster words by bigram likelihood");
  classes_cmd->add_option("--k", k, "number of classes")->capture_default_str();
  classes_cmd->add_option("--in", in_path, "training text")->required();
  classes_cmd->add_option("--out", out_path, "class map TSV output")->required();

  auto* class_apply_cmd = app.add_subcommand("class-apply", "map stdin tokens to class ids");
  class_apply_cmd->add_option("--map", map_path, "class map TSV")->required();

  auto* oov_cmd = app.add_subcommand("oov", "drop or transliterate unknown tokens in stdin");
  oov_cmd->add_option("--vocab", vocab_path, "known vocabulary, one token per line")->required();
  oov_cmd->add_option("--mode", mode, "drop or translit")
      ->required()
      ->check(CLI::IsMember({"drop", "translit"}));
  oov_cmd->add_option("--table", table_path, "transliteration table (TSV hex\\tstring)");

  auto* bleu_cmd = app.add_subcommand("bleu", "corpus-level translation score");
  bleu_cmd->add_option("--hyp", hyp, "hypothesis file")->required();
  bleu_cmd->add_option("--ref", ref, "reference file")->required();
  bleu_cmd->add_flag("--normalize", normalize_flag, "normalize both sides first");

  auto* report_cmd = app.add_subcommand("report", "render a progress table");
  report_cmd->add_option("--layout", layout_path, "table description file")->required();

  auto* pipeline_cmd = app.add_subcommand("pipeline", "run a configured adaptation recipe");
  pipeline_cmd->add_option("--config", config_path, "pipeline configuration")->required();
  pipeline_cmd->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (normalize_cmd->parsed()) return cmd_normalize(rules_path);
    if (tokenize_cmd->parsed()) return cmd_tokenize();
    if (filter_cmd->parsed()) return cmd_filter(max_len, src, tgt, align, out_prefix);
    if (train_cmd->parsed()) return cmd_train_lm(order, text, arpa);
    if (ppl_cmd->parsed()) return cmd_ppl(arpa, text);
    if (interp_cmd->parsed())
      return cmd_interpolate(arpas, tune, out_weights, merge_arpa);
    if (score_cmd->parsed()) {
      if (in_tgt_lm.empty() != out_tgt_lm.empty())
        throw ConfigError("--in-tgt-lm and --out-tgt-lm must be given together");
      if (!in_tgt_lm.empty() && tgt.empty())
        throw ConfigError("--tgt is required for bilingual scoring");
      return cmd_mml_score(in_src_lm, out_src_lm, in_tgt_lm, out_tgt_lm, src,
                           tgt, out_path);
    }
    if (select_cmd->parsed()) return cmd_mml_select(scores_path, fraction, out_path);
    if (bpe_learn_cmd->parsed()) return cmd_bpe_learn(merges, in_path, out_path);
    if (bpe_apply_cmd->parsed()) return cmd_bpe_apply(codes);
    if (bpe_undo_cmd->parsed()) return cmd_bpe_undo();
    if (osm_cmd->parsed()) return cmd_osm_encode(src, tgt, align, out_path);
    if (classes_cmd->parsed()) return cmd_classes(k, in_path, out_path);
    if (class_apply_cmd->parsed()) return cmd_class_apply(map_path);
    if (oov_cmd->parsed()) return cmd_oov(vocab_path, mode, table_path);
    if (bleu_cmd->parsed()) return cmd_bleu(hyp, ref, normalize_flag);
    if (report_cmd->parsed()) return cmd_report(layout_path);
    if (pipeline_cmd->parsed()) return cmd_pipeline(config_path, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    // DataError, ParseError and I/O failures.
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
