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

#ifndef ADAPTKIT_PIPELINE_HPP_
#define ADAPTKIT_PIPELINE_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace adaptkit {

// Line-oriented pipeline configuration. Top-level `key value` lines set
// globals (currently `seed`), `[corpus <name>]` sections declare input
// corpora and `[stage <type>]` sections queue processing steps in order.
// Blank lines and lines starting with '#' are ignored.
struct PipelineConfig {
  struct CorpusDecl {
    std::string name;
    std::string role;  // in-domain | out-domain | tune | test
    std::string src;
    std::string tgt;
    std::string align;  // optional Pharaoh alignment file
  };
  struct StageDecl {
    std::string type;
    std::map<std::string, std::string> params;
  };

  uint64_t seed = 42;
  std::vector<CorpusDecl> corpora;
  std::vector<StageDecl> stages;

  static PipelineConfig parse(std::istream& in);
};

// Runs all stages in order under `out_dir`, rewriting
// `<out_dir>/manifest.tsv` (TSV stage\tartifact_path\tsha256, paths relative
// to out_dir) after every completed stage. Throws ConfigError for invalid
// configuration, DataError for missing or malformed inputs (all input files
// are checked before the first stage runs) and NumericError on estimation
// failures; artifacts of completed stages survive a failure.
void run_pipeline(const PipelineConfig& config, const std::string& out_dir);

}  // namespace adaptkit

#endif  // ADAPTKIT_PIPELINE_HPP_
