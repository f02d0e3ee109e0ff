// Copyright 2026 The ocrpipe Authors.
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

// End-to-end runs driven by an INI-style config:
//
//   [pipeline]  input, output, seed
//   [stages]    langid reorder mask correct translit eval  (true/false)
//   [langid]    model | corpus, min_n, max_n, dimension, epochs, learning_rate
//   [reorder]   gap_ratio
//   [mask]      target, mask_langs, mask_numerals, mask_punct
//   [correct]   command | channel + lm | pairs [lm_corpus], beam_width,
//               channel_weight, max_insertions, lm_order, lm_k, channel_k
//   [translit]  rules
//   [eval]      reference, w_insert, w_delete, w_move, theta, hyp
//
// Relative paths resolve against the config file's directory. List values
// are whitespace-separated. Every stage writes its output into the run
// directory:
//
//   00_langid.bin 00_channel.json 00_charlm.json   (models trained in-run)
//   01_ingest.json 02_labeled.json 03_reordered.json
//   04_masked.json 04_mask.sidecar.jsonl 05_corrected.json
//   06_unmasked.json 07_translit.json
//   08_eval.json 08_eval_baseline.json 08_eval_table.txt
//   manifest.json

#ifndef OCRPIPE_PIPELINE_H_
#define OCRPIPE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ocrpipe/corrector.h"
#include "ocrpipe/eval.h"
#include "ocrpipe/langid.h"
#include "ocrpipe/mask.h"

namespace ocrpipe {

struct StageToggles {
  bool langid = true;
  bool reorder = true;
  bool mask = true;
  bool correct = true;
  bool translit = false;
  bool eval = false;
};

struct PipelineConfig {
  std::filesystem::path base_dir;
  std::filesystem::path input;
  std::filesystem::path output_dir;
  uint64_t seed = 1;
  StageToggles stages;

  std::filesystem::path langid_model;
  std::filesystem::path langid_corpus;
  LangIdConfig langid;

  double gap_ratio = 0.15;

  MaskPolicy mask;

  std::vector<std::string> correct_command;
  std::filesystem::path channel_model;
  std::filesystem::path char_lm;
  std::filesystem::path training_pairs;
  std::filesystem::path lm_corpus;
  BeamConfig beam;
  int lm_order = 5;
  double lm_k = 0.01;
  double channel_k = 0.1;

  std::filesystem::path rules;

  std::filesystem::path reference;
  SerWeights ser;
  // "unmasked" (before transliteration) or "final".
  std::string eval_hyp = "unmasked";

  // section.key -> value as written, for the manifest.
  std::map<std::string, std::string> raw;
};

// Throws ParseError on malformed input or unknown keys.
PipelineConfig ParsePipelineConfig(const std::string& text, const std::filesystem::path& base_dir);
PipelineConfig LoadPipelineConfig(const std::filesystem::path& path);

// Every problem that would stop a run, checked before any stage starts.
std::vector<std::string> PreflightProblems(const PipelineConfig& config);

struct PipelineResult {
  std::vector<std::string> warnings;
  std::optional<EvalReport> report;
  std::optional<EvalReport> baseline;
  std::string table;
};

// Runs the enabled stages in fixed order, writing every intermediate and a
// manifest into `out_dir`. Throws ValidationError when pre-flight fails and
// the failing stage's error otherwise; files from completed stages are kept.
PipelineResult RunPipeline(const PipelineConfig& config, const std::filesystem::path& out_dir,
                           std::ostream* log = nullptr);

// Shared stage helpers.
Document ReorderDocument(const Document& doc, double gap_ratio);
LangIdModel TrainLangIdFromFile(const std::filesystem::path& corpus, const LangIdConfig& config,
                                std::vector<std::string>* warnings);

}  // namespace ocrpipe

#endif  // OCRPIPE_PIPELINE_H_
