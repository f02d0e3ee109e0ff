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

#include "ocrpipe/cli.h"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ocrpipe/channel_model.h"
#include "ocrpipe/char_lm.h"
#include "ocrpipe/error.h"
#include "ocrpipe/ingest.h"
#include "ocrpipe/pipeline.h"
#include "ocrpipe/synth.h"
#include "ocrpipe/text.h"
#include "ocrpipe/translit.h"

namespace ocrpipe {
namespace {

namespace fs = std::filesystem;

// Bad or missing arguments detected after CLI11 parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string config;
  std::string out = ".";
  std::optional<uint64_t> seed;
  bool verbose = false;
};

struct Context {
  GlobalOptions global;
  std::ostream* out;
  std::ostream* err;

  PipelineConfig Config() const {
    PipelineConfig config;
    if (!global.config.empty()) config = LoadPipelineConfig(global.config);
    if (global.seed) {
      config.seed = *global.seed;
      config.langid.seed = *global.seed;
    }
    return config;
  }

  fs::path OutputPath(const std::string& given, const std::string& default_name) const {
    if (!given.empty()) return given;
    return fs::path(global.out) / default_name;
  }

  std::ostream* Log() const { return global.verbose ? err : nullptr; }
};

void EnsureParent(const fs::path& path) {
  if (!path.has_parent_path()) return;
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
}

fs::path Require(const std::string& flag_value, const fs::path& config_value, const char* flag) {
  if (!flag_value.empty()) return flag_value;
  if (!config_value.empty()) return config_value;
  throw UsageError(std::string(flag) + " is required");
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

void PrintWarnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"OCR post-correction pipeline for bilingual legacy documents", "ocrpipe"};
  app.require_subcommand(1);
  app.fallthrough();
  Context ctx{{}, &out, &err};
  app.add_option("--config", ctx.global.config, "Pipeline config file");
  app.add_option("--out", ctx.global.out, "Output directory");
  app.add_option("--seed", ctx.global.seed, "Random seed");
  app.add_flag("--verbose", ctx.global.verbose, "Log progress to standard error");

  std::function<int()> action;

  // ingest
  std::string ingest_input, ingest_output;
  auto* ingest = app.add_subcommand("ingest", "Import a vendor OCR response");
  ingest->add_option("--input", ingest_input, "Vendor OCR JSON")->required();
  ingest->add_option("-o,--output", ingest_output, "Output document");
  ingest->callback([&] {
    action = [&] {
      const Document doc = ImportOcr(ingest_input);
      const fs::path path = ctx.OutputPath(ingest_output, "01_ingest.json");
      EnsureParent(path);
      SaveDocument(doc, path);
      for (const auto& [k, v] : doc.metadata) {
        if (k.rfind("warning.", 0) == 0) err << "warning: " << k << ": " << v << "\n";
      }
      return kExitOk;
    };
  });

  // langid-train
  std::string lid_corpus, lid_output;
  std::optional<int> lid_min_n, lid_max_n, lid_epochs;
  std::optional<uint32_t> lid_dim;
  std::optional<double> lid_lr;
  auto* lid_train = app.add_subcommand("langid-train", "Train a language-ID model");
  lid_train->add_option("--corpus", lid_corpus, "__label__ corpus");
  lid_train->add_option("--min-n", lid_min_n);
  lid_train->add_option("--max-n", lid_max_n);
  lid_train->add_option("--dimension", lid_dim);
  lid_train->add_option("--epochs", lid_epochs);
  lid_train->add_option("--learning-rate", lid_lr);
  lid_train->add_option("-o,--output", lid_output, "Model file");
  lid_train->callback([&] {
    action = [&] {
      PipelineConfig config = ctx.Config();
      const fs::path corpus = Require(lid_corpus, config.langid_corpus, "--corpus");
      if (lid_min_n) config.langid.min_n = *lid_min_n;
      if (lid_max_n) config.langid.max_n = *lid_max_n;
      if (lid_dim) config.langid.dimension = *lid_dim;
      if (lid_epochs) config.langid.epochs = *lid_epochs;
      if (lid_lr) config.langid.learning_rate = *lid_lr;
      std::vector<std::string> warnings;
      const LangIdModel model = TrainLangIdFromFile(corpus, config.langid, &warnings);
      PrintWarnings(warnings, err);
      const fs::path path = ctx.OutputPath(lid_output, "langid.bin");
      EnsureParent(path);
      model.Save(path);
      if (ctx.global.verbose) err << "training accuracy " << model.training_accuracy() << "\n";
      return kExitOk;
    };
  });

  // langid-label
  std::string label_model, label_doc, label_output;
  auto* lid_label = app.add_subcommand("langid-label", "Label every token with a language");
  lid_label->add_option("--model", label_model, "Model file");
  lid_label->add_option("--doc", label_doc, "Input document")->required();
  lid_label->add_option("-o,--output", label_output, "Output document");
  lid_label->callback([&] {
    action = [&] {
      const PipelineConfig config = ctx.Config();
      const LangIdModel model = LangIdModel::Load(Require(label_model, config.langid_model, "--model"));
      const fs::path path = ctx.OutputPath(label_output, "02_labeled.json");
      EnsureParent(path);
      SaveDocument(LabelDocument(LoadDocument(label_doc), model), path);
      return kExitOk;
    };
  });

  // reorder
  std::string reorder_doc, reorder_output;
  std::optional<double> reorder_gap;
  auto* reorder = app.add_subcommand("reorder", "Detect columns and restore reading order");
  reorder->add_option("--doc", reorder_doc, "Input document")->required();
  reorder->add_option("--gap-ratio", reorder_gap, "Column gap threshold, fraction of text width");
  reorder->add_option("-o,--output", reorder_output, "Output document");
  reorder->callback([&] {
    action = [&] {
      const PipelineConfig config = ctx.Config();
      const fs::path path = ctx.OutputPath(reorder_output, "03_reordered.json");
      EnsureParent(path);
      SaveDocument(ReorderDocument(LoadDocument(reorder_doc), reorder_gap.value_or(config.gap_ratio)),
                   path);
      return kExitOk;
    };
  });

  // mask
  std::string mask_doc, mask_output, mask_sidecar, mask_target;
  std::vector<std::string> mask_langs, mask_punct;
  std::optional<bool> mask_numerals;
  auto* mask = app.add_subcommand("mask", "Remove non-target tokens before correction");
  mask->add_option("--doc", mask_doc, "Labeled document")->required();
  mask->add_option("--target", mask_target, "Target language label");
  mask->add_option("--mask-langs", mask_langs, "Labels to mask");
  mask->add_option("--mask-numerals", mask_numerals, "Mask numeral tokens (true/false)");
  mask->add_option("--punct", mask_punct, "Punctuation tokens to mask");
  mask->add_option("-o,--output", mask_output, "Masked document");
  mask->add_option("--sidecar", mask_sidecar, "Sidecar JSONL");
  mask->callback([&] {
    action = [&] {
      PipelineConfig config = ctx.Config();
      if (!mask_target.empty()) config.mask.target_lang = mask_target;
      if (!mask_langs.empty()) config.mask.mask_langs = {mask_langs.begin(), mask_langs.end()};
      if (!mask_punct.empty()) config.mask.mask_punct = {mask_punct.begin(), mask_punct.end()};
      if (mask_numerals) config.mask.mask_numerals = *mask_numerals;
      if (config.mask.target_lang.empty()) throw UsageError("--target is required");
      const MaskedDocument masked = MaskDocument(LoadDocument(mask_doc), config.mask);
      const fs::path doc_path = ctx.OutputPath(mask_output, "04_masked.json");
      const fs::path sidecar_path = ctx.OutputPath(mask_sidecar, "04_mask.sidecar.jsonl");
      EnsureParent(doc_path);
      EnsureParent(sidecar_path);
      SaveDocument(masked.document, doc_path);
      SaveSidecar(masked.sidecar, sidecar_path);
      return kExitOk;
    };
  });

  // correct
  std::string correct_doc, correct_output, correct_channel, correct_lm, correct_pairs,
      correct_command;
  std::optional<size_t> beam_width;
  std::optional<double> channel_weight;
  std::optional<int> max_insertions;
  auto* correct = app.add_subcommand("correct", "Post-correct every line");
  correct->add_option("--doc", correct_doc, "Input document")->required();
  correct->add_option("--channel", correct_channel, "Channel model");
  correct->add_option("--lm", correct_lm, "Character language model");
  correct->add_option("--pairs", correct_pairs, "Train both models from src<TAB>ref pairs");
  correct->add_option("--command", correct_command,
                      "External corrector, split on whitespace, run without a shell");
  correct->add_option("--beam-width", beam_width);
  correct->add_option("--channel-weight", channel_weight);
  correct->add_option("--max-insertions", max_insertions);
  correct->add_option("-o,--output", correct_output, "Output document");
  correct->callback([&] {
    action = [&] {
      PipelineConfig config = ctx.Config();
      if (beam_width) config.beam.beam_width = *beam_width;
      if (channel_weight) config.beam.channel_weight = *channel_weight;
      if (max_insertions) config.beam.max_insertions = *max_insertions;
      if (!correct_command.empty()) config.correct_command = SplitWhitespace(correct_command);
      if (!correct_channel.empty()) config.channel_model = correct_channel;
      if (!correct_lm.empty()) config.char_lm = correct_lm;
      if (!correct_pairs.empty()) config.training_pairs = correct_pairs;
      config.beam.Validate();
      const Document doc = LoadDocument(correct_doc);
      Document fixed;
      if (!config.correct_command.empty()) {
        fixed = CorrectDocumentExternal(doc, config.correct_command);
      } else if (!config.channel_model.empty() || !config.char_lm.empty()) {
        const ChannelModel channel =
            ChannelModel::Load(Require("", config.channel_model, "--channel"));
        const CharLm lm = CharLm::Load(Require("", config.char_lm, "--lm"));
        fixed = CorrectDocument(doc, channel, lm, config.beam);
      } else if (!config.training_pairs.empty()) {
        const auto pairs = LoadTrainingPairs(config.training_pairs);
        std::vector<std::string> refs;
        for (const TrainingPair& p : pairs) refs.push_back(p.ref);
        fixed = CorrectDocument(doc, ChannelModel::Train(pairs, config.channel_k),
                                CharLm::Train(refs, config.lm_order, config.lm_k), config.beam);
      } else {
        throw UsageError("one of --command, --channel with --lm, or --pairs is required");
      }
      const fs::path path = ctx.OutputPath(correct_output, "05_corrected.json");
      EnsureParent(path);
      SaveDocument(fixed, path);
      return kExitOk;
    };
  });

  // correct-train
  std::string ct_pairs, ct_lm_corpus, ct_channel_out, ct_lm_out;
  std::optional<int> ct_order;
  std::optional<double> ct_lm_k, ct_channel_k;
  auto* correct_train =
      app.add_subcommand("correct-train", "Train the channel model and character LM");
  correct_train->add_option("--pairs", ct_pairs, "src<TAB>ref pairs");
  correct_train->add_option("--lm-corpus", ct_lm_corpus, "Extra clean text, one line each");
  correct_train->add_option("--order", ct_order, "LM order");
  correct_train->add_option("--lm-k", ct_lm_k, "LM add-k");
  correct_train->add_option("--channel-k", ct_channel_k, "Channel add-k");
  correct_train->add_option("--channel-out", ct_channel_out, "Channel model output");
  correct_train->add_option("--lm-out", ct_lm_out, "LM output");
  correct_train->callback([&] {
    action = [&] {
      const PipelineConfig config = ctx.Config();
      const auto pairs = LoadTrainingPairs(Require(ct_pairs, config.training_pairs, "--pairs"));
      std::vector<std::string> text;
      for (const TrainingPair& p : pairs) text.push_back(p.ref);
      const fs::path extra = ct_lm_corpus.empty() ? config.lm_corpus : fs::path(ct_lm_corpus);
      if (!extra.empty()) {
        for (const std::string& line : Lines(ReadFile(extra))) {
          const std::string t = CollapseWhitespace(Nfc(line));
          if (!t.empty()) text.push_back(t);
        }
      }
      const ChannelModel channel = ChannelModel::Train(pairs, ct_channel_k.value_or(config.channel_k));
      const CharLm lm =
          CharLm::Train(text, ct_order.value_or(config.lm_order), ct_lm_k.value_or(config.lm_k));
      const fs::path channel_path = ctx.OutputPath(ct_channel_out, "channel.json");
      const fs::path lm_path = ctx.OutputPath(ct_lm_out, "charlm.json");
      EnsureParent(channel_path);
      EnsureParent(lm_path);
      channel.Save(channel_path);
      lm.Save(lm_path);
      return kExitOk;
    };
  });

  // unmask
  std::string unmask_doc, unmask_sidecar, unmask_output;
  bool unmask_flag = false;
  auto* unmask = app.add_subcommand("unmask", "Reinsert masked tokens");
  unmask->add_option("--doc", unmask_doc, "Corrected masked document")->required();
  unmask->add_option("--sidecar", unmask_sidecar, "Sidecar JSONL")->required();
  unmask->add_flag("--flag-masked", unmask_flag, "Mark reinserted tokens as masked");
  unmask->add_option("-o,--output", unmask_output, "Output document");
  unmask->callback([&] {
    action = [&] {
      const UnmaskedDocument result =
          UnmaskDocument(LoadDocument(unmask_doc), LoadSidecar(unmask_sidecar), unmask_flag);
      PrintWarnings(result.warnings, err);
      const fs::path path = ctx.OutputPath(unmask_output, "06_unmasked.json");
      EnsureParent(path);
      SaveDocument(result.document, path);
      return kExitOk;
    };
  });

  // translit
  std::string tr_doc, tr_text, tr_rules, tr_output;
  auto* translit = app.add_subcommand("translit", "Rewrite target-language text into another orthography");
  auto* tr_doc_opt = translit->add_option("--doc", tr_doc, "Input document");
  auto* tr_text_opt = translit->add_option("--text", tr_text, "Transliterate a string to stdout");
  tr_doc_opt->excludes(tr_text_opt);
  translit->add_option("--rules", tr_rules, "Rule table");
  translit->add_option("-o,--output", tr_output, "Output document");
  translit->callback([&] {
    action = [&] {
      const PipelineConfig config = ctx.Config();
      const RuleTable table = LoadRules(Require(tr_rules, config.rules, "--rules"));
      if (tr_text_opt->count() > 0) {
        out << table.Transliterate(tr_text) << "\n";
        return kExitOk;
      }
      if (tr_doc.empty()) throw UsageError("--doc or --text is required");
      const fs::path path = ctx.OutputPath(tr_output, "07_translit.json");
      EnsureParent(path);
      SaveDocument(TransliterateDocument(LoadDocument(tr_doc), table), path);
      return kExitOk;
    };
  });

  // eval
  std::string eval_hyp, eval_ref, eval_report;
  std::optional<double> w_insert, w_delete, w_move, theta;
  auto* eval = app.add_subcommand("eval", "Score a document against a gold reference");
  eval->add_option("--hyp", eval_hyp, "Hypothesis document")->required();
  eval->add_option("--ref", eval_ref, "Gold document");
  eval->add_option("--w-insert", w_insert);
  eval->add_option("--w-delete", w_delete);
  eval->add_option("--w-move", w_move);
  eval->add_option("--theta", theta, "Line match similarity threshold");
  eval->add_option("--report", eval_report, "Report JSON");
  eval->callback([&] {
    action = [&] {
      PipelineConfig config = ctx.Config();
      if (w_insert) config.ser.w_insert = *w_insert;
      if (w_delete) config.ser.w_delete = *w_delete;
      if (w_move) config.ser.w_move = *w_move;
      if (theta) config.ser.theta = *theta;
      const fs::path ref = Require(eval_ref, config.reference, "--ref");
      const EvalReport report = Evaluate(LoadDocument(eval_hyp), LoadDocument(ref), config.ser);
      const fs::path path = ctx.OutputPath(eval_report, "eval.json");
      EnsureParent(path);
      WriteFile(path, ReportToJson(report));
      out << FormatReportTable({{fs::path(eval_hyp).stem().string(), report}});
      return kExitOk;
    };
  });

  // run
  auto* run = app.add_subcommand("run", "Run every enabled stage from --config");
  run->callback([&] {
    action = [&] {
      if (ctx.global.config.empty()) throw UsageError("run needs --config");
      const PipelineConfig config = ctx.Config();
      fs::path out_dir = ctx.global.out;
      if (ctx.global.out == "." && !config.output_dir.empty()) out_dir = config.output_dir;
      const PipelineResult result = RunPipeline(config, out_dir, ctx.Log());
      PrintWarnings(result.warnings, err);
      if (result.report) out << result.table;
      return kExitOk;
    };
  });

  // synth
  SynthConfig synth_config;
  std::string synth_dir;
  auto* synth = app.add_subcommand("synth", "Write the synthetic bilingual fixture corpus");
  synth->add_option("--dir", synth_dir, "Destination (default: --out)");
  synth->add_option("--pages", synth_config.pages);
  synth->add_option("--rows", synth_config.rows_per_page);
  synth->add_option("--noise", synth_config.noise_rate);
  synth->add_option("--pairs", synth_config.training_pairs);
  synth->callback([&] {
    action = [&] {
      if (ctx.global.seed) synth_config.seed = *ctx.global.seed;
      WriteSynthCorpus(GenerateBilingualCorpus(synth_config),
                       synth_dir.empty() ? fs::path(ctx.global.out) : fs::path(synth_dir));
      return kExitOk;
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  if (!action) {
    err << app.help();
    return kExitUsage;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace ocrpipe
