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

#include "ocrpipe/pipeline.h"

#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "json.hpp"
#include "ocrpipe/channel_model.h"
#include "ocrpipe/char_lm.h"
#include "ocrpipe/error.h"
#include "ocrpipe/hash.h"
#include "ocrpipe/ingest.h"
#include "ocrpipe/text.h"
#include "ocrpipe/translit.h"

namespace ocrpipe {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

const std::map<std::string, std::set<std::string>>& KnownKeys() {
  static const std::map<std::string, std::set<std::string>> kKeys = {
      {"pipeline", {"input", "output", "seed"}},
      {"stages", {"langid", "reorder", "mask", "correct", "translit", "eval"}},
      {"langid", {"model", "corpus", "min_n", "max_n", "dimension", "epochs", "learning_rate"}},
      {"reorder", {"gap_ratio"}},
      {"mask", {"target", "mask_langs", "mask_numerals", "mask_punct"}},
      {"correct",
       {"command", "channel", "lm", "pairs", "lm_corpus", "beam_width", "channel_weight",
        "max_insertions", "lm_order", "lm_k", "channel_k"}},
      {"translit", {"rules"}},
      {"eval", {"reference", "w_insert", "w_delete", "w_move", "theta", "hyp"}},
  };
  return kKeys;
}

std::string Unquote(std::string value) {
  value = CollapseWhitespace(value);
  if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
      value.back() == value.front()) {
    value = value.substr(1, value.size() - 2);
  }
  return value;
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ParseError("config " + key + ": expected true/false, got \"" + v + "\"");
}

double ParseDouble(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ParseError("config " + key + ": expected a number, got \"" + v + "\"");
}

int64_t ParseInt(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used == v.size()) return i;
  } catch (const std::exception&) {
  }
  throw ParseError("config " + key + ": expected an integer, got \"" + v + "\"");
}

uint64_t ParseSeed(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const unsigned long long i = std::stoull(v, &used);
    if (used == v.size() && v[0] != '-') return i;
  } catch (const std::exception&) {
  }
  throw ParseError("config " + key + ": expected a non-negative integer, got \"" + v + "\"");
}

struct StageRecord {
  std::string name;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, sha256
  std::vector<std::pair<std::string, std::string>> outputs;  // file name, sha256
  std::vector<std::string> warnings;
};

class RunState {
 public:
  RunState(const PipelineConfig& config, fs::path out_dir, std::ostream* log)
      : config_(config), out_dir_(std::move(out_dir)), log_(log) {}

  fs::path Out(const std::string& name) const { return out_dir_ / name; }

  void Begin(const std::string& name) {
    records_.push_back(StageRecord{name, {}, {}, {}});
    if (log_ != nullptr) *log_ << "[ocrpipe] stage " << name << "\n";
  }

  // External input, reported relative to the config directory.
  void ExternalInput(const fs::path& path) {
    std::string shown = path.lexically_proximate(config_.base_dir).generic_string();
    records_.back().inputs.emplace_back(shown, Sha256File(path));
  }

  // A file produced earlier in this run.
  void RunInput(const std::string& name) {
    records_.back().inputs.emplace_back(name, Sha256File(Out(name)));
  }

  void Output(const std::string& name) {
    records_.back().outputs.emplace_back(name, Sha256File(Out(name)));
    if (log_ != nullptr) *log_ << "[ocrpipe]   wrote " << name << "\n";
  }

  void Warn(const std::string& warning) {
    records_.back().warnings.push_back(warning);
    warnings_.push_back(records_.back().name + ": " + warning);
    if (log_ != nullptr) *log_ << "[ocrpipe]   warning: " << warning << "\n";
  }

  void WriteDocument(const Document& doc, const std::string& name) {
    SaveDocument(doc, Out(name));
    Output(name);
  }

  void WriteManifest(const std::string& failed_stage, const std::string& error) const {
    Json manifest;
    manifest["format"] = "ocrpipe-manifest";
    manifest["version"] = 1;
    manifest["seed"] = config_.seed;
    Json cfg = Json::object();
    for (const auto& [k, v] : config_.raw) cfg[k] = v;
    manifest["config"] = std::move(cfg);
    Json stages = Json::array();
    for (const StageRecord& r : records_) {
      Json s;
      s["name"] = r.name;
      Json inputs = Json::array();
      for (const auto& [p, h] : r.inputs) inputs.push_back(Json{{"path", p}, {"sha256", h}});
      Json outputs = Json::array();
      for (const auto& [p, h] : r.outputs) outputs.push_back(Json{{"path", p}, {"sha256", h}});
      s["inputs"] = std::move(inputs);
      s["outputs"] = std::move(outputs);
      s["warnings"] = r.warnings;
      stages.push_back(std::move(s));
    }
    manifest["stages"] = std::move(stages);
    manifest["complete"] = failed_stage.empty();
    if (!failed_stage.empty()) {
      manifest["failed_stage"] = failed_stage;
      manifest["error"] = error;
    }
    WriteFile(Out("manifest.json"), manifest.dump(1) + "\n");
  }

  const std::string& current() const {
    static const std::string kNone;
    return records_.empty() ? kNone : records_.back().name;
  }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  const PipelineConfig& config_;
  fs::path out_dir_;
  std::ostream* log_;
  std::vector<StageRecord> records_;
  std::vector<std::string> warnings_;
};

void CheckFile(const fs::path& path, const std::string& what, std::vector<std::string>* problems) {
  if (path.empty()) {
    problems->push_back(what + " is not set");
  } else if (!fs::is_regular_file(path)) {
    problems->push_back(what + " not found: " + path.string());
  }
}

}  // namespace

PipelineConfig ParsePipelineConfig(const std::string& text, const fs::path& base_dir) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  PipelineConfig config;
  config.base_dir = base_dir;
  auto path_of = [&](const std::string& v) -> fs::path {
    if (v.empty()) return {};
    const fs::path p(v);
    return p.is_absolute() ? p : (base_dir / p).lexically_normal();
  };

  for (const auto& [section, body] : tree) {
    auto known = KnownKeys().find(section);
    if (known == KnownKeys().end()) {
      if (!body.empty() || body.data().empty()) {
        throw ParseError("config: unknown section [" + section + "]");
      }
      throw ParseError("config: key \"" + section + "\" outside a section");
    }
    for (const auto& [key, node] : body) {
      const std::string name = section + "." + key;
      if (!known->second.count(key)) throw ParseError("config: unknown key " + name);
      const std::string v = Unquote(node.data());
      config.raw[name] = v;

      if (section == "pipeline") {
        if (key == "input") config.input = path_of(v);
        if (key == "output") config.output_dir = path_of(v);
        if (key == "seed") config.seed = ParseSeed(name, v);
      } else if (section == "stages") {
        const bool on = ParseBool(name, v);
        if (key == "langid") config.stages.langid = on;
        if (key == "reorder") config.stages.reorder = on;
        if (key == "mask") config.stages.mask = on;
        if (key == "correct") config.stages.correct = on;
        if (key == "translit") config.stages.translit = on;
        if (key == "eval") config.stages.eval = on;
      } else if (section == "langid") {
        if (key == "model") config.langid_model = path_of(v);
        if (key == "corpus") config.langid_corpus = path_of(v);
        if (key == "min_n") config.langid.min_n = static_cast<int>(ParseInt(name, v));
        if (key == "max_n") config.langid.max_n = static_cast<int>(ParseInt(name, v));
        if (key == "dimension") config.langid.dimension = static_cast<uint32_t>(ParseInt(name, v));
        if (key == "epochs") config.langid.epochs = static_cast<int>(ParseInt(name, v));
        if (key == "learning_rate") config.langid.learning_rate = ParseDouble(name, v);
      } else if (section == "reorder") {
        config.gap_ratio = ParseDouble(name, v);
      } else if (section == "mask") {
        if (key == "target") config.mask.target_lang = v;
        if (key == "mask_numerals") config.mask.mask_numerals = ParseBool(name, v);
        if (key == "mask_langs") {
          const auto items = SplitWhitespace(v);
          config.mask.mask_langs = {items.begin(), items.end()};
        }
        if (key == "mask_punct") {
          const auto items = SplitWhitespace(v);
          config.mask.mask_punct = {items.begin(), items.end()};
        }
      } else if (section == "correct") {
        if (key == "command") config.correct_command = SplitWhitespace(v);
        if (key == "channel") config.channel_model = path_of(v);
        if (key == "lm") config.char_lm = path_of(v);
        if (key == "pairs") config.training_pairs = path_of(v);
        if (key == "lm_corpus") config.lm_corpus = path_of(v);
        if (key == "beam_width") config.beam.beam_width = static_cast<size_t>(ParseInt(name, v));
        if (key == "channel_weight") config.beam.channel_weight = ParseDouble(name, v);
        if (key == "max_insertions") config.beam.max_insertions = static_cast<int>(ParseInt(name, v));
        if (key == "lm_order") config.lm_order = static_cast<int>(ParseInt(name, v));
        if (key == "lm_k") config.lm_k = ParseDouble(name, v);
        if (key == "channel_k") config.channel_k = ParseDouble(name, v);
      } else if (section == "translit") {
        config.rules = path_of(v);
      } else if (section == "eval") {
        if (key == "reference") config.reference = path_of(v);
        if (key == "w_insert") config.ser.w_insert = ParseDouble(name, v);
        if (key == "w_delete") config.ser.w_delete = ParseDouble(name, v);
        if (key == "w_move") config.ser.w_move = ParseDouble(name, v);
        if (key == "theta") config.ser.theta = ParseDouble(name, v);
        if (key == "hyp") {
          if (v != "unmasked" && v != "final") {
            throw ParseError("config " + name + ": expected unmasked or final");
          }
          config.eval_hyp = v;
        }
      }
    }
  }
  config.langid.seed = config.seed;
  return config;
}

PipelineConfig LoadPipelineConfig(const fs::path& path) {
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  return ParsePipelineConfig(ReadFile(path), base);
}

std::vector<std::string> PreflightProblems(const PipelineConfig& config) {
  std::vector<std::string> problems;
  CheckFile(config.input, "pipeline.input", &problems);
  if (config.stages.langid) {
    if (config.langid_model.empty() && config.langid_corpus.empty()) {
      problems.push_back("langid stage needs langid.model or langid.corpus");
    } else if (!config.langid_model.empty()) {
      CheckFile(config.langid_model, "langid.model", &problems);
    } else {
      CheckFile(config.langid_corpus, "langid.corpus", &problems);
    }
  }
  if (config.gap_ratio < 0) problems.push_back("reorder.gap_ratio must be >= 0");
  if (config.stages.mask) {
    if (config.mask.target_lang.empty()) problems.push_back("mask.target is not set");
    try {
      config.mask.Validate();
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  }
  if (config.stages.correct) {
    if (!config.correct_command.empty()) {
      // Resolved on PATH at spawn time.
    } else if (!config.channel_model.empty() || !config.char_lm.empty()) {
      CheckFile(config.channel_model, "correct.channel", &problems);
      CheckFile(config.char_lm, "correct.lm", &problems);
    } else if (!config.training_pairs.empty()) {
      CheckFile(config.training_pairs, "correct.pairs", &problems);
      if (!config.lm_corpus.empty()) CheckFile(config.lm_corpus, "correct.lm_corpus", &problems);
    } else {
      problems.push_back("correct stage needs correct.command, correct.channel + correct.lm, or "
                         "correct.pairs");
    }
    try {
      config.beam.Validate();
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
    if (config.lm_order < 1) problems.push_back("correct.lm_order must be >= 1");
  }
  if (config.stages.translit) CheckFile(config.rules, "translit.rules", &problems);
  if (config.stages.eval) {
    CheckFile(config.reference, "eval.reference", &problems);
    try {
      config.ser.Validate();
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  }
  return problems;
}

Document ReorderDocument(const Document& doc, double gap_ratio) {
  Document out = doc;
  for (Page& page : out.pages) {
    const ColumnModel columns = DetectColumns(page, gap_ratio);
    page = ReorderPage(AssignColumns(page, columns), columns);
  }
  return out;
}

LangIdModel TrainLangIdFromFile(const fs::path& corpus, const LangIdConfig& config,
                                std::vector<std::string>* warnings) {
  LangIdTrainResult result = TrainLangId(LoadLabeledCorpus(corpus), config);
  if (warnings != nullptr) {
    warnings->insert(warnings->end(), result.warnings.begin(), result.warnings.end());
  }
  return std::move(result.model);
}

PipelineResult RunPipeline(const PipelineConfig& config, const fs::path& out_dir,
                           std::ostream* log) {
  const std::vector<std::string> problems = PreflightProblems(config);
  if (!problems.empty()) {
    std::string msg = "pre-flight failed:";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  RunState run(config, out_dir, log);
  PipelineResult result;
  try {
    run.Begin("ingest");
    run.ExternalInput(config.input);
    const Document ingested = ImportOcr(config.input);
    for (const auto& [k, v] : ingested.metadata) {
      if (k.rfind("warning.", 0) == 0) run.Warn(k + ": " + v);
    }
    run.WriteDocument(ingested, "01_ingest.json");
    Document current = ingested;
    std::string current_name = "01_ingest.json";

    if (config.stages.langid) {
      LangIdModel model;
      if (!config.langid_model.empty()) {
        run.Begin("langid-label");
        run.ExternalInput(config.langid_model);
        model = LangIdModel::Load(config.langid_model);
      } else {
        run.Begin("langid-train");
        run.ExternalInput(config.langid_corpus);
        std::vector<std::string> warnings;
        model = TrainLangIdFromFile(config.langid_corpus, config.langid, &warnings);
        for (const std::string& w : warnings) run.Warn(w);
        model.Save(run.Out("00_langid.bin"));
        run.Output("00_langid.bin");
        run.Begin("langid-label");
        run.RunInput("00_langid.bin");
      }
      run.RunInput(current_name);
      current = LabelDocument(current, model);
      current_name = "02_labeled.json";
      run.WriteDocument(current, current_name);
    }

    if (config.stages.reorder) {
      run.Begin("reorder");
      run.RunInput(current_name);
      current = ReorderDocument(current, config.gap_ratio);
      current_name = "03_reordered.json";
      run.WriteDocument(current, current_name);
    }

    Sidecar sidecar;
    if (config.stages.mask) {
      run.Begin("mask");
      run.RunInput(current_name);
      MaskedDocument masked = MaskDocument(current, config.mask);
      sidecar = std::move(masked.sidecar);
      current = std::move(masked.document);
      current_name = "04_masked.json";
      run.WriteDocument(current, current_name);
      SaveSidecar(sidecar, run.Out("04_mask.sidecar.jsonl"));
      run.Output("04_mask.sidecar.jsonl");
    }

    if (config.stages.correct) {
      if (!config.correct_command.empty()) {
        run.Begin("correct");
        run.RunInput(current_name);
        current = CorrectDocumentExternal(current, config.correct_command);
      } else {
        ChannelModel channel;
        CharLm lm;
        if (!config.channel_model.empty()) {
          run.Begin("correct");
          run.ExternalInput(config.channel_model);
          run.ExternalInput(config.char_lm);
          channel = ChannelModel::Load(config.channel_model);
          lm = CharLm::Load(config.char_lm);
        } else {
          run.Begin("correct-train");
          run.ExternalInput(config.training_pairs);
          const std::vector<TrainingPair> pairs = LoadTrainingPairs(config.training_pairs);
          std::vector<std::string> lm_text;
          for (const TrainingPair& p : pairs) lm_text.push_back(p.ref);
          if (!config.lm_corpus.empty()) {
            run.ExternalInput(config.lm_corpus);
            std::istringstream in(ReadFile(config.lm_corpus));
            std::string line;
            while (std::getline(in, line)) {
              const std::string text = CollapseWhitespace(Nfc(line));
              if (!text.empty()) lm_text.push_back(text);
            }
          }
          channel = ChannelModel::Train(pairs, config.channel_k);
          lm = CharLm::Train(lm_text, config.lm_order, config.lm_k);
          channel.Save(run.Out("00_channel.json"));
          run.Output("00_channel.json");
          lm.Save(run.Out("00_charlm.json"));
          run.Output("00_charlm.json");
          run.Begin("correct");
          run.RunInput("00_channel.json");
          run.RunInput("00_charlm.json");
        }
        run.RunInput(current_name);
        current = CorrectDocument(current, channel, lm, config.beam);
      }
      current_name = "05_corrected.json";
      run.WriteDocument(current, current_name);
    }

    if (config.stages.mask) {
      run.Begin("unmask");
      run.RunInput(current_name);
      run.RunInput("04_mask.sidecar.jsonl");
      UnmaskedDocument unmasked = UnmaskDocument(current, sidecar, /*flag_masked=*/true);
      for (const std::string& w : unmasked.warnings) run.Warn(w);
      current = std::move(unmasked.document);
      current_name = "06_unmasked.json";
      run.WriteDocument(current, current_name);
    }
    const Document before_translit = current;
    const std::string before_translit_name = current_name;

    if (config.stages.translit) {
      run.Begin("translit");
      run.ExternalInput(config.rules);
      run.RunInput(current_name);
      const RuleTable table = LoadRules(config.rules);
      current = TransliterateDocument(current, table);
      current_name = "07_translit.json";
      run.WriteDocument(current, current_name);
    }

    if (config.stages.eval) {
      run.Begin("eval");
      run.ExternalInput(config.reference);
      const bool final_hyp = config.eval_hyp == "final";
      run.RunInput(final_hyp ? current_name : before_translit_name);
      run.RunInput("01_ingest.json");
      const Document gold = LoadDocument(config.reference);
      result.report = Evaluate(final_hyp ? current : before_translit, gold, config.ser);
      result.baseline = Evaluate(ingested, gold, config.ser);
      WriteFile(run.Out("08_eval.json"), ReportToJson(*result.report));
      run.Output("08_eval.json");
      WriteFile(run.Out("08_eval_baseline.json"), ReportToJson(*result.baseline));
      run.Output("08_eval_baseline.json");
      result.table = FormatReportTable({{"first-pass", *result.baseline}, {"pipeline", *result.report}});
      WriteFile(run.Out("08_eval_table.txt"), result.table);
      run.Output("08_eval_table.txt");
    }
  } catch (const Error& e) {
    run.WriteManifest(run.current(), e.what());
    throw;
  }
  run.WriteManifest("", "");
  result.warnings = run.warnings();
  return result;
}

}  // namespace ocrpipe
