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

// Language identification with a multinomial logistic-regression classifier
// over hashed character n-gram counts.
//
// Features: the NFC code points of the whitespace-collapsed text, padded with
// one space on each side, cut into every n-gram with min_n <= n <= max_n.
// Each n-gram's UTF-8 bytes are hashed with FNV-1a 64 and reduced modulo the
// feature dimension. The count vector is L2-normalized.

#ifndef OCRPIPE_LANGID_H_
#define OCRPIPE_LANGID_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ocrpipe/document.h"

namespace ocrpipe {

uint64_t Fnv1a64(std::string_view bytes);

struct LabeledExample {
  std::string text;
  std::string label;
};

using LabeledCorpus = std::vector<LabeledExample>;

// One example per line: "__label__<code><TAB><text>". Blank lines are
// skipped. Throws ParseError with the 1-based line number.
LabeledCorpus ParseLabeledCorpus(const std::string& contents);
LabeledCorpus LoadLabeledCorpus(const std::filesystem::path& path);

struct LangIdConfig {
  int min_n = 1;
  int max_n = 4;
  uint32_t dimension = 1u << 18;
  int epochs = 10;
  double learning_rate = 0.1;
  uint64_t seed = 1;
};

struct LineScores {
  std::string label;
  std::map<std::string, double> scores;
};

class LangIdModel {
 public:
  static constexpr int kFormatVersion = 1;

  LangIdModel() = default;

  const std::vector<std::string>& labels() const { return labels_; }
  const LangIdConfig& config() const { return config_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }
  double training_accuracy() const { return training_accuracy_; }

  // Softmax over labels; argmax with ties going to the earlier label.
  // Throws EmptyInput for blank text.
  LineScores PredictLine(std::string_view text) const;
  std::string PredictLabel(std::string_view text) const;

  // Tokens of at least kMinTokenLength code points are classified on their
  // own; shorter ones take the label of `context_line`.
  static constexpr size_t kMinTokenLength = 4;
  std::string PredictToken(std::string_view token, std::string_view context_line) const;

  // Multiplies every weight and bias by `factor`.
  void ScaleWeights(double factor);

  // Binary container: magic, little-endian u32 header length, JSON header,
  // then float64 biases followed by the row-major weight matrix.
  std::string Serialize() const;
  static LangIdModel Deserialize(const std::string& bytes);
  void Save(const std::filesystem::path& path) const;
  static LangIdModel Load(const std::filesystem::path& path);

  // Sparse L2-normalized feature vector, sorted by index.
  std::vector<std::pair<uint32_t, double>> Features(std::string_view text) const;

 private:
  friend struct LangIdTrainer;

  std::vector<double> Logits(std::string_view text) const;

  std::vector<std::string> labels_;
  LangIdConfig config_;
  std::vector<double> weights_;  // labels_.size() x dimension
  std::vector<double> bias_;
  std::map<std::string, std::string> metadata_;
  double training_accuracy_ = 0.0;
};

struct LangIdTrainResult {
  LangIdModel model;
  // Non-fatal conditions such as "DegenerateCorpus: ...".
  std::vector<std::string> warnings;
};

// Deterministic for a fixed corpus, config and seed. Throws InsufficientData
// with fewer than two labels and InvalidArgument for blank examples.
LangIdTrainResult TrainLangId(const LabeledCorpus& corpus, const LangIdConfig& config);

// Sets Token::lang on every token with PredictToken, using the line text as
// context.
Document LabelDocument(const Document& doc, const LangIdModel& model);

}  // namespace ocrpipe

#endif  // OCRPIPE_LANGID_H_
