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

#include "ocrpipe/langid.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "ocrpipe/document.h"
#include "ocrpipe/error.h"
#include "ocrpipe/text.h"

namespace ocrpipe {
namespace {

constexpr char kMagic[8] = {'O', 'C', 'R', 'P', 'L', 'I', 'D', '\0'};
constexpr const char* kLabelPrefix = "__label__";
constexpr const char* kHashId = "fnv1a64";

void PutU64(uint64_t v, std::string* out) {
  for (int i = 0; i < 8; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint64_t GetU64(const std::string& bytes, size_t offset) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<uint64_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  return v;
}

void CheckConfig(const LangIdConfig& config) {
  if (config.min_n < 1 || config.max_n < config.min_n) {
    throw InvalidArgument("n-gram range must satisfy 1 <= min_n <= max_n");
  }
  if (config.dimension == 0) throw InvalidArgument("feature dimension must be positive");
  if (config.epochs < 0) throw InvalidArgument("epochs must be >= 0");
  if (!(config.learning_rate > 0)) throw InvalidArgument("learning rate must be positive");
}

}  // namespace

uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

LabeledCorpus ParseLabeledCorpus(const std::string& contents) {
  LabeledCorpus corpus;
  std::istringstream in(contents);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (CollapseWhitespace(line).empty()) continue;
    const std::string where = "corpus line " + std::to_string(lineno);
    if (line.rfind(kLabelPrefix, 0) != 0) throw ParseError(where + ": missing __label__ prefix");
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(where + ": missing TAB after label");
    LabeledExample ex;
    ex.label = line.substr(std::strlen(kLabelPrefix), tab - std::strlen(kLabelPrefix));
    ex.text = Nfc(line.substr(tab + 1));
    if (ex.label.empty()) throw ParseError(where + ": empty label");
    if (CollapseWhitespace(ex.text).empty()) throw ParseError(where + ": empty text");
    corpus.push_back(std::move(ex));
  }
  return corpus;
}

LabeledCorpus LoadLabeledCorpus(const std::filesystem::path& path) {
  return ParseLabeledCorpus(ReadFile(path));
}

std::vector<std::pair<uint32_t, double>> LangIdModel::Features(std::string_view text) const {
  const std::u32string cps = ToCodePoints(" " + CollapseWhitespace(Nfc(text)) + " ");
  if (cps.size() <= 2) throw EmptyInput("text is empty after trimming");
  std::unordered_map<uint32_t, double> counts;
  std::string gram;
  for (int n = config_.min_n; n <= config_.max_n; ++n) {
    if (cps.size() < static_cast<size_t>(n)) break;
    for (size_t i = 0; i + n <= cps.size(); ++i) {
      gram.clear();
      for (int k = 0; k < n; ++k) AppendUtf8(cps[i + k], &gram);
      counts[static_cast<uint32_t>(Fnv1a64(gram) % config_.dimension)] += 1.0;
    }
  }
  std::vector<std::pair<uint32_t, double>> features(counts.begin(), counts.end());
  std::sort(features.begin(), features.end());
  double norm = 0.0;
  for (const auto& f : features) norm += f.second * f.second;
  norm = std::sqrt(norm);
  for (auto& f : features) f.second /= norm;
  return features;
}

std::vector<double> LangIdModel::Logits(std::string_view text) const {
  const auto features = Features(text);
  std::vector<double> logits(bias_);
  for (size_t k = 0; k < labels_.size(); ++k) {
    const double* row = weights_.data() + k * config_.dimension;
    for (const auto& [index, value] : features) logits[k] += row[index] * value;
  }
  return logits;
}

LineScores LangIdModel::PredictLine(std::string_view text) const {
  const std::vector<double> logits = Logits(text);
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(logits.size());
  double total = 0.0;
  for (size_t k = 0; k < logits.size(); ++k) {
    probs[k] = std::exp(logits[k] - top);
    total += probs[k];
  }
  LineScores out;
  size_t best = 0;
  for (size_t k = 0; k < logits.size(); ++k) {
    out.scores[labels_[k]] = probs[k] / total;
    if (logits[k] > logits[best]) best = k;
  }
  out.label = labels_[best];
  return out;
}

std::string LangIdModel::PredictLabel(std::string_view text) const {
  const std::vector<double> logits = Logits(text);
  size_t best = 0;
  for (size_t k = 1; k < logits.size(); ++k) {
    if (logits[k] > logits[best]) best = k;
  }
  return labels_[best];
}

std::string LangIdModel::PredictToken(std::string_view token,
                                      std::string_view context_line) const {
  const std::string trimmed = CollapseWhitespace(Nfc(token));
  if (trimmed.empty()) throw EmptyInput("token is empty");
  if (CodePointLength(trimmed) >= kMinTokenLength) return PredictLabel(trimmed);
  return PredictLabel(context_line);
}

void LangIdModel::ScaleWeights(double factor) {
  for (double& w : weights_) w *= factor;
  for (double& b : bias_) b *= factor;
}

std::string LangIdModel::Serialize() const {
  nlohmann::ordered_json header;
  header["version"] = kFormatVersion;
  header["labels"] = labels_;
  header["min_n"] = config_.min_n;
  header["max_n"] = config_.max_n;
  header["dimension"] = config_.dimension;
  header["hash"] = kHashId;
  header["training"] = {{"seed", config_.seed},
                        {"epochs", config_.epochs},
                        {"learning_rate", config_.learning_rate},
                        {"train_accuracy", training_accuracy_}};
  header["metadata"] = metadata_;
  const std::string header_text = header.dump();

  std::string out(kMagic, sizeof(kMagic));
  const auto len = static_cast<uint32_t>(header_text.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((len >> (8 * i)) & 0xff));
  out += header_text;
  out.reserve(out.size() + 8 * (bias_.size() + weights_.size()));
  for (double b : bias_) PutU64(std::bit_cast<uint64_t>(b), &out);
  for (double w : weights_) PutU64(std::bit_cast<uint64_t>(w), &out);
  return out;
}

LangIdModel LangIdModel::Deserialize(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) + 4 ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("not a language-id model file");
  }
  uint32_t len = 0;
  for (int i = 0; i < 4; ++i) {
    len |= static_cast<uint32_t>(static_cast<unsigned char>(bytes[sizeof(kMagic) + i]))
           << (8 * i);
  }
  const size_t header_start = sizeof(kMagic) + 4;
  if (bytes.size() < header_start + len) throw ParseError("truncated model header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(header_start, len));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model header: ") + e.what());
  }

  LangIdModel model;
  try {
    const int version = header.at("version").get<int>();
    if (version != kFormatVersion) {
      throw VersionMismatch("model format version " + std::to_string(version) +
                            ", expected " + std::to_string(kFormatVersion));
    }
    if (header.at("hash").get<std::string>() != kHashId) {
      throw VersionMismatch("unsupported hash " + header.at("hash").get<std::string>());
    }
    model.labels_ = header.at("labels").get<std::vector<std::string>>();
    model.config_.min_n = header.at("min_n").get<int>();
    model.config_.max_n = header.at("max_n").get<int>();
    model.config_.dimension = header.at("dimension").get<uint32_t>();
    const auto& training = header.at("training");
    model.config_.seed = training.at("seed").get<uint64_t>();
    model.config_.epochs = training.at("epochs").get<int>();
    model.config_.learning_rate = training.at("learning_rate").get<double>();
    model.training_accuracy_ = training.at("train_accuracy").get<double>();
    model.metadata_ = header.at("metadata").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model header: ") + e.what());
  }
  if (model.labels_.size() < 2) throw ParseError("model has fewer than two labels");
  CheckConfig(model.config_);

  const size_t n_labels = model.labels_.size();
  const size_t n_values = n_labels + n_labels * model.config_.dimension;
  const size_t payload = header_start + len;
  if (bytes.size() != payload + 8 * n_values) {
    throw ParseError("weight payload has " + std::to_string(bytes.size() - payload) +
                     " bytes, expected " + std::to_string(8 * n_values));
  }
  model.bias_.resize(n_labels);
  model.weights_.resize(n_labels * model.config_.dimension);
  size_t offset = payload;
  for (double& b : model.bias_) {
    b = std::bit_cast<double>(GetU64(bytes, offset));
    offset += 8;
  }
  for (double& w : model.weights_) {
    w = std::bit_cast<double>(GetU64(bytes, offset));
    if (!std::isfinite(w)) throw ParseError("non-finite weight");
    offset += 8;
  }
  return model;
}

void LangIdModel::Save(const std::filesystem::path& path) const {
  WriteFile(path, Serialize());
}

LangIdModel LangIdModel::Load(const std::filesystem::path& path) {
  return Deserialize(ReadFile(path));
}

struct LangIdTrainer {
  static LangIdTrainResult Train(const LabeledCorpus& corpus, const LangIdConfig& config) {
    CheckConfig(config);
    std::set<std::string> label_set;
    for (const auto& ex : corpus) {
      if (CollapseWhitespace(ex.text).empty()) {
        throw InvalidArgument("corpus contains an empty line");
      }
      label_set.insert(ex.label);
    }
    if (label_set.size() < 2) {
      throw InsufficientData("need at least 2 labels, corpus has " +
                             std::to_string(label_set.size()));
    }

    LangIdTrainResult result;
    LangIdModel& model = result.model;
    model.labels_.assign(label_set.begin(), label_set.end());
    model.config_ = config;
    const size_t n_labels = model.labels_.size();
    model.bias_.assign(n_labels, 0.0);
    model.weights_.assign(n_labels * config.dimension, 0.0);

    std::map<std::string, std::set<std::string>> texts_by_label;
    for (const auto& ex : corpus) texts_by_label[ex.label].insert(CollapseWhitespace(ex.text));
    const bool degenerate = std::all_of(
        texts_by_label.begin(), texts_by_label.end(),
        [&](const auto& kv) { return kv.second == texts_by_label.begin()->second; });
    if (degenerate) {
      result.warnings.push_back(
          "DegenerateCorpus: every label has the same set of texts");
      model.metadata_["warning"] = "DegenerateCorpus";
    }

    std::vector<std::vector<std::pair<uint32_t, double>>> features;
    std::vector<size_t> targets;
    features.reserve(corpus.size());
    for (const auto& ex : corpus) {
      features.push_back(model.Features(ex.text));
      targets.push_back(static_cast<size_t>(
          std::find(model.labels_.begin(), model.labels_.end(), ex.label) -
          model.labels_.begin()));
    }

    // Per-example SGD on the softmax cross-entropy, learning rate decaying
    // linearly to zero over the whole run.
    std::mt19937_64 rng(config.seed);
    std::vector<size_t> order(corpus.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    const double total_steps = static_cast<double>(config.epochs) * corpus.size();
    double step = 0.0;
    std::vector<double> logits(n_labels);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      for (size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng() % i]);
      }
      for (size_t idx : order) {
        const double lr = config.learning_rate * (1.0 - step / total_steps);
        step += 1.0;
        const auto& x = features[idx];
        for (size_t k = 0; k < n_labels; ++k) {
          const double* row = model.weights_.data() + k * config.dimension;
          double z = model.bias_[k];
          for (const auto& [f, v] : x) z += row[f] * v;
          logits[k] = z;
        }
        const double top = *std::max_element(logits.begin(), logits.end());
        double total = 0.0;
        for (double& z : logits) {
          z = std::exp(z - top);
          total += z;
        }
        for (size_t k = 0; k < n_labels; ++k) {
          const double g = lr * ((k == targets[idx] ? 1.0 : 0.0) - logits[k] / total);
          double* row = model.weights_.data() + k * config.dimension;
          for (const auto& [f, v] : x) row[f] += g * v;
          model.bias_[k] += g;
        }
      }
    }

    size_t correct = 0;
    for (const auto& ex : corpus) {
      if (model.PredictLabel(ex.text) == ex.label) ++correct;
    }
    model.training_accuracy_ = static_cast<double>(correct) / corpus.size();
    return result;
  }
};

LangIdTrainResult TrainLangId(const LabeledCorpus& corpus, const LangIdConfig& config) {
  return LangIdTrainer::Train(corpus, config);
}

Document LabelDocument(const Document& doc, const LangIdModel& model) {
  Document out = doc;
  for (Page& page : out.pages) {
    for (Line& line : page.lines) {
      const std::string context = line.Text();
      for (Token& token : line.tokens) token.lang = model.PredictToken(token.text, context);
    }
  }
  return out;
}

}  // namespace ocrpipe
