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

#include "ocrpipe/char_lm.h"

#include <cmath>
#include <limits>

#include "json.hpp"
#include "ocrpipe/document.h"
#include "ocrpipe/error.h"
#include "ocrpipe/text.h"

namespace ocrpipe {

CharLm CharLm::Train(const std::vector<std::string>& corpus, int order, double k) {
  if (corpus.empty()) throw EmptyTrainingSet("language model corpus is empty");
  if (order < 1) throw InvalidArgument("n-gram order must be >= 1");
  if (k < 0) throw InvalidArgument("smoothing constant must be >= 0");
  CharLm lm;
  lm.order_ = order;
  lm.k_ = k;
  lm.contexts_.resize(static_cast<size_t>(order));
  for (const std::string& line : corpus) {
    const std::u32string text = ToCodePoints(Nfc(line));
    lm.vocab_.insert(text.begin(), text.end());
    std::u32string padded(static_cast<size_t>(order - 1), kBos);
    padded += text;
    padded.push_back(kEos);
    for (size_t i = static_cast<size_t>(order - 1); i < padded.size(); ++i) {
      const std::u32string context = padded.substr(i - (order - 1), order - 1);
      ++lm.events_[{context, padded[i]}];
      lm.AddEvent(context, padded[i], 1);
    }
  }
  return lm;
}

void CharLm::AddEvent(const std::u32string& context, char32_t next, int64_t count) {
  for (size_t len = 0; len <= context.size(); ++len) {
    ContextCounts& c = contexts_[len][context.substr(context.size() - len)];
    c.total += count;
    c.next[next] += count;
  }
}

double CharLm::Prob(std::u32string_view history, char32_t next) const {
  const double outcomes = static_cast<double>(OutcomeCount());
  const size_t max_len = std::min(history.size(), static_cast<size_t>(order_ - 1));
  for (size_t len = max_len + 1; len-- > 0;) {
    if (len >= contexts_.size()) continue;
    const auto& table = contexts_[len];
    auto it = table.find(std::u32string(history.substr(history.size() - len)));
    if (it == table.end() || it->second.total == 0) continue;
    auto n = it->second.next.find(next);
    const double count = n == it->second.next.end() ? 0.0 : static_cast<double>(n->second);
    return (count + k_) / (static_cast<double>(it->second.total) + k_ * outcomes);
  }
  return 1.0 / outcomes;
}

double CharLm::LogProb(std::u32string_view history, char32_t next) const {
  const double p = Prob(history, next);
  return p > 0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

std::u32string CharLm::ContextOf(std::u32string_view text) const {
  const size_t want = static_cast<size_t>(order_ - 1);
  std::u32string context;
  if (text.size() < want) context.assign(want - text.size(), kBos);
  context.append(text.substr(text.size() > want ? text.size() - want : 0));
  return context;
}

double CharLm::LogProbString(std::u32string_view text) const {
  double total = 0.0;
  for (size_t i = 0; i <= text.size(); ++i) {
    const char32_t next = i < text.size() ? text[i] : kEos;
    total += LogProb(ContextOf(text.substr(0, i)), next);
  }
  return total;
}

std::string CharLm::ToJson() const {
  nlohmann::ordered_json j;
  j["format"] = "ocrpipe-charlm";
  j["version"] = kFormatVersion;
  j["order"] = order_;
  j["k"] = k_;
  j["vocabulary"] = nlohmann::ordered_json::array();
  for (char32_t c : vocab_) j["vocabulary"].push_back(static_cast<uint32_t>(c));
  // Code point ints; kBos and kEos sit just above the Unicode range.
  j["events"] = nlohmann::ordered_json::array();
  for (const auto& [key, n] : events_) {
    std::vector<uint32_t> context(key.first.begin(), key.first.end());
    j["events"].push_back(
        nlohmann::ordered_json::array({context, static_cast<uint32_t>(key.second), n}));
  }
  return j.dump() + "\n";
}

CharLm CharLm::FromJson(const std::string& text) {
  CharLm lm;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != "ocrpipe-charlm") {
      throw ParseError("not a character LM file");
    }
    const int version = j.at("version").get<int>();
    if (version != kFormatVersion) {
      throw VersionMismatch("character LM version " + std::to_string(version));
    }
    lm.order_ = j.at("order").get<int>();
    lm.k_ = j.at("k").get<double>();
    if (lm.order_ < 1) throw ParseError("order must be >= 1");
    lm.contexts_.resize(static_cast<size_t>(lm.order_));
    for (const auto& c : j.at("vocabulary")) lm.vocab_.insert(c.get<uint32_t>());
    for (const auto& e : j.at("events")) {
      const auto cps = e.at(0).get<std::vector<uint32_t>>();
      if (cps.size() != static_cast<size_t>(lm.order_ - 1)) {
        throw ParseError("event context has the wrong length");
      }
      const std::u32string context(cps.begin(), cps.end());
      const char32_t next = e.at(1).get<uint32_t>();
      const int64_t n = e.at(2).get<int64_t>();
      lm.events_[{context, next}] = n;
      lm.AddEvent(context, next, n);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("character LM: ") + e.what());
  }
  return lm;
}

void CharLm::Save(const std::filesystem::path& path) const { WriteFile(path, ToJson()); }

CharLm CharLm::Load(const std::filesystem::path& path) { return FromJson(ReadFile(path)); }

}  // namespace ocrpipe
