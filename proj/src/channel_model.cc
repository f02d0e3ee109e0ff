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

#include "ocrpipe/channel_model.h"

#include <sstream>

#include "json.hpp"
#include "ocrpipe/document.h"
#include "ocrpipe/edit_distance.h"
#include "ocrpipe/error.h"
#include "ocrpipe/text.h"

namespace ocrpipe {
namespace {

using OrderedJson = nlohmann::ordered_json;

std::string Utf8(char32_t c) {
  std::string s;
  AppendUtf8(c, &s);
  return s;
}

char32_t SingleChar(const std::string& s) {
  const std::u32string cps = ToCodePoints(s);
  if (cps.size() != 1) throw ParseError("expected a single character, got \"" + s + "\"");
  return cps[0];
}

}  // namespace

std::vector<TrainingPair> ParseTrainingPairs(const std::string& contents) {
  std::vector<TrainingPair> pairs;
  std::istringstream in(contents);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError("pairs line " + std::to_string(lineno) + ": expected src<TAB>ref");
    }
    pairs.push_back({Nfc(line.substr(0, tab)), Nfc(line.substr(tab + 1))});
  }
  return pairs;
}

std::vector<TrainingPair> LoadTrainingPairs(const std::filesystem::path& path) {
  return ParseTrainingPairs(ReadFile(path));
}

int64_t ChannelModel::IntendedCounts::Total() const {
  int64_t total = no_edit + deleted;
  for (const auto& [o, n] : substituted) total += n;
  return total;
}

ChannelModel ChannelModel::Train(const std::vector<TrainingPair>& pairs, double k) {
  if (pairs.empty()) throw EmptyTrainingSet("no training pairs");
  if (k < 0) throw InvalidArgument("smoothing constant must be >= 0");
  ChannelModel model(k);
  for (const TrainingPair& pair : pairs) {
    const std::u32string src = ToCodePoints(Nfc(pair.src));
    const std::u32string ref = ToCodePoints(Nfc(pair.ref));
    if (ref.empty()) throw InvalidArgument("training pair with empty reference");
    model.alphabet_.insert(src.begin(), src.end());
    model.alphabet_.insert(ref.begin(), ref.end());
    model.slots_ += static_cast<int64_t>(ref.size()) + 1;
    for (const EditOp& op : AlignPair(src, ref)) {
      switch (op.kind) {
        case EditKind::kNoEdit:
          ++model.intended_[op.ref].no_edit;
          break;
        case EditKind::kSubstitute:
          ++model.intended_[op.ref].substituted[op.src];
          break;
        case EditKind::kDelete:  // src char absent from ref: spurious
          ++model.inserted_[op.src];
          ++model.insertion_events_;
          break;
        case EditKind::kInsert:  // ref char absent from src: dropped
          ++model.intended_[op.ref].deleted;
          break;
      }
    }
  }
  model.Finalize();
  return model;
}

void ChannelModel::Finalize() {
  intended_for_.clear();
  deleted_chars_.clear();
  for (const auto& [c, counts] : intended_) {
    for (const auto& [o, n] : counts.substituted) {
      if (n > 0) intended_for_[o].push_back(c);
    }
    if (counts.deleted > 0) deleted_chars_.push_back(c);
  }
}

const ChannelModel::IntendedCounts* ChannelModel::Find(char32_t intended) const {
  auto it = intended_.find(intended);
  if (it == intended_.end() || it->second.Total() == 0) return nullptr;
  return &it->second;
}

double ChannelModel::NoEditProb(char32_t intended) const {
  const IntendedCounts* c = Find(intended);
  if (c == nullptr) return 1.0;
  const double outcomes = static_cast<double>(alphabet_.size()) + 1.0;
  return (c->no_edit + k_) / (c->Total() + k_ * outcomes);
}

double ChannelModel::SubstituteProb(char32_t observed, char32_t intended) const {
  const IntendedCounts* c = Find(intended);
  if (c == nullptr || observed == intended || alphabet_.count(observed) == 0) return 0.0;
  const double outcomes = static_cast<double>(alphabet_.size()) + 1.0;
  auto it = c->substituted.find(observed);
  const double n = it == c->substituted.end() ? 0.0 : static_cast<double>(it->second);
  return (n + k_) / (c->Total() + k_ * outcomes);
}

double ChannelModel::DeleteProb(char32_t intended) const {
  const IntendedCounts* c = Find(intended);
  if (c == nullptr) return 0.0;
  const double outcomes = static_cast<double>(alphabet_.size()) + 1.0;
  return (c->deleted + k_) / (c->Total() + k_ * outcomes);
}

double ChannelModel::InsertionRate() const {
  if (slots_ == 0) return 0.0;
  return (insertion_events_ + k_) / (insertion_events_ + slots_ + 2.0 * k_);
}

double ChannelModel::InsertedCharProb(char32_t observed) const {
  if (alphabet_.count(observed) == 0) return 0.0;
  const double denom = insertion_events_ + k_ * static_cast<double>(alphabet_.size());
  if (denom <= 0) return 0.0;
  auto it = inserted_.find(observed);
  const double n = it == inserted_.end() ? 0.0 : static_cast<double>(it->second);
  return (n + k_) / denom;
}

double ChannelModel::OutcomeMass(char32_t intended) const {
  double mass = NoEditProb(intended) + DeleteProb(intended);
  for (char32_t o : alphabet_) {
    if (o != intended) mass += SubstituteProb(o, intended);
  }
  return mass;
}

const std::vector<char32_t>& ChannelModel::IntendedFor(char32_t observed) const {
  static const std::vector<char32_t> kNone;
  auto it = intended_for_.find(observed);
  return it == intended_for_.end() ? kNone : it->second;
}

bool ChannelModel::SeenInserted(char32_t observed) const {
  auto it = inserted_.find(observed);
  return it != inserted_.end() && it->second > 0;
}

int64_t ChannelModel::no_edit_count(char32_t c) const {
  auto it = intended_.find(c);
  return it == intended_.end() ? 0 : it->second.no_edit;
}

int64_t ChannelModel::substitution_count(char32_t observed, char32_t intended) const {
  auto it = intended_.find(intended);
  if (it == intended_.end()) return 0;
  auto s = it->second.substituted.find(observed);
  return s == it->second.substituted.end() ? 0 : s->second;
}

int64_t ChannelModel::deletion_count(char32_t c) const {
  auto it = intended_.find(c);
  return it == intended_.end() ? 0 : it->second.deleted;
}

int64_t ChannelModel::insertion_count(char32_t c) const {
  auto it = inserted_.find(c);
  return it == inserted_.end() ? 0 : it->second;
}

std::string ChannelModel::ToJson() const {
  OrderedJson j;
  j["format"] = "ocrpipe-channel";
  j["version"] = kFormatVersion;
  j["k"] = k_;
  j["alphabet"] = OrderedJson::array();
  for (char32_t c : alphabet_) j["alphabet"].push_back(Utf8(c));
  j["intended"] = OrderedJson::array();
  for (const auto& [c, counts] : intended_) {
    OrderedJson e;
    e["c"] = Utf8(c);
    e["no_edit"] = counts.no_edit;
    e["deleted"] = counts.deleted;
    e["substituted"] = OrderedJson::array();
    for (const auto& [o, n] : counts.substituted) {
      e["substituted"].push_back(OrderedJson::array({Utf8(o), n}));
    }
    j["intended"].push_back(std::move(e));
  }
  j["inserted"] = OrderedJson::array();
  for (const auto& [o, n] : inserted_) j["inserted"].push_back(OrderedJson::array({Utf8(o), n}));
  j["insertion_events"] = insertion_events_;
  j["slots"] = slots_;
  return j.dump(1) + "\n";
}

ChannelModel ChannelModel::FromJson(const std::string& text) {
  ChannelModel model;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != "ocrpipe-channel") {
      throw ParseError("not a channel model file");
    }
    const int version = j.at("version").get<int>();
    if (version != kFormatVersion) {
      throw VersionMismatch("channel model version " + std::to_string(version));
    }
    model.k_ = j.at("k").get<double>();
    for (const auto& c : j.at("alphabet")) model.alphabet_.insert(SingleChar(c.get<std::string>()));
    for (const auto& e : j.at("intended")) {
      IntendedCounts& counts = model.intended_[SingleChar(e.at("c").get<std::string>())];
      counts.no_edit = e.at("no_edit").get<int64_t>();
      counts.deleted = e.at("deleted").get<int64_t>();
      for (const auto& s : e.at("substituted")) {
        counts.substituted[SingleChar(s.at(0).get<std::string>())] = s.at(1).get<int64_t>();
      }
    }
    for (const auto& s : j.at("inserted")) {
      model.inserted_[SingleChar(s.at(0).get<std::string>())] = s.at(1).get<int64_t>();
    }
    model.insertion_events_ = j.at("insertion_events").get<int64_t>();
    model.slots_ = j.at("slots").get<int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("channel model: ") + e.what());
  }
  model.Finalize();
  return model;
}

void ChannelModel::Save(const std::filesystem::path& path) const { WriteFile(path, ToJson()); }

ChannelModel ChannelModel::Load(const std::filesystem::path& path) {
  return FromJson(ReadFile(path));
}

bool ChannelModel::operator==(const ChannelModel& other) const {
  return ToJson() == other.ToJson();
}

}  // namespace ocrpipe
