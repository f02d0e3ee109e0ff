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

#ifndef OCRPIPE_CHAR_LM_H_
#define OCRPIPE_CHAR_LM_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ocrpipe {

// Character n-gram language model with add-k smoothing.
//
//   P(c | h) = (count(h, c) + k) / (count(h) + k * V')
//
// where V' is the vocabulary size plus one for the end sentinel. Each string
// is padded with order-1 begin sentinels and one end sentinel. When the full
// context h was never seen, the longest seen suffix of h is used instead, so
// every conditional stays a proper distribution over vocabulary + end.
// Characters outside the vocabulary get the unseen-event mass k / (count(h)
// + k * V').
class CharLm {
 public:
  static constexpr int kFormatVersion = 1;
  static constexpr char32_t kBos = 0x110000;
  static constexpr char32_t kEos = 0x110001;

  CharLm() = default;

  // Throws EmptyTrainingSet on an empty corpus.
  static CharLm Train(const std::vector<std::string>& corpus, int order = 5, double k = 0.01);

  int order() const { return order_; }
  double k() const { return k_; }
  const std::set<char32_t>& vocabulary() const { return vocab_; }
  // |vocabulary| + 1.
  size_t OutcomeCount() const { return vocab_.size() + 1; }

  // `history` holds the preceding symbols (kBos allowed); only the last
  // order-1 are used.
  double Prob(std::u32string_view history, char32_t next) const;
  double LogProb(std::u32string_view history, char32_t next) const;

  // log P(text + end) with begin padding.
  double LogProbString(std::u32string_view text) const;

  // The order-1 symbol context that precedes position `size` of `text`,
  // begin-padded.
  std::u32string ContextOf(std::u32string_view text) const;

  std::string ToJson() const;
  static CharLm FromJson(const std::string& text);
  void Save(const std::filesystem::path& path) const;
  static CharLm Load(const std::filesystem::path& path);

  bool operator==(const CharLm& other) const { return ToJson() == other.ToJson(); }

 private:
  struct ContextCounts {
    int64_t total = 0;
    std::map<char32_t, int64_t> next;
  };

  void AddEvent(const std::u32string& context, char32_t next, int64_t count);

  int order_ = 5;
  double k_ = 0.01;
  std::set<char32_t> vocab_;
  // contexts_[len] maps a context of `len` symbols to its counts.
  std::vector<std::unordered_map<std::u32string, ContextCounts>> contexts_;
  // Full-order events, the serialized form.
  std::map<std::pair<std::u32string, char32_t>, int64_t> events_;
};

}  // namespace ocrpipe

#endif  // OCRPIPE_CHAR_LM_H_
