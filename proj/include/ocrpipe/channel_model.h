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

// Character-level OCR error channel P(observed | intended), estimated from
// aligned (first-pass, gold) line pairs.
//
// Generative story for one intended string: before every intended character
// and once at the end there is an insertion slot that emits zero or more
// spurious observed characters (each with probability p_ins, then closes
// with 1 - p_ins). Each intended character c is then either copied, replaced
// by some observed o, or deleted, with a distribution that sums to one over
// {no-edit, delete} + {substitute to o : o in alphabet, o != c}.
//
// Add-k smoothing applies per intended character over those outcomes.
// Characters never seen on the intended side are always copied, so an
// untrained channel is the identity.

#ifndef OCRPIPE_CHANNEL_MODEL_H_
#define OCRPIPE_CHANNEL_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ocrpipe {

struct TrainingPair {
  std::string src;  // first-pass OCR
  std::string ref;  // gold
};

// "src<TAB>ref" per line; texts are NFC-normalized. Blank lines skipped.
std::vector<TrainingPair> ParseTrainingPairs(const std::string& contents);
std::vector<TrainingPair> LoadTrainingPairs(const std::filesystem::path& path);

class ChannelModel {
 public:
  static constexpr int kFormatVersion = 1;

  ChannelModel() = default;
  explicit ChannelModel(double k) : k_(k) {}

  // Throws EmptyTrainingSet on an empty list, InvalidArgument on an empty
  // reference or negative k.
  static ChannelModel Train(const std::vector<TrainingPair>& pairs, double k = 0.1);

  double k() const { return k_; }
  const std::set<char32_t>& alphabet() const { return alphabet_; }

  double NoEditProb(char32_t intended) const;
  double SubstituteProb(char32_t observed, char32_t intended) const;
  double DeleteProb(char32_t intended) const;
  // Probability that an insertion slot emits one more spurious character.
  double InsertionRate() const;
  // Distribution of the spurious character, given that one is emitted.
  double InsertedCharProb(char32_t observed) const;

  // Sum over every outcome for `intended`; 1 up to rounding.
  double OutcomeMass(char32_t intended) const;

  // Decoder search space: only edits seen in training.
  const std::vector<char32_t>& IntendedFor(char32_t observed) const;
  const std::vector<char32_t>& DeletedChars() const { return deleted_chars_; }
  bool SeenInserted(char32_t observed) const;

  int64_t no_edit_count(char32_t c) const;
  int64_t substitution_count(char32_t observed, char32_t intended) const;
  int64_t deletion_count(char32_t c) const;
  int64_t insertion_count(char32_t c) const;

  std::string ToJson() const;
  static ChannelModel FromJson(const std::string& text);
  void Save(const std::filesystem::path& path) const;
  static ChannelModel Load(const std::filesystem::path& path);

  bool operator==(const ChannelModel& other) const;

 private:
  struct IntendedCounts {
    int64_t no_edit = 0;
    int64_t deleted = 0;
    std::map<char32_t, int64_t> substituted;  // observed -> count
    int64_t Total() const;
  };

  void Finalize();
  const IntendedCounts* Find(char32_t intended) const;

  double k_ = 0.1;
  std::set<char32_t> alphabet_;
  std::map<char32_t, IntendedCounts> intended_;
  std::map<char32_t, int64_t> inserted_;
  int64_t insertion_events_ = 0;
  int64_t slots_ = 0;

  // Derived indexes.
  std::map<char32_t, std::vector<char32_t>> intended_for_;
  std::vector<char32_t> deleted_chars_;
};

}  // namespace ocrpipe

#endif  // OCRPIPE_CHANNEL_MODEL_H_
