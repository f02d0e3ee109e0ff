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

// Synthetic bilingual fixtures. Nothing here is real language data: the
// "tgt" language is a random syllable lexicon and the legacy -> modern rule
// table is a labeled test fixture.

#ifndef OCRPIPE_SYNTH_H_
#define OCRPIPE_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ocrpipe/channel_model.h"
#include "ocrpipe/document.h"

namespace ocrpipe {

// Uniform integer in [0, n) from the raw generator output, so streams are the
// same across standard libraries.
uint64_t Draw(std::mt19937_64& rng, uint64_t n);
double DrawUnit(std::mt19937_64& rng);

struct Confusion {
  char32_t intended;
  char32_t observed;
};

// Five intended -> observed character swaps typical of a Latin-trained OCR
// engine reading a phonetic orthography.
const std::vector<Confusion>& DefaultConfusions();

// Replaces each character that has a confusion entry with its observed form
// with probability `rate`.
std::string InjectNoise(const std::string& text, const std::vector<Confusion>& table, double rate,
                        std::mt19937_64& rng);

class SyntheticLanguage {
 public:
  // Builds a lexicon of `lexicon_size` distinct words. No two words can be
  // turned into one another by the confusions in `table`.
  SyntheticLanguage(uint64_t seed, size_t lexicon_size = 160,
                    const std::vector<Confusion>& table = DefaultConfusions());

  const std::vector<std::string>& lexicon() const { return lexicon_; }

  // Zipf-weighted word.
  const std::string& Word(std::mt19937_64& rng) const;
  // min_words..max_words words joined by spaces.
  std::string Sentence(std::mt19937_64& rng, size_t min_words = 4, size_t max_words = 8) const;

 private:
  std::vector<std::string> lexicon_;
  std::vector<double> cumulative_;
};

// English filler from a fixed word list.
std::string EnglishSentence(std::mt19937_64& rng, size_t min_words = 4, size_t max_words = 8);

struct SynthConfig {
  uint64_t seed = 7;
  size_t pages = 2;
  size_t rows_per_page = 14;
  double noise_rate = 0.1;
  size_t training_pairs = 500;
  size_t langid_lines = 400;  // per label
};

struct SynthCorpus {
  std::string vendor_json;  // first-pass OCR in vendor layout
  Document gold;
  std::string langid_corpus;  // __label__ lines
  std::vector<TrainingPair> pairs;
  std::string rules;   // fixture rule table
  std::string config;  // pipeline config referencing the files above
};

// Two-column pages: target-language text on the left, English on the right,
// line numbers and parenthesized glosses mixed in. The vendor response reads
// across both columns row by row and carries substitution noise on
// target-language words.
SynthCorpus GenerateBilingualCorpus(const SynthConfig& config);

// Writes vendor.json, gold.json, langid.txt, pairs.tsv, rules.tsv and
// pipeline.ini into `dir`.
void WriteSynthCorpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

std::string TrainingPairsToTsv(const std::vector<TrainingPair>& pairs);

}  // namespace ocrpipe

#endif  // OCRPIPE_SYNTH_H_
