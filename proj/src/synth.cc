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

#include "ocrpipe/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "json.hpp"
#include "ocrpipe/error.h"
#include "ocrpipe/text.h"

namespace ocrpipe {
namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kOnsets = {"k", "g", "x", "ł", "ƛ", "m", "n", "w", "y",
                                          "d", "t", "s", "l", "b", "p", "h", "q"};
const std::vector<std::string> kVowels = {"a", "e", "i", "o", "u", "ǝ"};
const std::vector<std::string> kCodas = {"", "", "", "s", "n", "m", "l", "ł", "x", "k"};

const std::vector<std::string> kEnglish = {
    "the",     "of",     "and",    "to",      "he",     "his",    "was",    "they",
    "then",    "said",   "went",   "house",   "canoe",  "chief",  "people", "river",
    "mountain", "winter", "summer", "brother", "sister", "father", "mother", "children",
    "fire",    "water",  "salmon", "cedar",   "blanket", "feast", "dance",  "song",
    "took",    "came",   "called", "gave",    "made",   "over",   "first",  "great",
    "village", "beach",  "morning", "evening", "when",  "there",  "those",  "this",
    "with",    "from",   "into",   "their",   "after",  "again",  "four",   "days",
    "wolf",    "raven",  "whale",  "box",     "mask",   "speaker", "guests", "tribe"};

// Canonical form under which confusable words collide.
std::string ConfusionKey(const std::string& word, const std::vector<Confusion>& table) {
  // Union-find over the (tiny) table.
  std::map<char32_t, char32_t> parent;
  auto find = [&](char32_t c) {
    while (parent.count(c) && parent[c] != c) c = parent[c];
    return c;
  };
  for (const Confusion& c : table) {
    const char32_t a = find(c.intended);
    const char32_t b = find(c.observed);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
    parent.emplace(std::min(a, b), std::min(a, b));
  }
  std::u32string cps = ToCodePoints(word);
  for (char32_t& c : cps) c = find(c);
  return FromCodePoints(cps);
}

Json Vertex(int64_t x, int64_t y) { return Json{{"x", x}, {"y", y}}; }

constexpr int64_t kPageWidth = 2000;
constexpr int64_t kPageHeight = 2800;
constexpr int64_t kLeftX = 100;
constexpr int64_t kRightX = 1150;
constexpr int64_t kTopY = 150;
constexpr int64_t kRowPitch = 80;
constexpr int64_t kLineHeight = 40;
constexpr int64_t kCharWidth = 14;
constexpr int64_t kSpaceWidth = 12;

// One vendor paragraph holding `words` laid out from x0 on row y0.
Json Paragraph(const std::vector<std::string>& words, int64_t x0, int64_t y0) {
  Json out_words = Json::array();
  int64_t x = x0;
  for (const std::string& w : words) {
    const int64_t width = static_cast<int64_t>(CodePointLength(w)) * kCharWidth;
    Json box;
    box["vertices"] = Json::array({Vertex(x, y0), Vertex(x + width, y0),
                                   Vertex(x + width, y0 + kLineHeight),
                                   Vertex(x, y0 + kLineHeight)});
    out_words.push_back(Json{{"text", w}, {"boundingBox", std::move(box)}});
    x += width + kSpaceWidth;
  }
  return Json{{"words", std::move(out_words)}};
}

Line GoldLine(const std::vector<std::string>& words, size_t n) {
  Line line;
  char id[32];
  std::snprintf(id, sizeof(id), "l%04zu", n);
  line.line_id = id;
  for (const std::string& w : words) line.tokens.push_back(Token{w, std::nullopt, std::nullopt, false});
  return line;
}

const std::string& EnglishGlossWord(std::mt19937_64& rng) {
  while (true) {
    const std::string& w = kEnglish[Draw(rng, kEnglish.size())];
    if (CodePointLength(w) >= 4) return w;
  }
}

}  // namespace

uint64_t Draw(std::mt19937_64& rng, uint64_t n) {
  if (n == 0) throw InvalidArgument("Draw from an empty range");
  return rng() % n;
}

double DrawUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

const std::vector<Confusion>& DefaultConfusions() {
  static const std::vector<Confusion> kTable = {
      {U'ǝ', U'e'}, {U'ł', U'l'}, {U'ƛ', U'λ'}, {U'e', U'c'}, {U'u', U'n'}};
  return kTable;
}

std::string InjectNoise(const std::string& text, const std::vector<Confusion>& table, double rate,
                        std::mt19937_64& rng) {
  std::u32string cps = ToCodePoints(text);
  for (char32_t& c : cps) {
    for (const Confusion& conf : table) {
      if (conf.intended != c) continue;
      if (DrawUnit(rng) < rate) c = conf.observed;
      break;
    }
  }
  return FromCodePoints(cps);
}

SyntheticLanguage::SyntheticLanguage(uint64_t seed, size_t lexicon_size,
                                     const std::vector<Confusion>& table) {
  std::mt19937_64 rng(seed);
  std::set<std::string> keys;
  const std::set<std::string> english(kEnglish.begin(), kEnglish.end());
  size_t attempts = 0;
  while (lexicon_.size() < lexicon_size) {
    if (++attempts > lexicon_size * 1000) throw InvalidArgument("lexicon size too large");
    const size_t syllables = 1 + Draw(rng, 3);
    std::string word;
    for (size_t s = 0; s < syllables; ++s) {
      word += kOnsets[Draw(rng, kOnsets.size())];
      word += kVowels[Draw(rng, kVowels.size())];
      if (s + 1 == syllables) word += kCodas[Draw(rng, kCodas.size())];
    }
    if (english.count(word)) continue;
    if (!keys.insert(ConfusionKey(word, table)).second) continue;
    lexicon_.push_back(word);
  }
  double total = 0.0;
  for (size_t r = 0; r < lexicon_.size(); ++r) {
    total += 1.0 / std::pow(static_cast<double>(r + 1), 0.9);
    cumulative_.push_back(total);
  }
  for (double& c : cumulative_) c /= total;
}

const std::string& SyntheticLanguage::Word(std::mt19937_64& rng) const {
  const double u = DrawUnit(rng);
  const size_t idx = static_cast<size_t>(
      std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
  return lexicon_[std::min(idx, lexicon_.size() - 1)];
}

std::string SyntheticLanguage::Sentence(std::mt19937_64& rng, size_t min_words,
                                        size_t max_words) const {
  const size_t n = min_words + Draw(rng, max_words - min_words + 1);
  std::vector<std::string> words;
  for (size_t i = 0; i < n; ++i) words.push_back(Word(rng));
  return Join(words, " ");
}

std::string EnglishSentence(std::mt19937_64& rng, size_t min_words, size_t max_words) {
  const size_t n = min_words + Draw(rng, max_words - min_words + 1);
  std::vector<std::string> words;
  for (size_t i = 0; i < n; ++i) words.push_back(kEnglish[Draw(rng, kEnglish.size())]);
  return Join(words, " ");
}

SynthCorpus GenerateBilingualCorpus(const SynthConfig& config) {
  if (config.pages == 0 || config.rows_per_page == 0) {
    throw InvalidArgument("synthetic corpus needs at least one page and one row");
  }
  if (config.rows_per_page * kRowPitch + kTopY > kPageHeight) {
    throw InvalidArgument("too many rows for the page height");
  }
  const SyntheticLanguage lang(config.seed);
  const std::vector<Confusion>& table = DefaultConfusions();
  std::mt19937_64 rng(config.seed ^ 0x5eedULL);
  SynthCorpus corpus;

  Json vendor_pages = Json::array();
  corpus.gold.source_id = "gold";
  size_t verse = 1;
  for (size_t p = 0; p < config.pages; ++p) {
    Page gold_page;
    gold_page.page_number = static_cast<int>(p + 1);
    gold_page.width = kPageWidth;
    gold_page.height = kPageHeight;
    std::vector<std::vector<std::string>> left_words, right_words;
    Json blocks = Json::array();
    for (size_t row = 0; row < config.rows_per_page; ++row) {
      std::vector<std::string> left_clean, left_noisy, right;
      if (Draw(rng, 3) == 0) {
        const std::string number = std::to_string(verse++);
        left_clean.push_back(number);
        left_noisy.push_back(number);
        right.push_back(number);
      }
      for (const std::string& w : SplitWhitespace(lang.Sentence(rng, 3, 6))) {
        left_clean.push_back(w);
        left_noisy.push_back(InjectNoise(w, table, config.noise_rate, rng));
      }
      if (Draw(rng, 4) == 0) {
        const std::string gloss = EnglishGlossWord(rng);
        for (const std::string& w : {std::string("("), gloss, std::string(")")}) {
          left_clean.push_back(w);
          left_noisy.push_back(w);
        }
      }
      for (const std::string& w : SplitWhitespace(EnglishSentence(rng, 3, 7))) right.push_back(w);

      const int64_t y = kTopY + static_cast<int64_t>(row) * kRowPitch;
      Json paragraphs = Json::array({Paragraph(left_noisy, kLeftX, y), Paragraph(right, kRightX, y)});
      blocks.push_back(Json{{"paragraphs", std::move(paragraphs)}});
      left_words.push_back(std::move(left_clean));
      right_words.push_back(std::move(right));
    }
    // Gold reading order: the whole left column, then the right one.
    size_t n = 0;
    for (const auto& words : left_words) gold_page.lines.push_back(GoldLine(words, ++n));
    for (const auto& words : right_words) gold_page.lines.push_back(GoldLine(words, ++n));
    corpus.gold.pages.push_back(std::move(gold_page));
    vendor_pages.push_back(
        Json{{"width", kPageWidth}, {"height", kPageHeight}, {"blocks", std::move(blocks)}});
  }
  Json vendor;
  vendor["responses"] =
      Json::array({Json{{"fullTextAnnotation", Json{{"pages", std::move(vendor_pages)}}}}});
  corpus.vendor_json = vendor.dump(1) + "\n";

  // Language-ID training text: sentences, with the noisy form half the time,
  // plus isolated words so short spans classify well.
  std::mt19937_64 lid_rng(config.seed ^ 0x1a9dULL);
  std::string lid;
  for (size_t i = 0; i < config.langid_lines; ++i) {
    std::string s = lang.Sentence(lid_rng, 3, 8);
    if (Draw(lid_rng, 2) == 0) s = InjectNoise(s, table, config.noise_rate, lid_rng);
    lid += "__label__tgt\t" + s + "\n";
    lid += "__label__eng\t" + EnglishSentence(lid_rng, 3, 8) + "\n";
  }
  for (const std::string& w : lang.lexicon()) lid += "__label__tgt\t" + w + "\n";
  for (const std::string& w : kEnglish) lid += "__label__eng\t" + w + "\n";
  corpus.langid_corpus = lid;

  std::mt19937_64 pair_rng(config.seed ^ 0x9a125ULL);
  for (size_t i = 0; i < config.training_pairs; ++i) {
    const std::string ref = lang.Sentence(pair_rng, 3, 8);
    corpus.pairs.push_back({InjectNoise(ref, table, config.noise_rate, pair_rng), ref});
  }

  corpus.rules =
      "#orthography: synth-legacy -> synth-modern\n"
      "#name: synthetic-fixture\n"
      "# Test fixture only; not a real orthography mapping.\n"
      "ƛ\ttł\n"
      "ł\tlh\n"
      "ǝ\ta̱\n"
      "x\tx̱\n"
      "q\tḵ\n";

  corpus.config =
      "# Synthetic bilingual corpus.\n"
      "[pipeline]\n"
      "input = vendor.json\n"
      "seed = " + std::to_string(config.seed) + "\n"
      "\n"
      "[stages]\n"
      "langid = true\n"
      "reorder = true\n"
      "mask = true\n"
      "correct = true\n"
      "translit = true\n"
      "eval = true\n"
      "\n"
      "[langid]\n"
      "corpus = langid.txt\n"
      "\n"
      "[mask]\n"
      "target = tgt\n"
      "mask_langs = eng\n"
      "mask_numerals = true\n"
      "mask_punct = ( )\n"
      "\n"
      "[correct]\n"
      "pairs = pairs.tsv\n"
      "beam_width = 8\n"
      "channel_weight = 1.0\n"
      "\n"
      "[translit]\n"
      "rules = rules.tsv\n"
      "\n"
      "[eval]\n"
      "reference = gold.json\n";
  return corpus;
}

std::string TrainingPairsToTsv(const std::vector<TrainingPair>& pairs) {
  std::string out;
  for (const TrainingPair& p : pairs) out += p.src + "\t" + p.ref + "\n";
  return out;
}

void WriteSynthCorpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  WriteFile(dir / "vendor.json", corpus.vendor_json);
  SaveDocument(corpus.gold, dir / "gold.json");
  WriteFile(dir / "langid.txt", corpus.langid_corpus);
  WriteFile(dir / "pairs.tsv", TrainingPairsToTsv(corpus.pairs));
  WriteFile(dir / "rules.tsv", corpus.rules);
  WriteFile(dir / "pipeline.ini", corpus.config);
}

}  // namespace ocrpipe
