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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ocrpipe/channel_model.h"
#include "ocrpipe/char_lm.h"
#include "ocrpipe/corrector.h"
#include "ocrpipe/document.h"
#include "ocrpipe/error.h"
#include "ocrpipe/eval.h"
#include "ocrpipe/langid.h"
#include "ocrpipe/mask.h"
#include "ocrpipe/pipeline.h"
#include "ocrpipe/synth.h"
#include "ocrpipe/text.h"
#include "ocrpipe/translit.h"
#include "oracles.h"

using namespace ocrpipe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failure message only; later ones rarely add anything.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && failures_++ == 0) first_ = what;
  }
  Outcome Done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s), first: " + first_};
  }

 private:
  size_t failures_ = 0;
  std::string first_;
};

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string Utf8(const std::u32string& s) { return FromCodePoints(s); }

// --- 1 -------------------------------------------------------------------

Outcome CerOracle() {
  Check check;
  size_t compared = 0;
  auto compare = [&](const std::u32string& h, const std::u32string& r) {
    ++compared;
    if (r.empty()) {
      bool threw = false;
      try {
        Cer(Utf8(h), Utf8(r));
      } catch (const EmptyReference&) {
        threw = true;
      }
      check.Expect(threw, "empty reference accepted");
      return;
    }
    const double want =
        static_cast<double>(oracle::EditDistance(h, r)) / static_cast<double>(r.size());
    const double got = Cer(Utf8(h), Utf8(r));
    check.Expect(got == want, "cer(\"" + Utf8(h) + "\", \"" + Utf8(r) + "\")");
  };

  // Every ordered pair up to length 6.
  const auto small = oracle::AllStrings(U"abc", 0, 6);
  for (const auto& h : small) {
    for (const auto& r : small) compare(h, r);
  }
  // Every string of length 7..12 appears on each side against a random
  // partner of length 0..12.
  std::mt19937_64 rng(1);
  const auto big = oracle::AllStrings(U"abc", 7, 12);
  auto random_abc = [&]() {
    std::u32string s(rng() % 13, U'a');
    for (char32_t& c : s) c = U"abc"[rng() % 3];
    return s;
  };
  for (const auto& s : big) {
    compare(s, random_abc());
    compare(random_abc(), s);
  }
  // Random NFC pairs with multi-code-point graphemes, up to 40 characters.
  const std::vector<std::string> pieces = {"a",  "b",  "\xC3\xA9", "e\xCC\x81", "x\xCC\xB1",
                                           "\xC7\x9D", "\xC5\x82", "k\xCC\x93", "\xC6\x9B", "'"};
  for (int t = 0; t < 1000; ++t) {
    std::string h, r;
    for (size_t i = rng() % 41; i > 0; --i) h += pieces[rng() % pieces.size()];
    for (size_t i = 1 + rng() % 40; i > 0; --i) r += pieces[rng() % pieces.size()];
    const std::u32string hc = ToCodePoints(Nfc(h));
    const std::u32string rc = ToCodePoints(Nfc(r));
    if (hc.size() > 40 || rc.size() > 40) continue;
    compare(hc, rc);
    // Decomposed input scores the same as composed.
    check.Expect(Cer(h, r) == Cer(Utf8(hc), Utf8(rc)), "NFC-insensitive CER");
  }
  return check.Done(std::to_string(compared) + " pairs equal to the DP oracle");
}

// --- 2 -------------------------------------------------------------------

std::vector<std::string> RandomPage(std::mt19937_64& rng, size_t max_lines) {
  static const std::vector<std::string> words = {"ya", "gi", "kwa", "the", "said", "(", ")",
                                                 "12", "ǝx", "ƛ'a", "mas", "lo", "wa"};
  std::vector<std::string> page(1 + rng() % max_lines);
  for (std::string& line : page) {
    for (size_t w = 1 + rng() % 7; w > 0; --w) {
      if (!line.empty()) line += ' ';
      line += words[rng() % words.size()];
    }
  }
  return page;
}

std::vector<std::string> Perturb(std::vector<std::string> page, std::mt19937_64& rng) {
  for (size_t ops = rng() % 5; ops > 0; --ops) {
    switch (rng() % 4) {
      case 0:
        if (!page.empty()) page.erase(page.begin() + static_cast<long>(rng() % page.size()));
        break;
      case 1:
        page.insert(page.begin() + static_cast<long>(rng() % (page.size() + 1)), "spurious line");
        break;
      case 2:
        if (page.size() > 1) std::swap(page[rng() % page.size()], page[rng() % page.size()]);
        break;
      default:
        if (!page.empty()) page[rng() % page.size()] += " x";
    }
  }
  return page;
}

// Exhaustive search over partial one-to-one matchings restricted to pairs
// with similarity >= theta.
double BruteForceAssignment(const std::vector<std::vector<double>>& sim, double theta) {
  const size_t n = sim.size();
  const size_t m = n == 0 ? 0 : sim[0].size();
  std::vector<bool> used(m, false);
  double best = 0;
  std::function<void(size_t, double)> go = [&](size_t i, double total) {
    if (i == n) {
      best = std::max(best, total);
      return;
    }
    go(i + 1, total);
    for (size_t j = 0; j < m; ++j) {
      if (used[j] || sim[i][j] < theta) continue;
      used[j] = true;
      go(i + 1, total + sim[i][j]);
      used[j] = false;
    }
  };
  go(0, 0.0);
  return best;
}

double OracleSimilarity(const std::string& h, const std::string& r) {
  const std::u32string hc = ToCodePoints(Nfc(h));
  const std::u32string rc = ToCodePoints(Nfc(r));
  if (rc.empty()) return hc.empty() ? 1.0 : 0.0;
  return std::max(0.0, 1.0 - static_cast<double>(oracle::EditDistance(hc, rc)) /
                                 static_cast<double>(rc.size()));
}

Outcome SerProperties() {
  Check check;
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const auto page = RandomPage(rng, 30);
    check.Expect(Ser(page, page).score == 0.0, "ser(x, x) != 0");
  }
  for (int t = 0; t < 500; ++t) {
    const auto ref = RandomPage(rng, 25);
    const auto hyp = t % 2 ? RandomPage(rng, 25) : Perturb(ref, rng);
    const double s = Ser(hyp, ref).score;
    check.Expect(s >= 0.0 && s <= 100.0, "ser out of range: " + Fmt("%g", s));
  }

  std::vector<std::string> ten;
  for (int i = 1; i <= 10; ++i) ten.push_back("line number " + std::to_string(i) + " of the page");
  const SerResult same = Ser(ten, ten);
  check.Expect(same.score == 0.0 && same.counts == SerCounts{0, 0, 0}, "identity example");
  std::vector<std::string> missing = ten;
  missing.erase(missing.begin() + 4);
  const SerResult miss = Ser(missing, ten);
  check.Expect(miss.score == 10.0 && miss.counts == SerCounts{0, 1, 0},
               "missing-line example gave " + Fmt("%g", miss.score));
  std::vector<std::string> swapped = ten;
  std::swap(swapped[2], swapped[3]);
  const SerResult swap = Ser(swapped, ten);
  check.Expect(swap.score == 10.0 && swap.counts == SerCounts{0, 0, 1},
               "adjacent-swap example gave " + Fmt("%g", swap.score));

  for (int t = 0; t < 200; ++t) {
    const auto ref = RandomPage(rng, 8);
    auto hyp = t % 3 == 0 ? RandomPage(rng, 8) : Perturb(ref, rng);
    if (hyp.size() > 8) hyp.resize(8);
    std::vector<std::vector<double>> sim(hyp.size(), std::vector<double>(ref.size()));
    for (size_t i = 0; i < hyp.size(); ++i) {
      for (size_t j = 0; j < ref.size(); ++j) sim[i][j] = OracleSimilarity(hyp[i], ref[j]);
    }
    const LineMatching m = AlignLines(hyp, ref, 0.5);
    double total = 0;
    std::vector<bool> hyp_seen(hyp.size()), ref_seen(ref.size());
    for (const auto& [i, j] : m) {
      check.Expect(!hyp_seen[i] && !ref_seen[j], "matching not one-to-one");
      hyp_seen[i] = ref_seen[j] = true;
      check.Expect(sim[i][j] >= 0.5, "matched pair below threshold");
      total += sim[i][j];
    }
    check.Expect(std::abs(total - BruteForceAssignment(sim, 0.5)) < 1e-9,
                 "align_lines is not optimal");
  }
  return check.Done("3 examples exact, 700 random pages, 200 assignments optimal");
}

// --- 3 -------------------------------------------------------------------

Outcome MaskRoundTrip() {
  Check check;
  std::mt19937_64 rng(3);
  const std::vector<std::string> vocab = {"ya", "gi", "the", "(", ")", "12", "7", "ǝx", ",",
                                          ";", "a1", "[", "0042", "ƛ'a"};
  const std::vector<std::string> langs = {"K", "E", "F"};
  for (int t = 0; t < 1000; ++t) {
    MaskPolicy policy;
    policy.target_lang = "K";
    if (rng() % 2) policy.mask_langs.insert("E");
    if (rng() % 2) policy.mask_langs.insert("F");
    policy.mask_numerals = rng() % 2;
    policy.mask_punct.clear();
    for (const char* p : {"(", ")", ",", ";", "["}) {
      if (rng() % 2) policy.mask_punct.insert(p);
    }
    Line line;
    line.line_id = "l" + std::to_string(t);
    std::vector<std::string> labels;
    for (size_t n = rng() % 15; n > 0; --n) {
      Token token{vocab[rng() % vocab.size()]};
      if (rng() % 2) token.bbox = BBox{int64_t(n), 0, int64_t(n) + 9, 12};
      if (rng() % 3 == 0) token.lang = langs[rng() % langs.size()];
      line.tokens.push_back(token);
      labels.push_back(langs[rng() % langs.size()]);
    }
    const MaskedLine masked = MaskLine(line, labels, policy);
    std::vector<std::string> texts;
    for (const Token& tok : UnmaskLine(masked.kept_text, masked.record).tokens) {
      texts.push_back(tok.text);
    }
    std::vector<std::string> original;
    for (const Token& tok : line.tokens) original.push_back(tok.text);
    check.Expect(texts == original, "text round trip on line " + line.line_id);
    const UnmaskResult full = Reinsert(masked.kept_tokens, masked.record);
    check.Expect(!full.drift && full.tokens == line.tokens, "token round trip");
  }

  // Whole document through the identity corrector.
  const SynthCorpus corpus = GenerateBilingualCorpus(SynthConfig{});
  const fs::path dir = oracle::TempDir("accept-mask");
  WriteSynthCorpus(corpus, dir);
  PipelineConfig config = LoadPipelineConfig(dir / "pipeline.ini");
  config.stages.correct = false;
  config.stages.translit = false;
  config.stages.eval = false;
  RunPipeline(config, dir / "run");
  const std::string labeled = ReadFile(dir / "run" / "03_reordered.json");
  const MaskedDocument masked = MaskDocument(LoadDocument(dir / "run" / "03_reordered.json"),
                                             config.mask);
  const std::string restored = DocumentToJson(UnmaskDocument(masked.document, masked.sidecar).document);
  check.Expect(restored == labeled, "document round trip is not byte-identical");
  // The same through files: sidecar on disk, masked document on disk.
  SaveSidecar(masked.sidecar, dir / "side.jsonl");
  SaveDocument(masked.document, dir / "masked.json");
  const std::string via_disk = DocumentToJson(
      UnmaskDocument(LoadDocument(dir / "masked.json"), LoadSidecar(dir / "side.jsonl")).document);
  check.Expect(via_disk == labeled, "on-disk round trip is not byte-identical");
  fs::remove_all(dir);
  return check.Done("1000 random lines and the synthetic document restored exactly");
}

// --- 4 -------------------------------------------------------------------

std::string DisjointLine(std::mt19937_64& rng, char lo, char hi) {
  std::string line;
  for (size_t w = 2 + rng() % 6; w > 0; --w) {
    if (!line.empty()) line += ' ';
    for (size_t c = 1 + rng() % 8; c > 0; --c) line += static_cast<char>(lo + rng() % (hi - lo + 1));
  }
  return line;
}

// A first-order Markov chain over a shared alphabet. Transition weights are
// squared uniform draws; no double spaces.
class BigramSource {
 public:
  BigramSource(uint64_t seed, const std::string& alphabet) : alphabet_(alphabet) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (size_t i = 0; i < alphabet.size(); ++i) {
      std::vector<double> row;
      for (size_t j = 0; j < alphabet.size(); ++j) {
        const double u = unit(rng);
        row.push_back(alphabet[i] == ' ' && alphabet[j] == ' ' ? 0.0 : u * u);
      }
      rows_.emplace_back(row.begin(), row.end());
    }
  }

  std::string Line(std::mt19937_64& rng, size_t length) {
    std::string out;
    size_t state = alphabet_.find(' ');
    while (out.size() < length) {
      state = rows_[state](rng);
      out += alphabet_[state];
    }
    return CollapseWhitespace(out);
  }

  double LogLikelihood(const std::string& line) const {
    double total = 0;
    size_t state = alphabet_.find(' ');
    for (char c : line) {
      const size_t next = alphabet_.find(c);
      total += std::log(rows_[state].probabilities()[next]);
      state = next;
    }
    return total;
  }

 private:
  std::string alphabet_;
  std::vector<std::discrete_distribution<size_t>> rows_;
};

double HeldOutAccuracy(const LabeledCorpus& train, const LabeledCorpus& test) {
  LangIdConfig config;
  config.seed = 4;
  const LangIdModel model = TrainLangId(train, config).model;
  size_t correct = 0;
  for (const LabeledExample& ex : test) correct += model.PredictLabel(ex.text) == ex.label;
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

Outcome LangIdAccuracy() {
  Check check;
  std::mt19937_64 rng(4);
  LabeledCorpus train, test;
  for (int i = 0; i < 150; ++i) {
    LabeledCorpus& dest = i < 100 ? train : test;
    dest.push_back({DisjointLine(rng, 'a', 'm'), "A"});
    dest.push_back({DisjointLine(rng, 'n', 'z'), "B"});
  }
  const double disjoint = HeldOutAccuracy(train, test);
  check.Expect(disjoint == 1.0, "disjoint accuracy " + Fmt("%.4f", disjoint));

  const std::string alphabet = "abcdefghijkl ";
  BigramSource p(101, alphabet), q(202, alphabet);
  LabeledCorpus all;
  for (int i = 0; i < 1000; ++i) {
    all.push_back({p.Line(rng, 20 + rng() % 40), "P"});
    all.push_back({q.Line(rng, 20 + rng() % 40), "Q"});
  }
  std::shuffle(all.begin(), all.end(), rng);
  const LabeledCorpus bigram_train(all.begin(), all.begin() + 1600);
  const LabeledCorpus bigram_test(all.begin() + 1600, all.end());
  const double overlap = HeldOutAccuracy(bigram_train, bigram_test);
  // Ceiling: the likelihood-ratio rule with the true generating chains.
  size_t bayes_correct = 0;
  for (const LabeledExample& ex : bigram_test) {
    const bool says_p = p.LogLikelihood(ex.text) >= q.LogLikelihood(ex.text);
    bayes_correct += says_p == (ex.label == "P");
  }
  const double bayes = static_cast<double>(bayes_correct) / bigram_test.size();
  check.Expect(overlap >= 0.99, "overlapping-alphabet accuracy " + Fmt("%.4f", overlap) +
                                    " (Bayes ceiling " + Fmt("%.4f", bayes) + ")");
  return check.Done("disjoint " + Fmt("%.4f", disjoint) + ", bigram " + Fmt("%.4f", overlap) +
                    " held out (Bayes ceiling " + Fmt("%.4f", bayes) + ")");
}

// --- 5 -------------------------------------------------------------------

Outcome CorrectionReduction() {
  Check check;
  std::mt19937_64 rng(5);
  const SyntheticLanguage language(5);
  std::vector<TrainingPair> lines;
  for (int i = 0; i < 2000; ++i) {
    const std::string clean = language.Sentence(rng);
    lines.push_back({InjectNoise(clean, DefaultConfusions(), 0.1, rng), clean});
  }
  const std::vector<TrainingPair> train(lines.begin(), lines.begin() + 500);
  std::vector<std::string> lm_corpus;
  for (const TrainingPair& p : train) lm_corpus.push_back(p.ref);
  const ChannelModel channel = ChannelModel::Train(train, 0.1);
  const CharLm lm = CharLm::Train(lm_corpus, 5, 0.01);

  double before = 0, after = 0;
  const size_t held_out = 200;
  for (size_t i = lines.size() - held_out; i < lines.size(); ++i) {
    before += Cer(lines[i].src, lines[i].ref);
    after += Cer(CorrectLine(lines[i].src, channel, lm), lines[i].ref);
  }
  before /= held_out;
  after /= held_out;
  const double reduction = before > 0 ? 1.0 - after / before : 0.0;
  check.Expect(before > 0, "noise produced no errors");
  check.Expect(reduction >= 0.40, "relative reduction " + Fmt("%.3f", reduction));
  return check.Done("mean CER " + Fmt("%.4f", before) + " -> " + Fmt("%.4f", after) + " (" +
                    Fmt("%.1f", 100 * reduction) + "% relative)");
}

// --- 6 -------------------------------------------------------------------

Outcome DecoderIdentity() {
  Check check;
  std::mt19937_64 rng(6);
  const SyntheticLanguage language(6);
  std::vector<std::string> corpus;
  for (int i = 0; i < 300; ++i) corpus.push_back(language.Sentence(rng));
  const CharLm lm = CharLm::Train(corpus, 5, 0.01);
  const ChannelModel untrained;
  const std::u32string alphabet = U"abcdeklmnstuwxyǝłƛ'Q9 .é";
  for (int t = 0; t < 1000; ++t) {
    std::u32string s;
    for (size_t n = rng() % 30; n > 0; --n) s.push_back(alphabet[rng() % alphabet.size()]);
    const std::string line = CollapseWhitespace(Nfc(Utf8(s)));
    check.Expect(CorrectLine(line, untrained, lm) == line, "changed \"" + line + "\"");
  }
  return check.Done("1000 random lines unchanged");
}

// --- 7 -------------------------------------------------------------------

Outcome Transliteration() {
  Check check;
  const RuleTable empty("t", "a", "b", {});
  check.Expect(empty.Transliterate("abc") == "abc", "empty table");
  const RuleTable longest("t", "a", "b", {{"xx", "y"}, {"x", "z"}});
  check.Expect(longest.Transliterate("xxx") == "yz", "longest match");
  const RuleTable grow("t", "a", "b", {{"a", "bb"}});
  const std::string once = grow.Transliterate("aa");
  check.Expect(once == "bbbb", "single pass");
  check.Expect(grow.Transliterate(once) == once, "a->bb not a fixed point");

  std::mt19937_64 rng(7);
  const std::u32string sources = U"abcǝł";
  for (int t = 0; t < 1000; ++t) {
    std::vector<RewriteRule> rules;
    std::set<std::string> seen;
    for (size_t n = rng() % 6; n > 0; --n) {
      std::u32string src(1 + rng() % 3, U'a');
      for (char32_t& c : src) c = sources[rng() % sources.size()];
      std::u32string dst(rng() % 4, U'x');
      for (char32_t& c : dst) c = U"xyzbé"[rng() % 5];
      if (seen.insert(Utf8(src)).second) rules.push_back({Utf8(src), Utf8(dst)});
    }
    const RuleTable table("t", "a", "b", rules);
    std::u32string in;
    for (size_t n = rng() % 30; n > 0; --n) in.push_back(U"abcdǝł q"[rng() % 8]);
    const std::string text = Utf8(in);
    const std::string out = table.Transliterate(text);
    check.Expect(out == table.Transliterate(text), "non-deterministic");
    check.Expect(IsNfc(out), "output not NFC");
    std::u32string untouched;
    for (size_t n = rng() % 30; n > 0; --n) untouched.push_back(U"dq é"[rng() % 4]);
    check.Expect(table.Transliterate(Utf8(untouched)) == Utf8(untouched), "pass-through");
    // Output free of every source is a fixed point.
    bool has_source = false;
    for (const RewriteRule& r : table.rules()) has_source |= out.find(r.source) != std::string::npos;
    if (!has_source) check.Expect(table.Transliterate(out) == out, "cascading rewrite");
    std::string as;
    for (size_t n = rng() % 20; n > 0; --n) as += "ab"[rng() % 2];
    const std::string g = grow.Transliterate(as);
    check.Expect(grow.Transliterate(g) == g, "a->bb cascade on \"" + as + "\"");
  }
  return check.Done("3 fixtures exact, 1000 random tables");
}

// --- 8 -------------------------------------------------------------------

std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    files[entry.path().filename().string()] = ReadFile(entry.path());
  }
  return files;
}

Outcome EndToEnd() {
  Check check;
  const fs::path bundled = fs::path(OCRPIPE_SOURCE_DIR) / "data" / "synth";
  const fs::path dir = oracle::TempDir("accept-e2e");
  WriteSynthCorpus(GenerateBilingualCorpus(SynthConfig{}), dir);
  // The bundled copy must be exactly what the generator writes.
  for (const auto& [name, contents] : Snapshot(dir)) {
    check.Expect(fs::exists(bundled / name) && ReadFile(bundled / name) == contents,
                 "bundled corpus differs at " + name);
  }
  const PipelineConfig config = LoadPipelineConfig(bundled / "pipeline.ini");
  const PipelineResult a = RunPipeline(config, dir / "a");
  const PipelineResult b = RunPipeline(config, dir / "b");
  const auto files = Snapshot(dir / "a");
  check.Expect(files == Snapshot(dir / "b"), "runs differ");
  check.Expect(files.count("08_eval.json") == 1 && files.count("07_translit.json") == 1,
               "missing outputs");
  check.Expect(a.report && a.baseline, "no evaluation");
  std::string summary;
  if (a.report && a.baseline) {
    const EvalReport& r = *a.report;
    const EvalReport& base = *a.baseline;
    check.Expect(r.corpus_cer < base.corpus_cer, "CER not lower");
    check.Expect(r.mean_ser < base.mean_ser, "SER not lower");
    summary = std::to_string(files.size()) + " files identical; CER " +
              Fmt("%.4f", base.corpus_cer) + " -> " + Fmt("%.4f", r.corpus_cer) + ", SER " +
              Fmt("%.2f", base.mean_ser) + " -> " + Fmt("%.2f", r.mean_ser);
  }
  fs::remove_all(dir);
  return check.Done(summary);
}

struct Criterion {
  int number;
  const char* name;
  double limit_seconds;  // 0 = none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "CER oracle equivalence", 30, CerOracle},
      {2, "SER properties", 0, SerProperties},
      {3, "mask round trip", 0, MaskRoundTrip},
      {4, "langid held-out accuracy", 60, LangIdAccuracy},
      {5, "post-correction error reduction", 300, CorrectionReduction},
      {6, "decoder identity guarantee", 0, DecoderIdentity},
      {7, "transliteration", 0, Transliteration},
      {8, "end-to-end determinism and improvement", 0, EndToEnd},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
      outcome.pass = false;
      outcome.detail += " (over the " + Fmt("%.0f", c.limit_seconds) + " s limit)";
    }
    failed += !outcome.pass;
    std::cout << "criterion " << c.number << " [PRIMARY] " << (outcome.pass ? "PASS" : "FAIL")
              << ": " << c.name << " - " << outcome.detail << " [" << Fmt("%.2f", seconds)
              << " s]" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed;
}
