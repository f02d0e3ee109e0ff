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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "ocrpipe/error.h"
#include "ocrpipe/langid.h"
#include "ocrpipe/text.h"
#include "oracles.h"

using namespace ocrpipe;

namespace {

std::string RandomWordOver(std::mt19937_64& rng, char lo, char hi, size_t min_len, size_t max_len) {
  std::string w;
  const size_t n = min_len + rng() % (max_len - min_len + 1);
  for (size_t i = 0; i < n; ++i) w.push_back(static_cast<char>(lo + rng() % (hi - lo + 1)));
  return w;
}

std::string RandomLineOver(std::mt19937_64& rng, char lo, char hi) {
  std::string line;
  const size_t words = 2 + rng() % 6;
  for (size_t i = 0; i < words; ++i) {
    if (i > 0) line += ' ';
    line += RandomWordOver(rng, lo, hi, 1, 8);
  }
  return line;
}

LabeledCorpus Separable(uint64_t seed, size_t per_label) {
  std::mt19937_64 rng(seed);
  LabeledCorpus corpus;
  for (size_t i = 0; i < per_label; ++i) {
    corpus.push_back({RandomLineOver(rng, 'a', 'm'), "A"});
    corpus.push_back({RandomLineOver(rng, 'n', 'z'), "B"});
  }
  return corpus;
}

LangIdConfig SmallConfig() {
  LangIdConfig c;
  c.dimension = 1u << 14;
  c.epochs = 5;
  c.seed = 3;
  return c;
}

const LangIdModel& SeparableModel() {
  static const LangIdModel model = TrainLangId(Separable(1, 200), SmallConfig()).model;
  return model;
}

// Features recomputed from the definition with a fresh FNV-1a and a map.
std::map<uint32_t, double> OracleFeatures(const std::string& text, int min_n, int max_n,
                                          uint32_t dim) {
  auto fnv = [](const std::string& s) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  };
  const std::u32string cps = U" " + ToCodePoints(CollapseWhitespace(Nfc(text))) + U" ";
  std::map<uint32_t, double> counts;
  for (int n = min_n; n <= max_n; ++n) {
    for (size_t i = 0; i + static_cast<size_t>(n) <= cps.size(); ++i) {
      counts[static_cast<uint32_t>(fnv(FromCodePoints(cps.substr(i, n))) % dim)] += 1.0;
    }
  }
  double norm = 0;
  for (const auto& [k, v] : counts) norm += v * v;
  for (auto& [k, v] : counts) v /= std::sqrt(norm);
  return counts;
}

}  // namespace

TEST_CASE("FNV-1a reference values") {
  CHECK(Fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(Fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(Fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("features follow the definition") {
  const LangIdModel& model = SeparableModel();
  for (const std::string text : {"abc", "  ab   cd ", "e\xCC\x81t\xC3\xA9", "x", "ǝx̱ ƛ'ał"}) {
    const auto got = model.Features(text);
    const auto want = OracleFeatures(text, 1, 4, 1u << 14);
    REQUIRE(got.size() == want.size());
    size_t i = 0;
    for (const auto& [k, v] : want) {
      CHECK(got[i].first == k);
      CHECK(got[i].second == doctest::Approx(v).epsilon(1e-12));
      ++i;
    }
  }
}

TEST_CASE("separable corpora") {
  const LangIdModel& model = SeparableModel();
  CHECK(model.training_accuracy() == 1.0);
  CHECK(model.labels() == std::vector<std::string>{"A", "B"});
  CHECK(model.PredictLabel("abc") == "A");
  CHECK(model.PredictLabel("xyz") == "B");
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    CHECK(model.PredictLabel(RandomLineOver(rng, 'a', 'm')) == "A");
    CHECK(model.PredictLabel(RandomLineOver(rng, 'n', 'z')) == "B");
  }
}

TEST_CASE("scores form a distribution") {
  const LangIdModel& model = SeparableModel();
  std::mt19937_64 rng(4);
  for (int i = 0; i < 500; ++i) {
    const std::string text = RandomWordOver(rng, '!', '~', 1, 30);
    const LineScores s = model.PredictLine(text);
    double sum = 0;
    std::string best;
    double best_p = -1;
    for (const std::string& label : model.labels()) {
      const double p = s.scores.at(label);
      REQUIRE(p >= 0);
      sum += p;
      if (p > best_p) {
        best_p = p;
        best = label;
      }
    }
    REQUIRE(std::abs(sum - 1.0) < 1e-9);
    REQUIRE(s.label == best);
    REQUIRE(model.PredictLine(text).scores == s.scores);
  }
  CHECK_THROWS_AS(model.PredictLine(""), EmptyInput);
  CHECK_THROWS_AS(model.PredictLine("   "), EmptyInput);
}

TEST_CASE("argmax is invariant under positive weight scaling") {
  std::mt19937_64 rng(6);
  for (double factor : {0.01, 0.5, 3.0, 40.0}) {
    LangIdModel m = SeparableModel();
    m.ScaleWeights(factor);
    for (int i = 0; i < 200; ++i) {
      const std::string text = RandomWordOver(rng, 'a', 'z', 1, 20);
      REQUIRE(m.PredictLabel(text) == SeparableModel().PredictLabel(text));
    }
  }
}

TEST_CASE("token rule") {
  const LangIdModel& model = SeparableModel();
  CHECK(model.PredictToken("a", "abc def ghi") == "A");
  CHECK(model.PredictToken("a", "xyz tuv rst") == "B");
  CHECK(model.PredictToken("xyzwvu", "abc def ghi") == "B");
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const std::string line = RandomWordOver(rng, 'a', 'z', 1, 12);
    REQUIRE(model.PredictToken(line, line) == model.PredictLabel(line));
    const std::string shorty = RandomWordOver(rng, 'a', 'z', 1, 3);
    REQUIRE(model.PredictToken(shorty, line) == model.PredictLabel(line));
  }
  CHECK_THROWS_AS(model.PredictToken("", "abc"), EmptyInput);
}

TEST_CASE("training is deterministic") {
  const LabeledCorpus corpus = Separable(2, 60);
  const LangIdModel a = TrainLangId(corpus, SmallConfig()).model;
  const LangIdModel b = TrainLangId(corpus, SmallConfig()).model;
  CHECK(a.Serialize() == b.Serialize());
}

TEST_CASE("training errors and warnings") {
  LabeledCorpus one = {{"abc", "A"}, {"def", "A"}};
  CHECK_THROWS_AS(TrainLangId(one, SmallConfig()), InsufficientData);
  CHECK_THROWS_AS(TrainLangId({}, SmallConfig()), InsufficientData);
  CHECK_THROWS_AS(TrainLangId({{"abc", "A"}, {"  ", "B"}}, SmallConfig()), InvalidArgument);

  LabeledCorpus same = {{"abc def", "A"}, {"ghi", "A"}, {"abc def", "B"}, {"ghi", "B"}};
  const LangIdTrainResult r = TrainLangId(same, SmallConfig());
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].rfind("DegenerateCorpus", 0) == 0);
  CHECK(r.model.labels().size() == 2);
}

TEST_CASE("corpus parsing") {
  const LabeledCorpus c = ParseLabeledCorpus("__label__kwk\tya gi\n\n__label__eng\tthe cat\n");
  REQUIRE(c.size() == 2);
  CHECK(c[0].label == "kwk");
  CHECK(c[0].text == "ya gi");
  CHECK(c[1].label == "eng");
  try {
    ParseLabeledCorpus("__label__a\tx\nno label here\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(ParseLabeledCorpus("__label__\tx\n"), ParseError);
}

TEST_CASE("save and load") {
  const LangIdModel& model = SeparableModel();
  const auto dir = oracle::TempDir("langid");
  model.Save(dir / "m.bin");
  const LangIdModel back = LangIdModel::Load(dir / "m.bin");
  CHECK(back.labels() == model.labels());
  CHECK(back.training_accuracy() == model.training_accuracy());
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const std::string text = RandomWordOver(rng, 'a', 'z', 1, 20);
    REQUIRE(back.PredictLine(text).scores == model.PredictLine(text).scores);
  }
  CHECK(back.Serialize() == model.Serialize());

  const std::string bytes = model.Serialize();
  CHECK_THROWS_AS(LangIdModel::Deserialize(bytes.substr(0, bytes.size() - 5)), ParseError);
  CHECK_THROWS_AS(LangIdModel::Deserialize(bytes.substr(0, 10)), ParseError);
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(LangIdModel::Deserialize(bad_magic), ParseError);
  std::string future = bytes;
  const size_t at = future.find("\"version\":1");
  REQUIRE(at != std::string::npos);
  future[at + 10] = '9';
  CHECK_THROWS_AS(LangIdModel::Deserialize(future), VersionMismatch);
  CHECK_THROWS_AS(LangIdModel::Load(dir / "missing.bin"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("document labelling") {
  Document doc;
  doc.source_id = "d";
  Page page;
  Line line;
  line.line_id = "a";
  line.tokens = {Token{"abc"}, Token{"defgh"}, Token{"xyzwv"}, Token{"q"}};
  page.lines.push_back(line);
  doc.pages.push_back(page);
  const Document out = LabelDocument(doc, SeparableModel());
  const auto& tokens = out.pages[0].lines[0].tokens;
  const std::string line_label = SeparableModel().PredictLabel(line.Text());
  CHECK(tokens[0].lang == line_label);
  CHECK(tokens[1].lang == "A");
  CHECK(tokens[2].lang == "B");
  CHECK(tokens[3].lang == line_label);
}
