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

#include <random>

#include "ocrpipe/error.h"
#include "ocrpipe/mask.h"
#include "oracles.h"

using namespace ocrpipe;

namespace {

Line MakeLine(const std::vector<std::string>& texts, const std::string& id = "l1") {
  Line line;
  line.line_id = id;
  for (const std::string& t : texts) line.tokens.push_back(Token{t});
  return line;
}

std::vector<std::string> Texts(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const Token& t : tokens) out.push_back(t.text);
  return out;
}

MaskPolicy DefaultPolicy() {
  MaskPolicy p;
  p.target_lang = "K";
  p.mask_langs = {"E"};
  return p;
}

using Strings = std::vector<std::string>;

}  // namespace

TEST_CASE("bilingual line example") {
  const Line line = MakeLine({"ya", "(", "he", "said", ")", "3"});
  const MaskedLine m = MaskLine(line, {"K", "K", "E", "E", "K", "K"}, DefaultPolicy(), 4);
  CHECK(m.kept_text == "ya");
  CHECK(m.record.kept_count == 1);
  CHECK(m.record.page_number == 4);
  CHECK(m.record.line_id == "l1");
  REQUIRE(m.record.masked.size() == 5);
  const std::vector<std::pair<size_t, std::string>> expected = {
      {1, "("}, {2, "he"}, {3, "said"}, {4, ")"}, {5, "3"}};
  for (size_t i = 0; i < expected.size(); ++i) {
    CHECK(m.record.masked[i].index == expected[i].first);
    CHECK(m.record.masked[i].token.text == expected[i].second);
  }
  const UnmaskResult back = UnmaskLine("ya", m.record);
  CHECK_FALSE(back.drift);
  CHECK(Texts(back.tokens) == Strings{"ya", "(", "he", "said", ")", "3"});
}

TEST_CASE("identity and full-mask lines") {
  const Line plain = MakeLine({"ya", "kw", "gi"});
  const MaskedLine a = MaskLine(plain, {"K", "K", "K"}, DefaultPolicy());
  CHECK(a.kept_text == "ya kw gi");
  CHECK(a.record.masked.empty());
  CHECK(a.record.kept_count == 3);

  const Line foreign = MakeLine({"the", "12", "("});
  const MaskedLine b = MaskLine(foreign, {"E", "K", "K"}, DefaultPolicy());
  CHECK(b.kept_text.empty());
  CHECK(b.record.masked.size() == 3);
  CHECK(b.record.kept_count == 0);
  CHECK(Texts(UnmaskLine("", b.record).tokens) == Strings{"the", "12", "("});
}

TEST_CASE("numeral and punctuation switches") {
  MaskPolicy p = DefaultPolicy();
  p.mask_numerals = false;
  p.mask_punct.clear();
  const MaskedLine m = MaskLine(MakeLine({"12", "(", "x", "1a"}), {"K", "K", "K", "K"}, p);
  CHECK(m.kept_text == "12 ( x 1a");
  p.mask_numerals = true;
  // Only all-digit tokens count as numerals.
  CHECK(MaskLine(MakeLine({"12", "1a", "a1"}), {"K", "K", "K"}, p).kept_text == "1a a1");
}

TEST_CASE("policy and label checks") {
  MaskPolicy bad = DefaultPolicy();
  bad.mask_langs.insert("K");
  CHECK_THROWS_AS(bad.Validate(), InvalidArgument);
  CHECK_THROWS_AS(MaskLine(MakeLine({"a", "b"}), {"K"}, DefaultPolicy()), LabelMismatch);
  CHECK_THROWS_AS(MaskLine(MakeLine({"a"}), {"K", "E"}, DefaultPolicy()), LabelMismatch);
}

TEST_CASE("drift clamps masked tokens and warns") {
  const Line line = MakeLine({"ya", "(", "he", "said", ")", "3"});
  const MaskedLine m = MaskLine(line, {"K", "K", "E", "E", "K", "K"}, DefaultPolicy());
  const UnmaskResult r = UnmaskLine("ya yo", m.record);
  CHECK(r.drift);
  // Inserting at 1..5 into [ya yo] one after another.
  CHECK(Texts(r.tokens) == Strings{"ya", "(", "he", "said", ")", "3", "yo"});

  const UnmaskResult shrunk = UnmaskLine("", MaskLine(MakeLine({"a", "b", "(", "c"}),
                                                      {"K", "K", "K", "K"}, DefaultPolicy())
                                                 .record);
  CHECK(shrunk.drift);
  CHECK(Texts(shrunk.tokens) == Strings{"("});
}

TEST_CASE("random round trip") {
  std::mt19937_64 rng(11);
  const Strings vocab = {"ya", "gi", "the", "of", "(", ")", "12", "7", "ǝx", ",", "a1"};
  const Strings langs = {"K", "E", "X"};
  for (int t = 0; t < 2000; ++t) {
    Line line = MakeLine({});
    std::vector<std::string> labels;
    const size_t n = rng() % 12;
    for (size_t i = 0; i < n; ++i) {
      Token tok{vocab[rng() % vocab.size()]};
      if (rng() % 2) tok.bbox = BBox{int64_t(i), 0, int64_t(i) + 5, 10};
      if (rng() % 2) tok.lang = langs[rng() % langs.size()];
      line.tokens.push_back(tok);
      labels.push_back(langs[rng() % langs.size()]);
    }
    MaskPolicy p = DefaultPolicy();
    p.mask_numerals = rng() % 2;
    const MaskedLine m = MaskLine(line, labels, p);
    REQUIRE(m.record.kept_count + m.record.masked.size() == line.tokens.size());
    for (size_t i = 1; i < m.record.masked.size(); ++i) {
      REQUIRE(m.record.masked[i - 1].index < m.record.masked[i].index);
    }
    // Text-only path.
    REQUIRE(Texts(UnmaskLine(m.kept_text, m.record).tokens) == Texts(line.tokens));
    // Token path keeps every attribute.
    const UnmaskResult r = Reinsert(m.kept_tokens, m.record);
    REQUIRE_FALSE(r.drift);
    REQUIRE(r.tokens == line.tokens);
    // The sidecar survives serialization.
    REQUIRE(ParseSidecar(SidecarToJsonl({m.record})) == Sidecar{m.record});
  }
}

TEST_CASE("document level") {
  Document doc;
  doc.source_id = "d";
  for (int p = 1; p <= 2; ++p) {
    Page page;
    page.page_number = p;
    page.lines.push_back(MakeLine({"ya", "the", "3"}, "a"));
    page.lines.push_back(MakeLine({"(", ")"}, "b"));
    page.lines.back().tokens[0].lang = "E";
    page.lines[0].tokens[1].lang = "E";
    doc.pages.push_back(page);
  }
  const MaskedDocument masked = MaskDocument(doc, DefaultPolicy());
  CHECK(masked.sidecar.size() == 4);
  CHECK(masked.document.pages[0].lines[0].Text() == "ya");
  CHECK(masked.document.pages[0].lines[1].tokens.empty());

  const UnmaskedDocument back = UnmaskDocument(masked.document, masked.sidecar);
  CHECK(back.warnings.empty());
  CHECK(back.document == doc);

  const UnmaskedDocument flagged = UnmaskDocument(masked.document, masked.sidecar, true);
  CHECK(flagged.document.pages[0].lines[0].tokens[1].masked);
  CHECK_FALSE(flagged.document.pages[0].lines[0].tokens[0].masked);

  Document drifted = masked.document;
  drifted.pages[1].lines[0].tokens.push_back(Token{"extra"});
  const UnmaskedDocument d = UnmaskDocument(drifted, masked.sidecar);
  REQUIRE(d.warnings.size() == 1);
  CHECK(d.warnings[0] == "TokenCountDrift: page 2 line a");

  Sidecar partial = masked.sidecar;
  partial.pop_back();
  CHECK_THROWS_AS(UnmaskDocument(masked.document, partial), MissingRecord);

  const auto dir = oracle::TempDir("mask");
  SaveSidecar(masked.sidecar, dir / "s.jsonl");
  CHECK(LoadSidecar(dir / "s.jsonl") == masked.sidecar);
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed sidecars") {
  CHECK_THROWS_AS(ParseSidecar("{\"page\":1}\n"), ParseError);
  CHECK_THROWS_AS(ParseSidecar("not json\n"), ParseError);
  CHECK_THROWS_AS(
      ParseSidecar(R"({"page":1,"line_id":"a","kept_count":0,"masked":[{"i":1,"t":"x"}]})"),
      ParseError);
  CHECK_THROWS_AS(ParseSidecar(R"({"page":1,"line_id":"a","kept_count":2,)"
                               R"("masked":[{"i":1,"t":"x"},{"i":1,"t":"y"}]})"),
                  ParseError);
  CHECK_THROWS_AS(
      ParseSidecar(R"({"page":1,"line_id":"a","kept_count":0,"masked":[],"extra":1})"),
      ParseError);
  CHECK(ParseSidecar("\n").empty());
}
