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

#include <filesystem>
#include <map>
#include <sstream>

#include "json.hpp"
#include "ocrpipe/cli.h"
#include "ocrpipe/document.h"
#include "ocrpipe/mask.h"
#include "oracles.h"

using namespace ocrpipe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files[entry.path().filename().string()] = ReadFile(entry.path());
  }
  return files;
}

// A synthetic corpus written once per test binary.
const fs::path& Corpus() {
  static const fs::path dir = [] {
    const fs::path d = oracle::TempDir("cli");
    REQUIRE(Run({"--seed", "7", "synth", "--dir", d.string()}).code == kExitOk);
    return d;
  }();
  return dir;
}

std::string P(const fs::path& p) { return p.string(); }

}  // namespace

TEST_CASE("usage errors exit 2") {
  Outcome r = Run({"bogus"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(Run({}).code == kExitUsage);
  CHECK(Run({"mask"}).code == kExitUsage);
  CHECK(Run({"eval", "--hyp", "x.json", "--nonsense"}).code == kExitUsage);
  r = Run({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("langid-train") != std::string::npos);
}

TEST_CASE("runtime failures exit 1") {
  const fs::path dir = oracle::TempDir("cli-fail");
  Outcome r = Run({"ingest", "--input", P(dir / "missing.json"), "-o", P(dir / "x.json")});
  CHECK(r.code == kExitFailure);
  CHECK_FALSE(r.err.empty());
  WriteFile(dir / "bad.json", R"({"source_id":"s","pages":[{"page_number":1,"lines":[)"
                              R"({"line_id":"a","tokens":[{"text":"a","bbox":[5,5,2,2]}]}]}]})");
  r = Run({"reorder", "--doc", P(dir / "bad.json"), "-o", P(dir / "y.json")});
  CHECK(r.code == kExitFailure);
  CHECK(r.err.find("bbox") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("stage by stage, mask and unmask round trip") {
  const fs::path& c = Corpus();
  const fs::path w = oracle::TempDir("cli-stages");
  REQUIRE(Run({"ingest", "--input", P(c / "vendor.json"), "-o", P(w / "ingest.json")}).code == 0);
  REQUIRE(Run({"langid-train", "--corpus", P(c / "langid.txt"), "-o", P(w / "lid.bin")}).code == 0);
  REQUIRE(Run({"langid-label", "--model", P(w / "lid.bin"), "--doc", P(w / "ingest.json"), "-o",
               P(w / "labeled.json")})
              .code == 0);
  REQUIRE(Run({"reorder", "--doc", P(w / "labeled.json"), "-o", P(w / "reordered.json")}).code == 0);
  REQUIRE(Run({"mask", "--doc", P(w / "reordered.json"), "--target", "tgt", "--mask-langs", "eng",
               "-o", P(w / "masked.json"), "--sidecar", P(w / "side.jsonl")})
              .code == 0);
  // Identity corrector: the masked document goes straight back.
  REQUIRE(Run({"unmask", "--doc", P(w / "masked.json"), "--sidecar", P(w / "side.jsonl"), "-o",
               P(w / "unmasked.json")})
              .code == 0);
  CHECK(ReadFile(w / "unmasked.json") == ReadFile(w / "reordered.json"));
  CHECK(LoadDocument(w / "unmasked.json") == LoadDocument(w / "reordered.json"));

  // The external identity command gives the same result through `correct`.
  REQUIRE(Run({"correct", "--doc", P(w / "masked.json"), "--command", "cat", "-o",
               P(w / "corrected.json")})
              .code == 0);
  CHECK(ReadFile(w / "corrected.json") == ReadFile(w / "masked.json"));

  const Outcome tr = Run({"translit", "--text", "ƛǝx", "--rules", P(c / "rules.tsv")});
  CHECK(tr.code == 0);
  CHECK(tr.out == "tła\xCC\xB1x\xCC\xB1\n");
  fs::remove_all(w);
}

TEST_CASE("eval writes a report and prints a table") {
  const fs::path& c = Corpus();
  const fs::path w = oracle::TempDir("cli-eval");
  REQUIRE(Run({"ingest", "--input", P(c / "vendor.json"), "-o", P(w / "out.json")}).code == 0);
  const Outcome r = Run({"eval", "--hyp", P(w / "out.json"), "--ref", P(c / "gold.json"),
                         "--report", P(w / "report.json")});
  CHECK(r.code == 0);
  CHECK(r.out.find("CER") != std::string::npos);
  CHECK(r.out.find("SER") != std::string::npos);
  const auto report = nlohmann::json::parse(ReadFile(w / "report.json"));
  CHECK(report.at("pages").size() == 2);
  CHECK(report.at("corpus_cer").get<double>() > 0);
  // A document scored against itself.
  const Outcome self = Run({"eval", "--hyp", P(c / "gold.json"), "--ref", P(c / "gold.json"),
                            "--report", P(w / "self.json")});
  CHECK(self.code == 0);
  const auto zero = nlohmann::json::parse(ReadFile(w / "self.json"));
  CHECK(zero.at("corpus_cer").get<double>() == 0.0);
  CHECK(zero.at("mean_ser").get<double>() == 0.0);
  fs::remove_all(w);
}

TEST_CASE("full runs are deterministic and resumable") {
  const fs::path& c = Corpus();
  const fs::path a = oracle::TempDir("cli-run-a");
  const fs::path b = oracle::TempDir("cli-run-b");
  REQUIRE(Run({"--config", P(c / "pipeline.ini"), "--out", P(a), "run"}).code == 0);
  REQUIRE(Run({"--config", P(c / "pipeline.ini"), "--out", P(b), "run"}).code == 0);
  const auto first = Snapshot(a);
  for (const char* name : {"01_ingest.json", "02_labeled.json", "03_reordered.json",
                           "04_masked.json", "04_mask.sidecar.jsonl", "05_corrected.json",
                           "06_unmasked.json", "07_translit.json", "08_eval.json",
                           "08_eval_table.txt", "manifest.json"}) {
    CHECK_MESSAGE(first.count(name) == 1, name);
  }
  CHECK(first == Snapshot(b));

  const auto manifest = nlohmann::json::parse(first.at("manifest.json"));
  CHECK(manifest.at("complete").get<bool>());
  CHECK(manifest.at("stages").size() >= 8);
  CHECK(manifest.at("stages")[0].at("name") == "ingest");

  // Drop everything from correction on and run again.
  for (const auto& [name, _] : first) {
    if (name >= "05" && name < "09") fs::remove(b / name);
  }
  REQUIRE(Run({"--config", P(c / "pipeline.ini"), "--out", P(b), "run"}).code == 0);
  CHECK(first == Snapshot(b));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("pre-flight rejects a missing rule table") {
  const fs::path& c = Corpus();
  const fs::path w = oracle::TempDir("cli-preflight");
  for (const auto& entry : fs::directory_iterator(c)) {
    if (entry.path().filename() != "rules.tsv") fs::copy(entry.path(), w / entry.path().filename());
  }
  const fs::path out = w / "out";
  const Outcome r = Run({"--config", P(w / "pipeline.ini"), "--out", P(out), "run"});
  CHECK(r.code == kExitFailure);
  CHECK(r.err.find("rules.tsv") != std::string::npos);
  CHECK_FALSE(fs::exists(out / "01_ingest.json"));
  fs::remove_all(w);
}

TEST_CASE("seed flag overrides the config") {
  const fs::path& c = Corpus();
  const fs::path w = oracle::TempDir("cli-seed");
  REQUIRE(Run({"--config", P(c / "pipeline.ini"), "--out", P(w), "--seed", "99", "run"}).code == 0);
  const auto manifest = nlohmann::json::parse(ReadFile(w / "manifest.json"));
  CHECK(manifest.at("seed").get<uint64_t>() == 99);
  fs::remove_all(w);
}
