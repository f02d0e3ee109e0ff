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

#include "ocrpipe/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "json.hpp"
#include "ocrpipe/assignment.h"
#include "ocrpipe/edit_distance.h"
#include "ocrpipe/error.h"
#include "ocrpipe/text.h"

namespace ocrpipe {
namespace {

std::vector<std::string> LineTexts(const Page& page) {
  std::vector<std::string> out;
  out.reserve(page.lines.size());
  for (const Line& line : page.lines) out.push_back(line.Text());
  return out;
}

std::string PageText(const Page& page) { return Join(LineTexts(page), " "); }

// Tracks LIS candidates: longest first, then fewest move blocks.
struct Chain {
  size_t length = 0;
  size_t blocks = 0;

  bool BetterThan(const Chain& other) const {
    if (length != other.length) return length > other.length;
    return blocks < other.blocks;
  }
};

}  // namespace

void SerWeights::Validate() const {
  if (!(w_insert >= 0) || !(w_delete >= 0) || !(w_move >= 0)) {
    throw InvalidArgument("SER weights must be non-negative");
  }
  if (!(theta > 0 && theta <= 1)) throw InvalidArgument("SER theta must be in (0, 1]");
}

std::string NormalizeForCer(const std::string& text) { return CollapseWhitespace(Nfc(text)); }

CharErrors CountCharErrors(const std::string& hyp, const std::string& ref) {
  const std::u32string h = ToCodePoints(NormalizeForCer(hyp));
  const std::u32string r = ToCodePoints(NormalizeForCer(ref));
  return {EditDistance(h, r), r.size()};
}

double Cer(const std::string& hyp, const std::string& ref) {
  const CharErrors e = CountCharErrors(hyp, ref);
  if (e.ref_chars == 0) throw EmptyReference("reference text is empty");
  return static_cast<double>(e.distance) / static_cast<double>(e.ref_chars);
}

double LineSimilarity(const std::string& hyp, const std::string& ref) {
  const CharErrors e = CountCharErrors(hyp, ref);
  if (e.ref_chars == 0) return e.distance == 0 ? 1.0 : 0.0;
  return std::max(0.0, 1.0 - static_cast<double>(e.distance) / static_cast<double>(e.ref_chars));
}

LineMatching AlignLines(const std::vector<std::string>& hyp, const std::vector<std::string>& ref,
                        double theta) {
  LineMatching matching;
  if (hyp.empty() || ref.empty()) return matching;
  std::vector<std::vector<double>> sim(hyp.size(), std::vector<double>(ref.size(), 0.0));
  std::vector<std::vector<double>> cost(hyp.size(), std::vector<double>(ref.size(), 0.0));
  bool any = false;
  for (size_t i = 0; i < hyp.size(); ++i) {
    for (size_t j = 0; j < ref.size(); ++j) {
      sim[i][j] = LineSimilarity(hyp[i], ref[j]);
      if (sim[i][j] >= theta) {
        cost[i][j] = -sim[i][j];
        any = true;
      }
    }
  }
  if (!any) return matching;
  const std::vector<int> assigned = SolveAssignment(cost);
  for (size_t i = 0; i < hyp.size(); ++i) {
    const int j = assigned[i];
    if (j >= 0 && sim[i][static_cast<size_t>(j)] >= theta) {
      matching.emplace_back(i, static_cast<size_t>(j));
    }
  }
  return matching;
}

size_t CountMoveBlocks(const std::vector<size_t>& seq) {
  const size_t n = seq.size();
  if (n == 0) return 0;
  // brk[p]: position p cannot extend a displaced run started at p - 1.
  std::vector<size_t> brk_prefix(n + 1, 0);
  for (size_t p = 0; p < n; ++p) {
    const bool brk = p == 0 || seq[p] != seq[p - 1] + 1;
    brk_prefix[p + 1] = brk_prefix[p] + (brk ? 1 : 0);
  }
  // Blocks in displaced segment [a, b): the first position always opens one.
  auto segment_blocks = [&](size_t a, size_t b) -> size_t {
    if (a >= b) return 0;
    return 1 + brk_prefix[b] - brk_prefix[a + 1];
  };

  // best[i]: best chain whose last kept element is i.
  std::vector<Chain> best(n);
  for (size_t i = 0; i < n; ++i) {
    Chain chosen{1, segment_blocks(0, i)};
    for (size_t j = 0; j < i; ++j) {
      if (seq[j] >= seq[i]) continue;
      Chain c{best[j].length + 1, best[j].blocks + segment_blocks(j + 1, i)};
      if (c.BetterThan(chosen)) chosen = c;
    }
    best[i] = chosen;
  }
  Chain overall{0, segment_blocks(0, n)};
  for (size_t i = 0; i < n; ++i) {
    Chain c{best[i].length, best[i].blocks + segment_blocks(i + 1, n)};
    if (c.BetterThan(overall)) overall = c;
  }
  return overall.blocks;
}

SerResult Ser(const std::vector<std::string>& hyp, const std::vector<std::string>& ref,
              const SerWeights& weights) {
  weights.Validate();
  if (ref.empty()) throw EmptyReference("reference page has no lines");
  const LineMatching matching = AlignLines(hyp, ref, weights.theta);
  std::vector<size_t> ref_order;
  ref_order.reserve(matching.size());
  for (const auto& [h, r] : matching) ref_order.push_back(r);

  SerResult result;
  result.counts.insertions = hyp.size() - matching.size();
  result.counts.deletions = ref.size() - matching.size();
  result.counts.moves = CountMoveBlocks(ref_order);
  const double raw = weights.w_insert * static_cast<double>(result.counts.insertions) +
                     weights.w_delete * static_cast<double>(result.counts.deletions) +
                     weights.w_move * static_cast<double>(result.counts.moves);
  result.score = std::min(100.0, 100.0 * raw / static_cast<double>(ref.size()));
  return result;
}

EvalReport Evaluate(const Document& hyp, const Document& ref, const SerWeights& weights) {
  weights.Validate();
  std::map<int, const Page*> hyp_pages;
  for (const Page& p : hyp.pages) hyp_pages[p.page_number] = &p;
  if (hyp.pages.size() != ref.pages.size()) {
    throw PageCountMismatch("hypothesis has " + std::to_string(hyp.pages.size()) +
                            " pages, reference has " + std::to_string(ref.pages.size()));
  }
  EvalReport report;
  size_t total_distance = 0;
  size_t total_ref = 0;
  double ser_sum = 0.0;
  for (const Page& ref_page : ref.pages) {
    auto it = hyp_pages.find(ref_page.page_number);
    if (it == hyp_pages.end()) {
      throw PageCountMismatch("hypothesis has no page " + std::to_string(ref_page.page_number));
    }
    const Page& hyp_page = *it->second;
    PageEval page;
    page.page_number = ref_page.page_number;
    const CharErrors errors = CountCharErrors(PageText(hyp_page), PageText(ref_page));
    if (errors.ref_chars == 0) {
      throw EmptyReference("reference page " + std::to_string(page.page_number) + " has no text");
    }
    page.char_distance = errors.distance;
    page.ref_chars = errors.ref_chars;
    page.cer = static_cast<double>(errors.distance) / static_cast<double>(errors.ref_chars);
    const SerResult ser = Ser(LineTexts(hyp_page), LineTexts(ref_page), weights);
    page.ser = ser.score;
    page.counts = ser.counts;

    total_distance += errors.distance;
    total_ref += errors.ref_chars;
    ser_sum += ser.score;
    report.totals.insertions += ser.counts.insertions;
    report.totals.deletions += ser.counts.deletions;
    report.totals.moves += ser.counts.moves;
    report.pages.push_back(page);
  }
  if (total_ref > 0) {
    report.corpus_cer = static_cast<double>(total_distance) / static_cast<double>(total_ref);
  }
  if (!report.pages.empty()) report.mean_ser = ser_sum / static_cast<double>(report.pages.size());
  return report;
}

std::string ReportToJson(const EvalReport& report) {
  nlohmann::ordered_json pages = nlohmann::ordered_json::array();
  for (const PageEval& p : report.pages) {
    nlohmann::ordered_json ops;
    ops["ins"] = p.counts.insertions;
    ops["del"] = p.counts.deletions;
    ops["moves"] = p.counts.moves;
    nlohmann::ordered_json entry;
    entry["page"] = p.page_number;
    entry["cer"] = p.cer;
    entry["ser"] = p.ser;
    entry["ops"] = std::move(ops);
    pages.push_back(std::move(entry));
  }
  nlohmann::ordered_json j;
  j["pages"] = std::move(pages);
  j["corpus_cer"] = report.corpus_cer;
  j["mean_ser"] = report.mean_ser;
  return j.dump(1) + "\n";
}

std::string FormatReportTable(const std::vector<std::pair<std::string, EvalReport>>& rows) {
  size_t width = 6;
  for (const auto& [name, r] : rows) width = std::max(width, name.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s  %8s  %8s\n", static_cast<int>(width), "System", "CER",
                "SER");
  out += buf;
  out += std::string(width + 20, '-') + "\n";
  for (const auto& [name, r] : rows) {
    std::snprintf(buf, sizeof(buf), "%-*s  %8.4f  %8.2f\n", static_cast<int>(width), name.c_str(),
                  r.corpus_cer, r.mean_ser);
    out += buf;
  }
  return out;
}

}  // namespace ocrpipe
