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

// Character error rate and structural error rate.
//
// SER for one page:
//   1. Match hyp lines to ref lines one-to-one, maximizing total similarity
//      sim(h, r) = max(0, 1 - cer(h, r)) over pairs with sim >= theta.
//   2. I = unmatched hyp lines, D = unmatched ref lines.
//   3. Sort matched pairs by hyp index and read off their ref indices. Keep a
//      longest increasing subsequence; the other pairs are displaced. Among
//      all longest subsequences, the one leaving the fewest move blocks is
//      used, where a block is a maximal run of displaced pairs adjacent in
//      hyp order whose ref indices also go up by exactly one.
//   4. score = min(100, 100 * (w_ins I + w_del D + w_move blocks) / |ref|).

#ifndef OCRPIPE_EVAL_H_
#define OCRPIPE_EVAL_H_

#include <string>
#include <utility>
#include <vector>

#include "ocrpipe/document.h"

namespace ocrpipe {

struct SerWeights {
  double w_insert = 1.0;
  double w_delete = 1.0;
  double w_move = 1.0;
  double theta = 0.5;

  void Validate() const;
};

// Text as CER sees it: NFC, whitespace runs collapsed to one space, trimmed.
std::string NormalizeForCer(const std::string& text);

// Edit distance between normalized texts, and the normalized ref length.
struct CharErrors {
  size_t distance = 0;
  size_t ref_chars = 0;
};
CharErrors CountCharErrors(const std::string& hyp, const std::string& ref);

// distance / ref_chars. Throws EmptyReference for a blank reference.
double Cer(const std::string& hyp, const std::string& ref);

// max(0, 1 - cer); two blank lines count as identical, blank vs text as 0.
double LineSimilarity(const std::string& hyp, const std::string& ref);

using LineMatching = std::vector<std::pair<size_t, size_t>>;  // (hyp, ref), by hyp

LineMatching AlignLines(const std::vector<std::string>& hyp, const std::vector<std::string>& ref,
                        double theta = 0.5);

struct SerCounts {
  size_t insertions = 0;
  size_t deletions = 0;
  size_t moves = 0;

  bool operator==(const SerCounts&) const = default;
};

struct SerResult {
  double score = 0.0;
  SerCounts counts;
};

// Throws EmptyReference when ref has no lines.
SerResult Ser(const std::vector<std::string>& hyp, const std::vector<std::string>& ref,
              const SerWeights& weights = {});

// Move blocks for a matched ref-index sequence (given in hyp order).
size_t CountMoveBlocks(const std::vector<size_t>& ref_indices);

struct PageEval {
  int page_number = 0;
  double cer = 0.0;
  double ser = 0.0;
  SerCounts counts;
  size_t char_distance = 0;
  size_t ref_chars = 0;
};

struct EvalReport {
  std::vector<PageEval> pages;
  double corpus_cer = 0.0;  // total distance / total ref chars
  double mean_ser = 0.0;
  SerCounts totals;
};

// Pages are paired by page_number; throws PageCountMismatch if the documents
// disagree on the page set.
EvalReport Evaluate(const Document& hyp, const Document& ref, const SerWeights& weights = {});

std::string ReportToJson(const EvalReport& report);

// Rows are named systems (e.g. "first-pass", "corrected"), columns CER and
// SER, one row per entry.
std::string FormatReportTable(const std::vector<std::pair<std::string, EvalReport>>& rows);

}  // namespace ocrpipe

#endif  // OCRPIPE_EVAL_H_
