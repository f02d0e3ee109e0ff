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

// Token masking ahead of correction, and reinsertion afterwards.
//
// Sidecar file: JSON Lines, one object per document line in document order:
//   {"page": 3, "line_id": "l0007", "kept_count": 4,
//    "masked": [{"i": 0, "t": "12"}, {"i": 2, "t": "(", "lang": "eng",
//                "bbox": [10, 20, 30, 40]}]}
// "lang", "bbox" and "masked" inside a masked entry are present only when the
// original token carried them, so reinsertion restores the token exactly.

#ifndef OCRPIPE_MASK_H_
#define OCRPIPE_MASK_H_

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "ocrpipe/document.h"

namespace ocrpipe {

struct MaskPolicy {
  std::string target_lang;
  std::set<std::string> mask_langs;
  bool mask_numerals = true;
  std::set<std::string> mask_punct = {"(", ")"};

  // Throws InvalidArgument if target_lang is also listed in mask_langs.
  void Validate() const;
  bool ShouldMask(const std::string& text, const std::string& label) const;
};

struct MaskedToken {
  size_t index = 0;  // position in the original line
  Token token;

  bool operator==(const MaskedToken&) const = default;
};

struct MaskRecord {
  int page_number = 0;
  std::string line_id;
  std::vector<MaskedToken> masked;  // strictly increasing index
  size_t kept_count = 0;

  bool operator==(const MaskRecord&) const = default;
};

struct MaskedLine {
  std::string kept_text;
  std::vector<Token> kept_tokens;
  MaskRecord record;
};

// `labels` gives one language label per token. Throws LabelMismatch when
// the sizes disagree.
MaskedLine MaskLine(const Line& line, const std::vector<std::string>& labels,
                    const MaskPolicy& policy, int page_number = 0);

struct UnmaskResult {
  std::vector<Token> tokens;
  // Set when the corrected line no longer has record.kept_count tokens; the
  // masked tokens were then placed at clamped positions.
  bool drift = false;
};

// Puts masked tokens back among `kept` at their recorded positions. If the
// kept count changed, each masked token goes to min(index, current size),
// in recorded order.
UnmaskResult Reinsert(std::vector<Token> kept, const MaskRecord& record,
                      bool flag_masked = false);
UnmaskResult UnmaskLine(const std::string& corrected_kept, const MaskRecord& record);

using Sidecar = std::vector<MaskRecord>;

struct MaskedDocument {
  Document document;  // lines hold only kept tokens; empty lines preserved
  Sidecar sidecar;
};

// Per-token labels come from Token::lang; a token without a label is treated
// as target language.
MaskedDocument MaskDocument(const Document& doc, const MaskPolicy& policy);

struct UnmaskedDocument {
  Document document;
  // One "TokenCountDrift: page P line L" entry per drifting line.
  std::vector<std::string> warnings;
};

// Throws MissingRecord if a line of `corrected` has no sidecar entry. With
// flag_masked, reinserted tokens get Token::masked = true so later stages
// can skip them.
UnmaskedDocument UnmaskDocument(const Document& corrected, const Sidecar& sidecar,
                                bool flag_masked = false);

std::string SidecarToJsonl(const Sidecar& sidecar);
Sidecar ParseSidecar(const std::string& contents);
void SaveSidecar(const Sidecar& sidecar, const std::filesystem::path& path);
Sidecar LoadSidecar(const std::filesystem::path& path);

}  // namespace ocrpipe

#endif  // OCRPIPE_MASK_H_
