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

#ifndef OCRPIPE_INGEST_H_
#define OCRPIPE_INGEST_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ocrpipe/document.h"

namespace ocrpipe {

// Converts a cloud OCR structured response into a Document.
//
// Accepted shapes (pages -> blocks -> paragraphs -> words):
//   {"responses": [{"fullTextAnnotation": {"pages": [...]}}, ...]}
//   {"fullTextAnnotation": {"pages": [...]}}
//   {"pages": [...]}                         (bare annotation)
// Each word carries "boundingBox": {"vertices": [{"x":..,"y":..}, ...]} and
// either "symbols": [{"text": .., "property": {"detectedBreak": {"type": ..}}}]
// or a plain "text". A line ends after a word whose last symbol (or the word
// itself) has a LINE_BREAK / EOL_SURE_SPACE break, and at every paragraph end.
//
// A canonical document (has "source_id") is passed through LoadDocument.
// Pages without text get a "warning.empty_page.<n>" metadata entry; a
// response without pages gets "warning.empty_response".
Document ImportOcr(const std::filesystem::path& path);
Document ImportOcrJson(const std::string& json_text, const std::string& source_id);

struct ColumnInterval {
  int64_t left = 0;
  int64_t right = 0;

  bool operator==(const ColumnInterval&) const = default;
};

struct ColumnModel {
  // Left-to-right, non-overlapping.
  std::vector<ColumnInterval> columns;
  // Column index of each line, keyed by line_id.
  std::map<std::string, int> assignment;
  // Set when some line lacked a bbox and detection fell back to one column.
  bool missing_geometry = false;

  bool operator==(const ColumnModel&) const = default;
};

// Splits a page into one or two columns on the widest vertical whitespace
// gap in the x-projection of line boxes. Two columns iff that gap is wider
// than gap_ratio * (text extent).
ColumnModel DetectColumns(const Page& page, double gap_ratio = 0.15);

// Stable sort of lines by (column, top y, left x). A missing-geometry model
// leaves the order untouched.
Page ReorderPage(const Page& page, const ColumnModel& columns);

// Writes the model's column index into each Line::column.
Page AssignColumns(const Page& page, const ColumnModel& columns);

}  // namespace ocrpipe

#endif  // OCRPIPE_INGEST_H_
