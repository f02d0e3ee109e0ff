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

// Canonical layout-aware document model. Every pipeline stage reads and
// writes this representation; vendor formats are converted by ingest.h.
//
// On disk a Document is UTF-8 JSON:
//
//   {"source_id": str, "metadata": {str: str},
//    "pages": [{"page_number": int, "width": int|null, "height": int|null,
//               "lines": [{"line_id": str, "bbox": [x0,y0,x1,y1]|null,
//                          "column": int|null,
//                          "tokens": [{"text": str, "bbox": [...]|null,
//                                      "lang": str|null, "masked": bool}]}]}]}
//
// Keys are written in exactly this order so files diff cleanly. Unknown keys
// are rejected on load.

#ifndef OCRPIPE_DOCUMENT_H_
#define OCRPIPE_DOCUMENT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ocrpipe {

// Page-local pixel box, origin top-left.
struct BBox {
  int64_t x0 = 0;
  int64_t y0 = 0;
  int64_t x1 = 0;
  int64_t y1 = 0;

  int64_t width() const { return x1 - x0; }
  int64_t height() const { return y1 - y0; }
  double center_x() const { return (static_cast<double>(x0) + x1) / 2.0; }

  bool operator==(const BBox&) const = default;
};

// Smallest box covering both.
BBox Union(const BBox& a, const BBox& b);

struct Token {
  std::string text;
  std::optional<BBox> bbox;
  std::optional<std::string> lang;
  bool masked = false;

  bool operator==(const Token&) const = default;
};

struct Line {
  std::string line_id;
  std::optional<BBox> bbox;
  std::optional<int> column;
  std::vector<Token> tokens;

  // Tokens joined by single spaces.
  std::string Text() const;

  bool operator==(const Line&) const = default;
};

struct Page {
  int page_number = 1;
  std::optional<int64_t> width;
  std::optional<int64_t> height;
  std::vector<Line> lines;

  bool operator==(const Page&) const = default;
};

struct Document {
  std::string source_id;
  std::map<std::string, std::string> metadata;
  std::vector<Page> pages;

  bool operator==(const Document&) const = default;
};

// One broken invariant. `path` locates the element, e.g.
// "pages[0].lines[3].tokens[1].bbox"; `rule` is a stable identifier.
struct Violation {
  std::string path;
  std::string rule;
  std::string message;

  bool operator==(const Violation&) const = default;
};

// Empty iff every type invariant holds.
std::vector<Violation> ValidateDocument(const Document& doc);

// Serialization. ParseDocumentJson normalizes token text to NFC and throws
// ParseError for malformed input and ValidationError when the parsed document
// breaks an invariant. DocumentToJson output is byte-stable.
Document ParseDocumentJson(const std::string& json_text);
std::string DocumentToJson(const Document& doc);

Document LoadDocument(const std::filesystem::path& path);
// Throws IoError if the file cannot be written.
void SaveDocument(const Document& doc, const std::filesystem::path& path);

// Whole-file helpers shared by the loaders.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& contents);

}  // namespace ocrpipe

#endif  // OCRPIPE_DOCUMENT_H_
