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

#include "ocrpipe/ingest.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "ocrpipe/error.h"
#include "ocrpipe/text.h"

namespace ocrpipe {
namespace {

using Json = nlohmann::json;

std::string LineId(size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "l%04zu", n);
  return buf;
}

int64_t Coord(const Json& vertex, const char* key) {
  // The vendor omits zero-valued coordinates and may report slightly
  // negative ones for content touching the page edge.
  auto it = vertex.find(key);
  if (it == vertex.end() || it->is_null()) return 0;
  if (!it->is_number()) throw ParseError(std::string("vertex ") + key + " is not a number");
  const double v = it->get<double>();
  return v < 0 ? 0 : static_cast<int64_t>(v);
}

BBox PolygonBox(const Json& word) {
  auto bb = word.find("boundingBox");
  if (bb == word.end() || !bb->is_object()) {
    throw ParseError("word without boundingBox");
  }
  auto verts = bb->find("vertices");
  if (verts == bb->end() || !verts->is_array() || verts->empty()) {
    throw ParseError("boundingBox without vertices");
  }
  BBox box{std::numeric_limits<int64_t>::max(), std::numeric_limits<int64_t>::max(),
           0, 0};
  for (const Json& v : *verts) {
    if (!v.is_object()) throw ParseError("vertex is not an object");
    const int64_t x = Coord(v, "x");
    const int64_t y = Coord(v, "y");
    box.x0 = std::min(box.x0, x);
    box.y0 = std::min(box.y0, y);
    box.x1 = std::max(box.x1, x);
    box.y1 = std::max(box.y1, y);
  }
  return box;
}

bool IsLineBreak(const Json& holder) {
  auto prop = holder.find("property");
  if (prop == holder.end() || !prop->is_object()) return false;
  auto brk = prop->find("detectedBreak");
  if (brk == prop->end() || !brk->is_object()) return false;
  auto type = brk->find("type");
  if (type == brk->end() || !type->is_string()) return false;
  const std::string t = type->get<std::string>();
  return t == "LINE_BREAK" || t == "EOL_SURE_SPACE" || t == "HYPHEN";
}

const Json& ArrayField(const Json& obj, const char* key) {
  static const Json kEmpty = Json::array();
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return kEmpty;
  if (!it->is_array()) throw ParseError(std::string("\"") + key + "\" is not an array");
  return *it;
}

struct WordText {
  std::string text;
  bool ends_line = false;
};

WordText ReadWord(const Json& word) {
  WordText out;
  if (auto t = word.find("text"); t != word.end() && t->is_string()) {
    out.text = t->get<std::string>();
    out.ends_line = IsLineBreak(word);
    return out;
  }
  const Json& symbols = ArrayField(word, "symbols");
  for (const Json& sym : symbols) {
    auto t = sym.find("text");
    if (t == sym.end() || !t->is_string()) throw ParseError("symbol without text");
    out.text += t->get<std::string>();
  }
  out.ends_line = IsLineBreak(word) || (!symbols.empty() && IsLineBreak(symbols.back()));
  return out;
}

class PageBuilder {
 public:
  explicit PageBuilder(int page_number) { page_.page_number = page_number; }

  void AddWord(const WordText& word, const BBox& box) {
    for (std::string& piece : SplitWhitespace(Nfc(word.text))) {
      current_.tokens.push_back(Token{std::move(piece), box, std::nullopt, false});
      current_.bbox = current_.bbox ? Union(*current_.bbox, box) : box;
    }
    if (word.ends_line) EndLine();
  }

  void EndLine() {
    if (current_.tokens.empty()) return;
    current_.line_id = LineId(page_.lines.size() + 1);
    page_.lines.push_back(std::move(current_));
    current_ = Line{};
  }

  Page Finish() {
    EndLine();
    return std::move(page_);
  }

  Page& page() { return page_; }

 private:
  Page page_;
  Line current_;
};

void CollectAnnotationPages(const Json& annotation, std::vector<const Json*>* out) {
  for (const Json& page : ArrayField(annotation, "pages")) out->push_back(&page);
}

}  // namespace

Document ImportOcrJson(const std::string& json_text, const std::string& source_id) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!root.is_object()) throw ParseError("OCR response is not a JSON object");
  if (root.contains("source_id")) return ParseDocumentJson(json_text);

  std::vector<const Json*> vendor_pages;
  if (root.contains("responses")) {
    for (const Json& response : ArrayField(root, "responses")) {
      if (!response.is_object()) throw ParseError("response is not an object");
      auto fta = response.find("fullTextAnnotation");
      if (fta != response.end() && fta->is_object()) {
        CollectAnnotationPages(*fta, &vendor_pages);
      }
    }
  } else if (auto fta = root.find("fullTextAnnotation"); fta != root.end()) {
    if (!fta->is_object()) throw ParseError("fullTextAnnotation is not an object");
    CollectAnnotationPages(*fta, &vendor_pages);
  } else {
    CollectAnnotationPages(root, &vendor_pages);
  }

  Document doc;
  doc.source_id = source_id;
  if (vendor_pages.empty()) {
    doc.metadata["warning.empty_response"] = "OCR response contains no pages";
    return doc;
  }
  int page_number = 0;
  for (const Json* vp : vendor_pages) {
    if (!vp->is_object()) throw ParseError("page is not an object");
    PageBuilder builder(++page_number);
    if (auto w = vp->find("width"); w != vp->end() && w->is_number_integer()) {
      builder.page().width = w->get<int64_t>();
    }
    if (auto h = vp->find("height"); h != vp->end() && h->is_number_integer()) {
      builder.page().height = h->get<int64_t>();
    }
    for (const Json& block : ArrayField(*vp, "blocks")) {
      for (const Json& para : ArrayField(block, "paragraphs")) {
        for (const Json& word : ArrayField(para, "words")) {
          builder.AddWord(ReadWord(word), PolygonBox(word));
        }
        builder.EndLine();
      }
    }
    Page page = builder.Finish();
    if (page.lines.empty()) {
      doc.metadata["warning.empty_page." + std::to_string(page.page_number)] =
          "page has no text";
    }
    doc.pages.push_back(std::move(page));
  }
  return doc;
}

Document ImportOcr(const std::filesystem::path& path) {
  return ImportOcrJson(ReadFile(path), path.stem().string());
}

ColumnModel DetectColumns(const Page& page, double gap_ratio) {
  ColumnModel model;
  const size_t n = page.lines.size();
  for (const Line& line : page.lines) model.assignment[line.line_id] = 0;
  const bool all_boxed = std::all_of(page.lines.begin(), page.lines.end(),
                                     [](const Line& l) { return l.bbox.has_value(); });
  if (n == 0 || !all_boxed) {
    model.missing_geometry = n > 0;
    model.columns.push_back({0, page.width.value_or(0)});
    return model;
  }

  std::vector<ColumnInterval> spans;
  spans.reserve(n);
  for (const Line& line : page.lines) spans.push_back({line.bbox->x0, line.bbox->x1});
  std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) {
    return a.left != b.left ? a.left < b.left : a.right < b.right;
  });
  const int64_t min_x = spans.front().left;
  int64_t max_x = 0;
  for (const auto& s : spans) max_x = std::max(max_x, s.right);

  // Sweep the union of spans; remember the widest uncovered stretch.
  int64_t covered_to = spans.front().right;
  int64_t best_gap = 0;
  int64_t gap_left = 0;
  int64_t gap_right = 0;
  for (size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].left > covered_to && spans[i].left - covered_to > best_gap) {
      best_gap = spans[i].left - covered_to;
      gap_left = covered_to;
      gap_right = spans[i].left;
    }
    covered_to = std::max(covered_to, spans[i].right);
  }

  const double text_width = static_cast<double>(max_x - min_x);
  if (text_width <= 0 || static_cast<double>(best_gap) <= gap_ratio * text_width) {
    model.columns.push_back({min_x, max_x});
    return model;
  }
  model.columns.push_back({min_x, gap_left});
  model.columns.push_back({gap_right, max_x});
  const double split = (static_cast<double>(gap_left) + gap_right) / 2.0;
  for (const Line& line : page.lines) {
    model.assignment[line.line_id] = line.bbox->center_x() < split ? 0 : 1;
  }
  return model;
}

namespace {

std::vector<int> ColumnsOf(const Page& page, const ColumnModel& columns) {
  std::vector<int> out;
  out.reserve(page.lines.size());
  for (const Line& line : page.lines) {
    auto it = columns.assignment.find(line.line_id);
    if (it == columns.assignment.end()) {
      throw InvalidArgument("column model has no entry for line \"" + line.line_id +
                            "\" on page " + std::to_string(page.page_number));
    }
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

Page ReorderPage(const Page& page, const ColumnModel& columns) {
  const bool all_boxed = std::all_of(page.lines.begin(), page.lines.end(),
                                     [](const Line& l) { return l.bbox.has_value(); });
  if (columns.missing_geometry || !all_boxed) return page;
  const std::vector<int> column = ColumnsOf(page, columns);
  std::vector<size_t> order(page.lines.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const BBox& ba = *page.lines[a].bbox;
    const BBox& bb = *page.lines[b].bbox;
    if (column[a] != column[b]) return column[a] < column[b];
    if (ba.y0 != bb.y0) return ba.y0 < bb.y0;
    return ba.x0 < bb.x0;
  });
  Page out = page;
  for (size_t i = 0; i < order.size(); ++i) out.lines[i] = page.lines[order[i]];
  return out;
}

Page AssignColumns(const Page& page, const ColumnModel& columns) {
  const std::vector<int> column = ColumnsOf(page, columns);
  Page out = page;
  for (size_t i = 0; i < out.lines.size(); ++i) out.lines[i].column = column[i];
  return out;
}

}  // namespace ocrpipe
