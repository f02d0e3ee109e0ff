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

#include "ocrpipe/document.h"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "ocrpipe/error.h"
#include "ocrpipe/text.h"

namespace ocrpipe {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

std::string Idx(const std::string& base, const char* field, size_t i) {
  return base + (base.empty() ? "" : ".") + field + "[" + std::to_string(i) +
         "]";
}

void RejectUnknownKeys(const Json& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return key == k; });
    if (!known) {
      throw ParseError("unknown key \"" + key + "\" at " +
                       (path.empty() ? std::string("<root>") : path));
    }
  }
}

const Json& Require(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(std::string("missing key \"") + key + "\" at " +
                     (path.empty() ? std::string("<root>") : path));
  }
  return *it;
}

// Absent and null both mean "no value".
const Json* Optional(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string AsString(const Json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError("expected string at " + path);
  return v.get<std::string>();
}

int64_t AsInt(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError("expected integer at " + path);
  return v.get<int64_t>();
}

const Json& AsArray(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError("expected array at " + path);
  return v;
}

const Json& AsObject(const Json& v, const std::string& path) {
  if (!v.is_object()) throw ParseError("expected object at " + path);
  return v;
}

BBox ParseBBox(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 4) {
    throw ParseError("bbox must be an array of 4 integers at " + path);
  }
  return BBox{AsInt(v[0], path + "[0]"), AsInt(v[1], path + "[1]"),
              AsInt(v[2], path + "[2]"), AsInt(v[3], path + "[3]")};
}

Token ParseToken(const Json& v, const std::string& path) {
  AsObject(v, path);
  RejectUnknownKeys(v, path, {"text", "bbox", "lang", "masked"});
  Token token;
  token.text = Nfc(AsString(Require(v, "text", path), path + ".text"));
  if (const Json* b = Optional(v, "bbox")) {
    token.bbox = ParseBBox(*b, path + ".bbox");
  }
  if (const Json* l = Optional(v, "lang")) {
    token.lang = AsString(*l, path + ".lang");
  }
  if (const Json* m = Optional(v, "masked")) {
    if (!m->is_boolean()) throw ParseError("expected bool at " + path + ".masked");
    token.masked = m->get<bool>();
  }
  return token;
}

Line ParseLine(const Json& v, const std::string& path) {
  AsObject(v, path);
  RejectUnknownKeys(v, path, {"line_id", "bbox", "column", "tokens"});
  Line line;
  line.line_id = AsString(Require(v, "line_id", path), path + ".line_id");
  if (const Json* b = Optional(v, "bbox")) {
    line.bbox = ParseBBox(*b, path + ".bbox");
  }
  if (const Json* c = Optional(v, "column")) {
    line.column = static_cast<int>(AsInt(*c, path + ".column"));
  }
  const Json& tokens = AsArray(Require(v, "tokens", path), path + ".tokens");
  for (size_t i = 0; i < tokens.size(); ++i) {
    line.tokens.push_back(ParseToken(tokens[i], Idx(path, "tokens", i)));
  }
  return line;
}

Page ParsePage(const Json& v, const std::string& path) {
  AsObject(v, path);
  RejectUnknownKeys(v, path, {"page_number", "width", "height", "lines"});
  Page page;
  page.page_number =
      static_cast<int>(AsInt(Require(v, "page_number", path), path + ".page_number"));
  if (const Json* w = Optional(v, "width")) page.width = AsInt(*w, path + ".width");
  if (const Json* h = Optional(v, "height")) page.height = AsInt(*h, path + ".height");
  const Json& lines = AsArray(Require(v, "lines", path), path + ".lines");
  for (size_t i = 0; i < lines.size(); ++i) {
    page.lines.push_back(ParseLine(lines[i], Idx(path, "lines", i)));
  }
  return page;
}

OrderedJson BBoxJson(const std::optional<BBox>& b) {
  if (!b) return nullptr;
  return OrderedJson::array({b->x0, b->y0, b->x1, b->y1});
}

void CheckBBox(const BBox& b, const std::string& path,
               std::vector<Violation>* out) {
  if (b.x0 > b.x1 || b.y0 > b.y1) {
    out->push_back({path, "bbox_order",
                    "bbox [" + std::to_string(b.x0) + "," + std::to_string(b.y0) +
                        "," + std::to_string(b.x1) + "," + std::to_string(b.y1) +
                        "] violates x0 <= x1 and y0 <= y1"});
  }
  if (b.x0 < 0 || b.y0 < 0 || b.x1 < 0 || b.y1 < 0) {
    out->push_back({path, "bbox_negative", "bbox has a negative coordinate"});
  }
}

}  // namespace

BBox Union(const BBox& a, const BBox& b) {
  return BBox{std::min(a.x0, b.x0), std::min(a.y0, b.y0),
              std::max(a.x1, b.x1), std::max(a.y1, b.y1)};
}

std::string Line::Text() const {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i].text;
  }
  return out;
}

std::vector<Violation> ValidateDocument(const Document& doc) {
  std::vector<Violation> out;
  for (size_t p = 0; p < doc.pages.size(); ++p) {
    const Page& page = doc.pages[p];
    const std::string ppath = Idx("", "pages", p);
    if (page.page_number <= 0) {
      out.push_back({ppath + ".page_number", "page_number_positive",
                     "page_number must be positive"});
    }
    if (p > 0 && page.page_number <= doc.pages[p - 1].page_number) {
      out.push_back({ppath + ".page_number", "page_number_order",
                     "page_number " + std::to_string(page.page_number) +
                         " does not increase over " +
                         std::to_string(doc.pages[p - 1].page_number)});
    }
    if ((page.width && *page.width < 0) || (page.height && *page.height < 0)) {
      out.push_back({ppath, "page_size_negative", "negative page dimension"});
    }
    std::unordered_map<std::string, size_t> seen_ids;
    for (size_t l = 0; l < page.lines.size(); ++l) {
      const Line& line = page.lines[l];
      const std::string lpath = Idx(ppath, "lines", l);
      auto [it, inserted] = seen_ids.emplace(line.line_id, l);
      if (!inserted) {
        out.push_back({lpath + ".line_id", "line_id_duplicate",
                       "line_id \"" + line.line_id + "\" shared by " +
                           Idx(ppath, "lines", it->second) + " and " + lpath});
      }
      if (line.bbox) CheckBBox(*line.bbox, lpath + ".bbox", &out);
      if (line.column && *line.column < 0) {
        out.push_back({lpath + ".column", "column_negative",
                       "column index must be >= 0"});
      }
      for (size_t t = 0; t < line.tokens.size(); ++t) {
        const Token& token = line.tokens[t];
        const std::string tpath = Idx(lpath, "tokens", t);
        if (token.text.empty()) {
          out.push_back({tpath + ".text", "token_empty", "token text is empty"});
          continue;
        }
        try {
          if (ContainsWhitespace(token.text)) {
            out.push_back({tpath + ".text", "token_whitespace",
                           "token text \"" + token.text + "\" contains whitespace"});
          }
          if (!IsNfc(token.text)) {
            out.push_back({tpath + ".text", "token_not_nfc",
                           "token text is not NFC-normalized"});
          }
        } catch (const ParseError&) {
          out.push_back({tpath + ".text", "token_utf8", "token text is not UTF-8"});
        }
        if (token.bbox) CheckBBox(*token.bbox, tpath + ".bbox", &out);
      }
    }
  }
  return out;
}

Document ParseDocumentJson(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }
  AsObject(root, "<root>");
  RejectUnknownKeys(root, "", {"source_id", "metadata", "pages"});
  Document doc;
  doc.source_id = AsString(Require(root, "source_id", ""), "source_id");
  if (const Json* meta = Optional(root, "metadata")) {
    AsObject(*meta, "metadata");
    for (const auto& [key, value] : meta->items()) {
      doc.metadata[key] = AsString(value, "metadata." + key);
    }
  }
  const Json& pages = AsArray(Require(root, "pages", ""), "pages");
  for (size_t i = 0; i < pages.size(); ++i) {
    doc.pages.push_back(ParsePage(pages[i], Idx("", "pages", i)));
  }
  const std::vector<Violation> violations = ValidateDocument(doc);
  if (!violations.empty()) {
    std::ostringstream msg;
    for (size_t i = 0; i < violations.size(); ++i) {
      if (i > 0) msg << "; ";
      msg << violations[i].path << ": " << violations[i].message << " ["
          << violations[i].rule << "]";
    }
    throw ValidationError(msg.str());
  }
  return doc;
}

std::string DocumentToJson(const Document& doc) {
  OrderedJson root;
  root["source_id"] = doc.source_id;
  root["metadata"] = OrderedJson::object();
  for (const auto& [key, value] : doc.metadata) root["metadata"][key] = value;
  root["pages"] = OrderedJson::array();
  for (const Page& page : doc.pages) {
    OrderedJson p;
    p["page_number"] = page.page_number;
    p["width"] = page.width ? OrderedJson(*page.width) : OrderedJson(nullptr);
    p["height"] = page.height ? OrderedJson(*page.height) : OrderedJson(nullptr);
    p["lines"] = OrderedJson::array();
    for (const Line& line : page.lines) {
      OrderedJson l;
      l["line_id"] = line.line_id;
      l["bbox"] = BBoxJson(line.bbox);
      l["column"] = line.column ? OrderedJson(*line.column) : OrderedJson(nullptr);
      l["tokens"] = OrderedJson::array();
      for (const Token& token : line.tokens) {
        OrderedJson t;
        t["text"] = token.text;
        t["bbox"] = BBoxJson(token.bbox);
        t["lang"] = token.lang ? OrderedJson(*token.lang) : OrderedJson(nullptr);
        t["masked"] = token.masked;
        l["tokens"].push_back(std::move(t));
      }
      p["lines"].push_back(std::move(l));
    }
    root["pages"].push_back(std::move(p));
  }
  return root.dump(1, ' ', false, OrderedJson::error_handler_t::strict) + "\n";
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path.string());
  return buf.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

Document LoadDocument(const std::filesystem::path& path) {
  return ParseDocumentJson(ReadFile(path));
}

void SaveDocument(const Document& doc, const std::filesystem::path& path) {
  WriteFile(path, DocumentToJson(doc));
}

}  // namespace ocrpipe
