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

#include "ocrpipe/mask.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "ocrpipe/error.h"
#include "ocrpipe/text.h"

namespace ocrpipe {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

void CheckRecord(const MaskRecord& record, const std::string& where) {
  const size_t total = record.kept_count + record.masked.size();
  for (size_t i = 0; i < record.masked.size(); ++i) {
    if (i > 0 && record.masked[i].index <= record.masked[i - 1].index) {
      throw ParseError(where + ": masked indices not strictly increasing");
    }
    if (record.masked[i].index >= total) {
      throw ParseError(where + ": masked index " + std::to_string(record.masked[i].index) +
                       " out of range for " + std::to_string(total) + " tokens");
    }
    if (record.masked[i].token.text.empty()) {
      throw ParseError(where + ": empty masked token");
    }
  }
}

}  // namespace

void MaskPolicy::Validate() const {
  if (mask_langs.count(target_lang) > 0) {
    throw InvalidArgument("target language \"" + target_lang + "\" is also a masked language");
  }
}

bool MaskPolicy::ShouldMask(const std::string& text, const std::string& label) const {
  return mask_langs.count(label) > 0 || (mask_numerals && IsDecimalNumber(text)) ||
         mask_punct.count(text) > 0;
}

MaskedLine MaskLine(const Line& line, const std::vector<std::string>& labels,
                    const MaskPolicy& policy, int page_number) {
  if (labels.size() != line.tokens.size()) {
    throw LabelMismatch("line \"" + line.line_id + "\" has " +
                        std::to_string(line.tokens.size()) + " tokens but " +
                        std::to_string(labels.size()) + " labels");
  }
  MaskedLine out;
  out.record.page_number = page_number;
  out.record.line_id = line.line_id;
  std::vector<std::string> kept_texts;
  for (size_t i = 0; i < line.tokens.size(); ++i) {
    const Token& token = line.tokens[i];
    if (policy.ShouldMask(token.text, labels[i])) {
      out.record.masked.push_back({i, token});
    } else {
      kept_texts.push_back(token.text);
      out.kept_tokens.push_back(token);
    }
  }
  out.record.kept_count = out.kept_tokens.size();
  out.kept_text = Join(kept_texts, " ");
  return out;
}

UnmaskResult Reinsert(std::vector<Token> kept, const MaskRecord& record, bool flag_masked) {
  UnmaskResult out;
  out.drift = kept.size() != record.kept_count;
  out.tokens = std::move(kept);
  out.tokens.reserve(out.tokens.size() + record.masked.size());
  // Ascending indices into a growing sequence: without drift every token
  // lands exactly where it was.
  for (const MaskedToken& m : record.masked) {
    const size_t pos = std::min(m.index, out.tokens.size());
    Token token = m.token;
    if (flag_masked) token.masked = true;
    out.tokens.insert(out.tokens.begin() + static_cast<std::ptrdiff_t>(pos), std::move(token));
  }
  return out;
}

UnmaskResult UnmaskLine(const std::string& corrected_kept, const MaskRecord& record) {
  std::vector<Token> kept;
  for (std::string& text : SplitWhitespace(corrected_kept)) {
    kept.push_back(Token{std::move(text), std::nullopt, std::nullopt, false});
  }
  return Reinsert(std::move(kept), record);
}

MaskedDocument MaskDocument(const Document& doc, const MaskPolicy& policy) {
  policy.Validate();
  MaskedDocument out;
  out.document.source_id = doc.source_id;
  out.document.metadata = doc.metadata;
  for (const Page& page : doc.pages) {
    Page masked_page = page;
    for (size_t l = 0; l < page.lines.size(); ++l) {
      const Line& line = page.lines[l];
      std::vector<std::string> labels;
      labels.reserve(line.tokens.size());
      for (const Token& t : line.tokens) labels.push_back(t.lang.value_or(policy.target_lang));
      MaskedLine masked = MaskLine(line, labels, policy, page.page_number);
      masked_page.lines[l].tokens = std::move(masked.kept_tokens);
      out.sidecar.push_back(std::move(masked.record));
    }
    out.document.pages.push_back(std::move(masked_page));
  }
  return out;
}

UnmaskedDocument UnmaskDocument(const Document& corrected, const Sidecar& sidecar,
                                bool flag_masked) {
  std::map<std::pair<int, std::string>, const MaskRecord*> index;
  for (const MaskRecord& r : sidecar) index[{r.page_number, r.line_id}] = &r;

  UnmaskedDocument out;
  out.document.source_id = corrected.source_id;
  out.document.metadata = corrected.metadata;
  for (const Page& page : corrected.pages) {
    Page restored = page;
    for (Line& line : restored.lines) {
      auto it = index.find({page.page_number, line.line_id});
      if (it == index.end()) {
        throw MissingRecord("no sidecar entry for page " + std::to_string(page.page_number) +
                            " line \"" + line.line_id + "\"");
      }
      UnmaskResult r = Reinsert(std::move(line.tokens), *it->second, flag_masked);
      if (r.drift) {
        out.warnings.push_back("TokenCountDrift: page " + std::to_string(page.page_number) +
                               " line " + line.line_id);
      }
      line.tokens = std::move(r.tokens);
    }
    out.document.pages.push_back(std::move(restored));
  }
  return out;
}

std::string SidecarToJsonl(const Sidecar& sidecar) {
  std::string out;
  for (const MaskRecord& r : sidecar) {
    OrderedJson j;
    j["page"] = r.page_number;
    j["line_id"] = r.line_id;
    j["kept_count"] = r.kept_count;
    j["masked"] = OrderedJson::array();
    for (const MaskedToken& m : r.masked) {
      OrderedJson e;
      e["i"] = m.index;
      e["t"] = m.token.text;
      if (m.token.lang) e["lang"] = *m.token.lang;
      if (m.token.bbox) {
        e["bbox"] = {m.token.bbox->x0, m.token.bbox->y0, m.token.bbox->x1, m.token.bbox->y1};
      }
      if (m.token.masked) e["masked"] = true;
      j["masked"].push_back(std::move(e));
    }
    out += j.dump(-1, ' ', false, OrderedJson::error_handler_t::strict);
    out += '\n';
  }
  return out;
}

Sidecar ParseSidecar(const std::string& contents) {
  Sidecar sidecar;
  std::istringstream in(contents);
  std::string text;
  size_t lineno = 0;
  while (std::getline(in, text)) {
    ++lineno;
    if (text.empty()) continue;
    const std::string where = "sidecar line " + std::to_string(lineno);
    MaskRecord r;
    try {
      const Json j = Json::parse(text);
      for (const auto& [key, value] : j.items()) {
        if (key != "page" && key != "line_id" && key != "kept_count" && key != "masked") {
          throw ParseError(where + ": unknown key \"" + key + "\"");
        }
      }
      r.page_number = j.at("page").get<int>();
      r.line_id = j.at("line_id").get<std::string>();
      r.kept_count = j.at("kept_count").get<size_t>();
      for (const Json& e : j.at("masked")) {
        MaskedToken m;
        m.index = e.at("i").get<size_t>();
        m.token.text = Nfc(e.at("t").get<std::string>());
        if (e.contains("lang")) m.token.lang = e.at("lang").get<std::string>();
        if (e.contains("bbox")) {
          const auto b = e.at("bbox").get<std::vector<int64_t>>();
          if (b.size() != 4) throw ParseError(where + ": bbox needs 4 values");
          m.token.bbox = BBox{b[0], b[1], b[2], b[3]};
        }
        if (e.contains("masked")) m.token.masked = e.at("masked").get<bool>();
        r.masked.push_back(std::move(m));
      }
    } catch (const Json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
    CheckRecord(r, where);
    sidecar.push_back(std::move(r));
  }
  return sidecar;
}

void SaveSidecar(const Sidecar& sidecar, const std::filesystem::path& path) {
  WriteFile(path, SidecarToJsonl(sidecar));
}

Sidecar LoadSidecar(const std::filesystem::path& path) {
  return ParseSidecar(ReadFile(path));
}

}  // namespace ocrpipe
