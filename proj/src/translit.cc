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

#include "ocrpipe/translit.h"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "ocrpipe/error.h"
#include "ocrpipe/text.h"

namespace ocrpipe {
namespace {

constexpr const char* kOrthographyHeader = "#orthography:";
constexpr const char* kNameHeader = "#name:";

std::string Trim(const std::string& s) { return CollapseWhitespace(s); }

}  // namespace

RuleTable::RuleTable(std::string name, std::string source_orthography,
                     std::string target_orthography, std::vector<RewriteRule> rules)
    : name_(std::move(name)),
      source_orthography_(std::move(source_orthography)),
      target_orthography_(std::move(target_orthography)),
      rules_(std::move(rules)) {
  std::unordered_map<std::string, size_t> seen;
  for (size_t i = 0; i < rules_.size(); ++i) {
    RewriteRule& rule = rules_[i];
    rule.source = Nfc(rule.source);
    rule.target = Nfc(rule.target);
    if (rule.source.empty()) throw InvalidArgument("rule " + std::to_string(i + 1) + " has an empty source");
    if (!seen.emplace(rule.source, i).second) {
      throw DuplicateSource("rule " + std::to_string(i + 1) + " repeats source \"" +
                            rule.source + "\"");
    }
    sources_.push_back(ToCodePoints(rule.source));
    by_first_[sources_.back()[0]].push_back(i);
  }
  for (auto& [first, indices] : by_first_) {
    std::stable_sort(indices.begin(), indices.end(), [&](size_t a, size_t b) {
      return sources_[a].size() > sources_[b].size();
    });
  }
}

std::string RuleTable::Transliterate(const std::string& text) const {
  const std::u32string input = ToCodePoints(Nfc(text));
  std::string out;
  out.reserve(text.size());
  size_t pos = 0;
  while (pos < input.size()) {
    const RewriteRule* match = nullptr;
    size_t match_len = 0;
    if (auto it = by_first_.find(input[pos]); it != by_first_.end()) {
      for (size_t idx : it->second) {
        const std::u32string& src = sources_[idx];
        if (input.compare(pos, src.size(), src) == 0) {
          match = &rules_[idx];
          match_len = src.size();
          break;
        }
      }
    }
    if (match != nullptr) {
      out += match->target;
      pos += match_len;
    } else {
      AppendUtf8(input[pos], &out);
      ++pos;
    }
  }
  return Nfc(out);
}

RuleTable ParseRules(const std::string& contents, const std::string& default_name) {
  std::istringstream in(contents);
  std::string line;
  size_t lineno = 0;
  std::string name = default_name;
  std::string from, to;
  bool have_header = false;
  std::vector<RewriteRule> rules;
  std::vector<size_t> rule_lines;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind(kOrthographyHeader, 0) == 0) {
        const std::string decl = line.substr(std::char_traits<char>::length(kOrthographyHeader));
        const size_t arrow = decl.find("->");
        if (arrow == std::string::npos) {
          throw ParseError("rules line " + std::to_string(lineno) +
                           ": orthography header needs \"<src> -> <dst>\"");
        }
        from = Trim(decl.substr(0, arrow));
        to = Trim(decl.substr(arrow + 2));
        if (from.empty() || to.empty()) {
          throw ParseError("rules line " + std::to_string(lineno) + ": empty orthography name");
        }
        have_header = true;
      } else if (line.rfind(kNameHeader, 0) == 0) {
        name = Trim(line.substr(std::char_traits<char>::length(kNameHeader)));
      }
      continue;
    }
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError("rules line " + std::to_string(lineno) + ": expected source<TAB>target");
    }
    RewriteRule rule{Nfc(line.substr(0, tab)), Nfc(line.substr(tab + 1))};
    if (rule.source.empty()) {
      throw ParseError("rules line " + std::to_string(lineno) + ": empty source");
    }
    if (ContainsWhitespace(rule.source) || ContainsWhitespace(rule.target)) {
      throw ParseError("rules line " + std::to_string(lineno) + ": whitespace inside a rule");
    }
    for (size_t i = 0; i < rules.size(); ++i) {
      if (rules[i].source == rule.source) {
        throw DuplicateSource("rules line " + std::to_string(lineno) + " repeats source \"" +
                              rule.source + "\" from line " + std::to_string(rule_lines[i]));
      }
    }
    rules.push_back(std::move(rule));
    rule_lines.push_back(lineno);
  }
  if (!have_header) throw ParseError("missing \"#orthography: <src> -> <dst>\" header");
  return RuleTable(name, from, to, std::move(rules));
}

RuleTable LoadRules(const std::filesystem::path& path) {
  return ParseRules(ReadFile(path), path.stem().string());
}

Document TransliterateDocument(const Document& doc, const RuleTable& table) {
  Document out = doc;
  for (Page& page : out.pages) {
    for (Line& line : page.lines) {
      std::vector<Token> tokens;
      tokens.reserve(line.tokens.size());
      for (Token& token : line.tokens) {
        if (!token.masked) token.text = table.Transliterate(token.text);
        if (!token.text.empty()) tokens.push_back(std::move(token));
      }
      line.tokens = std::move(tokens);
    }
  }
  return out;
}

}  // namespace ocrpipe
