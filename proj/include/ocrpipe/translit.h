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

// Grapheme rewrite tables for moving text between orthographies.
//
// Rule file (UTF-8 TSV):
//   #orthography: boas-hunt -> umista     (required)
//   #name: demo                            (optional)
//   # any other '#' line is a comment
//   source<TAB>target                      (target may be empty)

#ifndef OCRPIPE_TRANSLIT_H_
#define OCRPIPE_TRANSLIT_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ocrpipe/document.h"

namespace ocrpipe {

struct RewriteRule {
  std::string source;  // non-empty, NFC
  std::string target;  // NFC, may be empty

  bool operator==(const RewriteRule&) const = default;
};

class RuleTable {
 public:
  RuleTable() = default;
  // Throws DuplicateSource / InvalidArgument on a bad rule set.
  RuleTable(std::string name, std::string source_orthography, std::string target_orthography,
            std::vector<RewriteRule> rules);

  const std::string& name() const { return name_; }
  const std::string& source_orthography() const { return source_orthography_; }
  const std::string& target_orthography() const { return target_orthography_; }
  const std::vector<RewriteRule>& rules() const { return rules_; }

  // Single left-to-right pass. At each position the longest matching source
  // wins (earlier rule on equal length); its target is emitted and never
  // rescanned. Unmatched characters are copied. Output is NFC.
  std::string Transliterate(const std::string& text) const;

 private:
  std::string name_;
  std::string source_orthography_;
  std::string target_orthography_;
  std::vector<RewriteRule> rules_;
  // First code point -> rule indices by decreasing source length, then
  // table order.
  std::map<char32_t, std::vector<size_t>> by_first_;
  std::vector<std::u32string> sources_;
};

RuleTable ParseRules(const std::string& contents, const std::string& default_name = "");
RuleTable LoadRules(const std::filesystem::path& path);

// Transliterates every token not flagged masked. Tokens that rewrite to the
// empty string are dropped.
Document TransliterateDocument(const Document& doc, const RuleTable& table);

}  // namespace ocrpipe

#endif  // OCRPIPE_TRANSLIT_H_
