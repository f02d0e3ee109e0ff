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

// UTF-8 text helpers shared by every stage. All character-level work in the
// toolkit (edit distance, n-grams, rewrite rules) happens on code points of
// NFC-normalized text.

#ifndef OCRPIPE_TEXT_H_
#define OCRPIPE_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ocrpipe {

// Returns the NFC form of `text`. Throws ParseError on invalid UTF-8.
std::string Nfc(std::string_view text);
bool IsNfc(std::string_view text);

// Decodes UTF-8 into code points. Throws ParseError on invalid UTF-8.
std::u32string ToCodePoints(std::string_view text);
std::string FromCodePoints(std::u32string_view cps);
void AppendUtf8(char32_t cp, std::string* out);

// Number of code points in valid UTF-8.
size_t CodePointLength(std::string_view text);

bool IsWhitespace(char32_t cp);
bool ContainsWhitespace(std::string_view text);
// True for a non-empty string made only of Unicode decimal digits (Nd).
bool IsDecimalNumber(std::string_view text);

// Splits on runs of Unicode whitespace; never yields empty pieces.
std::vector<std::string> SplitWhitespace(std::string_view text);
// Trims and collapses every whitespace run to a single ASCII space.
std::string CollapseWhitespace(std::string_view text);
std::string Join(const std::vector<std::string>& pieces, std::string_view sep);

}  // namespace ocrpipe

#endif  // OCRPIPE_TEXT_H_
