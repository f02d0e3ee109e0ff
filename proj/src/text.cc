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

#include "ocrpipe/text.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "ocrpipe/error.h"

namespace ocrpipe {
namespace {

const icu::Normalizer2& NfcNormalizer() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || nfc == nullptr) {
    throw Error("ICU NFC normalizer unavailable");
  }
  return *nfc;
}

void CheckUtf8(std::string_view text) {
  int32_t i = 0;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto n = static_cast<int32_t>(text.size());
  while (i < n) {
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c < 0) throw ParseError("invalid UTF-8 at byte " + std::to_string(i));
  }
}

}  // namespace

std::string Nfc(std::string_view text) {
  CheckUtf8(text);
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString normalized = NfcNormalizer().normalize(
      icu::UnicodeString::fromUTF8(
          icu::StringPiece(text.data(), static_cast<int32_t>(text.size()))),
      status);
  if (U_FAILURE(status)) throw ParseError("NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

bool IsNfc(std::string_view text) {
  CheckUtf8(text);
  UErrorCode status = U_ZERO_ERROR;
  const bool ok = NfcNormalizer().isNormalized(
      icu::UnicodeString::fromUTF8(
          icu::StringPiece(text.data(), static_cast<int32_t>(text.size()))),
      status);
  return U_SUCCESS(status) && ok;
}

std::u32string ToCodePoints(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  int32_t i = 0;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto n = static_cast<int32_t>(text.size());
  while (i < n) {
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c < 0) throw ParseError("invalid UTF-8 at byte " + std::to_string(i));
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

void AppendUtf8(char32_t cp, std::string* out) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
  if (error) throw InvalidArgument("code point out of range");
  out->append(reinterpret_cast<const char*>(buf), static_cast<size_t>(len));
}

std::string FromCodePoints(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) AppendUtf8(cp, &out);
  return out;
}

size_t CodePointLength(std::string_view text) {
  return ToCodePoints(text).size();
}

bool IsWhitespace(char32_t cp) {
  return u_isUWhiteSpace(static_cast<UChar32>(cp));
}

bool ContainsWhitespace(std::string_view text) {
  for (char32_t cp : ToCodePoints(text)) {
    if (IsWhitespace(cp)) return true;
  }
  return false;
}

bool IsDecimalNumber(std::string_view text) {
  const std::u32string cps = ToCodePoints(text);
  if (cps.empty()) return false;
  for (char32_t cp : cps) {
    if (u_charType(static_cast<UChar32>(cp)) != U_DECIMAL_DIGIT_NUMBER) {
      return false;
    }
  }
  return true;
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> pieces;
  std::string current;
  for (char32_t cp : ToCodePoints(text)) {
    if (IsWhitespace(cp)) {
      if (!current.empty()) pieces.push_back(std::move(current));
      current.clear();
    } else {
      AppendUtf8(cp, &current);
    }
  }
  if (!current.empty()) pieces.push_back(std::move(current));
  return pieces;
}

std::string CollapseWhitespace(std::string_view text) {
  return Join(SplitWhitespace(text), " ");
}

std::string Join(const std::vector<std::string>& pieces, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(pieces[i]);
  }
  return out;
}

}  // namespace ocrpipe
