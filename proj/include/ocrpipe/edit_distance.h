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

#ifndef OCRPIPE_EDIT_DISTANCE_H_
#define OCRPIPE_EDIT_DISTANCE_H_

#include <string>
#include <string_view>
#include <vector>

namespace ocrpipe {

// Unit-cost Levenshtein distance over code points.
size_t EditDistance(std::u32string_view a, std::u32string_view b);

enum class EditKind {
  kNoEdit,
  kSubstitute,
  kDelete,  // drop a src character
  kInsert,  // add a ref character
};

struct EditOp {
  EditKind kind;
  char32_t src = 0;  // 0 for kInsert
  char32_t ref = 0;  // 0 for kDelete

  bool operator==(const EditOp&) const = default;
};

using EditScript = std::vector<EditOp>;

// Minimal unit-cost script turning `src` into `ref`. Among minimal scripts the
// traceback (run from the end of both strings) prefers no-edit, then
// substitute, then delete, then insert.
EditScript AlignPair(std::u32string_view src, std::u32string_view ref);
EditScript AlignPair(std::string_view src, std::string_view ref);

// Number of non-no-edit operations.
size_t ScriptCost(const EditScript& script);

// Replays `script` against `src`; throws InvalidArgument if the script does
// not fit the string.
std::u32string ApplyScript(std::u32string_view src, const EditScript& script);

}  // namespace ocrpipe

#endif  // OCRPIPE_EDIT_DISTANCE_H_
