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

#include "ocrpipe/edit_distance.h"

#include <algorithm>
#include <numeric>

#include "ocrpipe/error.h"
#include "ocrpipe/text.h"

namespace ocrpipe {

size_t EditDistance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), size_t{0});
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

EditScript AlignPair(std::u32string_view src, std::u32string_view ref) {
  const size_t n = src.size();
  const size_t m = ref.size();
  std::vector<size_t> d((n + 1) * (m + 1));
  auto at = [&](size_t i, size_t j) -> size_t& { return d[i * (m + 1) + j]; };
  for (size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      at(i, j) = std::min({at(i - 1, j) + 1, at(i, j - 1) + 1,
                           at(i - 1, j - 1) + (src[i - 1] == ref[j - 1] ? 0 : 1)});
    }
  }

  EditScript script;
  size_t i = n;
  size_t j = m;
  while (i > 0 || j > 0) {
    const size_t cur = at(i, j);
    if (i > 0 && j > 0 && src[i - 1] == ref[j - 1] && cur == at(i - 1, j - 1)) {
      script.push_back({EditKind::kNoEdit, src[i - 1], ref[j - 1]});
      --i, --j;
    } else if (i > 0 && j > 0 && cur == at(i - 1, j - 1) + 1) {
      script.push_back({EditKind::kSubstitute, src[i - 1], ref[j - 1]});
      --i, --j;
    } else if (i > 0 && cur == at(i - 1, j) + 1) {
      script.push_back({EditKind::kDelete, src[i - 1], 0});
      --i;
    } else {
      script.push_back({EditKind::kInsert, 0, ref[j - 1]});
      --j;
    }
  }
  std::reverse(script.begin(), script.end());
  return script;
}

EditScript AlignPair(std::string_view src, std::string_view ref) {
  return AlignPair(ToCodePoints(src), ToCodePoints(ref));
}

size_t ScriptCost(const EditScript& script) {
  return static_cast<size_t>(std::count_if(script.begin(), script.end(), [](const EditOp& op) {
    return op.kind != EditKind::kNoEdit;
  }));
}

std::u32string ApplyScript(std::u32string_view src, const EditScript& script) {
  std::u32string out;
  size_t i = 0;
  for (const EditOp& op : script) {
    switch (op.kind) {
      case EditKind::kNoEdit:
      case EditKind::kSubstitute:
      case EditKind::kDelete:
        if (i >= src.size() || src[i] != op.src) {
          throw InvalidArgument("edit script does not match source at position " +
                                std::to_string(i));
        }
        ++i;
        if (op.kind != EditKind::kDelete) out.push_back(op.ref);
        break;
      case EditKind::kInsert:
        out.push_back(op.ref);
        break;
    }
  }
  if (i != src.size()) throw InvalidArgument("edit script leaves source unconsumed");
  return out;
}

}  // namespace ocrpipe
