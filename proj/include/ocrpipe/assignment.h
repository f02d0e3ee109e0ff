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

#ifndef OCRPIPE_ASSIGNMENT_H_
#define OCRPIPE_ASSIGNMENT_H_

#include <vector>

namespace ocrpipe {

// Hungarian method, O(n^3). `cost` is rows x cols (rectangular allowed, all
// rows the same length). Returns, for every row, the column assigned to it
// in a minimum-cost assignment, or -1 when there are more rows than columns
// and the row is left over.
std::vector<int> SolveAssignment(const std::vector<std::vector<double>>& cost);

}  // namespace ocrpipe

#endif  // OCRPIPE_ASSIGNMENT_H_
