// Copyright (c) 2026 diartk authors
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

#ifndef DIARTK_ASSIGNMENT_H_
#define DIARTK_ASSIGNMENT_H_

#include <cstdint>
#include <vector>

namespace diartk {

// Rows x cols matrix of non-negative gains (row-major, ragged rows are not
// allowed).
using GainMatrix = std::vector<std::vector<std::int64_t>>;

// Maximum-total-gain one-to-one assignment.  Returns, per row, the matched
// column or -1.  Instances with at most kBruteForceLimit rows and columns are
// solved by enumerating permutations (lexicographically first optimum wins);
// larger ones by the Hungarian method.
inline constexpr int kBruteForceLimit = 8;
std::vector<int> MaxWeightAssignment(const GainMatrix& gain);

// Exposed for testing both solvers against each other.
std::vector<int> BruteForceAssignment(const GainMatrix& gain);
std::vector<int> HungarianAssignment(const GainMatrix& gain);

std::int64_t AssignmentGain(const GainMatrix& gain,
                            const std::vector<int>& assignment);

}  // namespace diartk

#endif  // DIARTK_ASSIGNMENT_H_
