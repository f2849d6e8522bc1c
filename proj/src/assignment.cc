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

#include "diartk/assignment.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "diartk/errors.h"

namespace diartk {

namespace {

struct Shape {
  std::size_t rows;
  std::size_t cols;
};

Shape CheckShape(const GainMatrix& gain) {
  Shape s{gain.size(), gain.empty() ? 0 : gain.front().size()};
  for (const auto& row : gain) {
    if (row.size() != s.cols) throw ArgumentError("ragged gain matrix");
  }
  return s;
}

// Square k x k copy padded with zeros.
std::vector<std::vector<std::int64_t>> PadSquare(const GainMatrix& gain,
                                                 Shape s, std::size_t k) {
  std::vector<std::vector<std::int64_t>> sq(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t r = 0; r < s.rows; ++r) {
    for (std::size_t c = 0; c < s.cols; ++c) sq[r][c] = gain[r][c];
  }
  return sq;
}

std::vector<int> TrimToShape(const std::vector<int>& square_assignment,
                             Shape s) {
  std::vector<int> out(s.rows, -1);
  for (std::size_t r = 0; r < s.rows; ++r) {
    int c = square_assignment[r];
    if (c >= 0 && static_cast<std::size_t>(c) < s.cols) out[r] = c;
  }
  return out;
}

}  // namespace

std::int64_t AssignmentGain(const GainMatrix& gain,
                            const std::vector<int>& assignment) {
  std::int64_t total = 0;
  for (std::size_t r = 0; r < assignment.size(); ++r) {
    if (assignment[r] >= 0) total += gain[r][static_cast<std::size_t>(assignment[r])];
  }
  return total;
}

std::vector<int> BruteForceAssignment(const GainMatrix& gain) {
  Shape s = CheckShape(gain);
  std::size_t k = std::max(s.rows, s.cols);
  if (k == 0) return {};
  auto sq = PadSquare(gain, s, k);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  std::int64_t best_total = std::numeric_limits<std::int64_t>::min();
  do {
    std::int64_t total = 0;
    for (std::size_t r = 0; r < k; ++r) total += sq[r][static_cast<std::size_t>(perm[r])];
    if (total > best_total) {
      best_total = total;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return TrimToShape(best, s);
}

// Kuhn-Munkres with potentials on costs = -gain, O(k^3).
std::vector<int> HungarianAssignment(const GainMatrix& gain) {
  Shape s = CheckShape(gain);
  const std::size_t k = std::max(s.rows, s.cols);
  if (k == 0) return {};
  auto sq = PadSquare(gain, s, k);
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // 1-based arrays; column 0 is a sentinel.
  std::vector<std::int64_t> u(k + 1, 0), v(k + 1, 0);
  std::vector<std::size_t> p(k + 1, 0), way(k + 1, 0);
  for (std::size_t i = 1; i <= k; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(k + 1, kInf);
    std::vector<bool> used(k + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = p[j0], j1 = 0;
      std::int64_t delta = kInf;
      for (std::size_t j = 1; j <= k; ++j) {
        if (used[j]) continue;
        std::int64_t cur = -sq[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(k, -1);
  for (std::size_t j = 1; j <= k; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  }
  return TrimToShape(row_to_col, s);
}

std::vector<int> MaxWeightAssignment(const GainMatrix& gain) {
  Shape s = CheckShape(gain);
  if (std::max(s.rows, s.cols) <= static_cast<std::size_t>(kBruteForceLimit)) {
    return BruteForceAssignment(gain);
  }
  return HungarianAssignment(gain);
}

}  // namespace diartk
