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

#ifndef DIARTK_EMBEDDINGS_H_
#define DIARTK_EMBEDDINGS_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "diartk/timeline.h"

namespace diartk {

inline constexpr double kSegmentWindow = 1.28;  // seconds
inline constexpr double kSegmentShift = 0.32;   // seconds

struct EmbeddingEntry {
  Interval span;
  Eigen::VectorXd vector;
};

// Segment embeddings of one recording, sorted by onset.  Vectors are unit
// length once the sequence went through Normalize() (the file readers do
// this).
struct EmbeddingSequence {
  std::string recording_id;
  int dim = 0;
  std::vector<EmbeddingEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }

  // L2-normalizes every vector and sorts entries by onset.  Throws on a
  // zero vector or a dimension mismatch.
  void Normalize();
  // Entries whose span overlaps `window`, in order.
  EmbeddingSequence Overlapping(const Interval& window) const;
  EmbeddingSequence Overlapping(const Timeline& region) const;
};

// Symmetric cosine-similarity matrix with unit diagonal.
struct SimilarityMatrix {
  Eigen::MatrixXd values;

  std::size_t n() const { return static_cast<std::size_t>(values.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

// Unit vector in the direction of v.  Throws ArgumentError for zero vectors.
Eigen::VectorXd UnitVector(const Eigen::VectorXd& v);

// Normalized mean of the given vectors.
Eigen::VectorXd MeanDirection(const std::vector<const Eigen::VectorXd*>& vs);

// Sliding windows over each speech interval.  Intervals shorter than the
// window yield one segment covering them.  Longer intervals get windows at
// onset + k * shift while they fit, plus one window ending exactly at the
// interval end when the uncovered tail is at least one shift long.
std::vector<Interval> UniformSegments(const Timeline& speech,
                                      double window = kSegmentWindow,
                                      double shift = kSegmentShift);

SimilarityMatrix CosineMatrix(const EmbeddingSequence& seq);

// Greedy left-to-right merge of consecutive segments.  A segment joins the
// running group when its cosine to the group's normalized mean exceeds
// `segment_thr` and it starts less than `max_gap` seconds after the group
// ends.
EmbeddingSequence MergeConsecutive(const EmbeddingSequence& seq,
                                   const SimilarityMatrix& sim,
                                   double segment_thr,
                                   double max_gap = kSegmentShift);

// Binary file: "EMBD", u32 version (1), u32 dim, u32 count, then count
// records of (f64 onset, f64 duration, f32[dim]); all little-endian.
// Text file: one "onset duration v1 ... vdim" line per segment.  The reader
// sniffs the magic and normalizes the result.
EmbeddingSequence ReadEmbeddings(std::istream& in,
                                 const std::string& recording_id);
EmbeddingSequence ReadEmbeddingsFile(const std::string& path,
                                     const std::string& recording_id);
void WriteEmbeddingsBinary(const EmbeddingSequence& seq, std::ostream& out);
void WriteEmbeddingsText(const EmbeddingSequence& seq, std::ostream& out);
void WriteEmbeddingsFile(const EmbeddingSequence& seq, const std::string& path);

}  // namespace diartk

#endif  // DIARTK_EMBEDDINGS_H_
