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

#ifndef DIARTK_TSVAD_H_
#define DIARTK_TSVAD_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "diartk/embeddings.h"
#include "diartk/timeline.h"

namespace diartk {

inline constexpr int kSpeakerCapacity = 30;
inline constexpr double kOutputResolution = 0.08;  // seconds

struct SpeakerProfile {
  std::string label;
  Eigen::VectorXd vector;  // unit length
};

struct SpeakerProfileSet {
  std::string recording_id;
  std::vector<SpeakerProfile> profiles;  // longest-speaking speaker first
  int capacity = kSpeakerCapacity;
  std::vector<std::string> dropped;      // over capacity or without vectors

  std::size_t size() const { return profiles.size(); }
  std::vector<std::string> Labels() const;
};

// Profile of a speaker = unit mean of the segment vectors whose midpoint
// falls in that speaker's non-overlapped speech.  Speakers are ranked by
// total speech; only the first `capacity` are kept.
SpeakerProfileSet ExtractProfiles(const Annotation& diar,
                                  const EmbeddingSequence& seq,
                                  int capacity = kSpeakerCapacity);

// Chunks [k * stride, k * stride + chunk_len) clipped to `total`, stopping
// after the first chunk that reaches `total`.  A recording no longer than
// one chunk gives the single chunk [0, total).
std::vector<Interval> ChunkSpans(Ticks total, Ticks chunk_len, Ticks stride);
std::vector<Interval> ChunkSpans(double total, double chunk_len, double stride);

// Output frames are [f * resolution, (f + 1) * resolution).  A chunk covers
// every frame it overlaps.
struct FrameRange {
  long first = 0;
  long end = 0;
  long size() const { return end - first; }
};
FrameRange FramesOf(const Interval& chunk, double resolution);

// Scores of one chunk: speakers x frames, columns starting at frames.first.
struct ScoreBlock {
  Interval chunk;
  FrameRange frames;
  Eigen::MatrixXd scores;
};

struct ActivityMatrix {
  std::string recording_id;
  double resolution = kOutputResolution;
  std::vector<std::string> labels;
  Eigen::MatrixXd scores;  // speakers x frames, in [0, 1]
  Eigen::MatrixXd weight;  // number of chunks contributing to each cell

  long num_frames() const { return static_cast<long>(scores.cols()); }
};

// Per-frame mean over all chunks covering the frame.  Uncovered frames get
// score 0 and weight 0.
ActivityMatrix Stitch(const std::vector<ScoreBlock>& blocks,
                      const std::vector<std::string>& labels,
                      double resolution, const std::string& recording_id);

// Binarizes each speaker row (hysteresis with onset = offset = threshold).
Annotation ActivitiesToAnnotation(const ActivityMatrix& act, double threshold,
                                  double min_on, double min_off);

// Produces per-speaker frame scores for one chunk.
class FrameScorer {
 public:
  virtual ~FrameScorer() = default;
  // `chunk_seq` holds the embeddings overlapping `chunk`.  The result must
  // have profiles.size() rows and FramesOf(chunk, resolution).size()
  // columns with values in [0, 1].
  virtual ScoreBlock Score(const Interval& chunk,
                           const EmbeddingSequence& chunk_seq,
                           const SpeakerProfileSet& profiles,
                           double resolution) const = 0;
};

// Training-free stand-in for a neural scorer.  A frame takes the embedding
// that overlaps it the most (nearest center on ties) and scores each
// speaker as (1 + cos(profile, embedding)) / 2; frames no embedding
// touches score 0.
class CosineScorer : public FrameScorer {
 public:
  ScoreBlock Score(const Interval& chunk, const EmbeddingSequence& chunk_seq,
                   const SpeakerProfileSet& profiles,
                   double resolution) const override;
};

struct TsvadConfig {
  double chunk_len = 16.0;  // seconds
  double stride = 1.0;      // seconds
  double resolution = kOutputResolution;
  int capacity = kSpeakerCapacity;
  double threshold = 0.5;
  double min_on = 0.16;
  double min_off = 0.16;

  void Validate() const;
};

// Profiles from `init_diar`, chunked scoring, stitching and binarization,
// restricted to `speech`.
Annotation DiarizeTsvad(const Timeline& speech, const EmbeddingSequence& seq,
                        const Annotation& init_diar, const FrameScorer& scorer,
                        const TsvadConfig& cfg);

}  // namespace diartk

#endif  // DIARTK_TSVAD_H_
