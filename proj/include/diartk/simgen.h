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

#ifndef DIARTK_SIMGEN_H_
#define DIARTK_SIMGEN_H_

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "diartk/embeddings.h"
#include "diartk/frame_scores.h"
#include "diartk/timeline.h"

namespace diartk {

// Random source "simgen-rng-v1": std::mt19937_64 (whose output sequence is
// fixed by the C++ standard) seeded with the config seed.  Uniforms take the
// top 53 bits of one draw; normals use Box-Muller on two uniforms, discarding
// the sine branch.  Any port that follows these rules reproduces the same
// corpus.
class SimRandom {
 public:
  explicit SimRandom(std::uint64_t seed) : engine_(seed) {}

  double Uniform();                       // [0, 1)
  double Uniform(double lo, double hi);   // [lo, hi)
  double Normal();
  std::size_t Index(std::size_t n);       // [0, n)

 private:
  std::mt19937_64 engine_;
};

struct SimConfig {
  std::uint64_t seed = 0;
  int n_speakers = 3;
  double duration = 120.0;
  std::pair<double, double> turn_len{2.0, 8.0};
  std::pair<double, double> pause_len{0.2, 1.0};
  double overlap_prob = 0.1;
  std::pair<double, double> overlap_len{0.5, 2.0};
  int embedding_dim = 64;
  double within_noise = 0.04;
  double score_noise = 0.0;
  double frame_shift = kDefaultFrameShift;
  // Turns that would end within this many seconds of the recording end are
  // not started.
  double min_turn = 0.5;

  void Validate() const;
};

// Largest pairwise |cos| accepted between speaker centroids.
inline constexpr double kMaxCentroidCosine = 0.3;

struct SimRecording {
  std::string recording_id;
  Annotation ref;
  Timeline speech;
  Timeline osd;
  FrameScoreStream vad_scores;
  FrameScoreStream osd_scores;
  EmbeddingSequence seq;
  std::vector<Eigen::VectorXd> centroids;
};

// Deterministic synthetic conversation.  Segment embeddings come from the
// uniform 1.28 s / 0.32 s segmentation of the speech: the duration-weighted
// mix of the active speakers' centroids plus isotropic gaussian noise of
// scale within_noise, normalized.
SimRecording Generate(const SimConfig& cfg, const std::string& recording_id);

// Expected cosine between two noisy copies of the same centroid, to first
// order: 1 / (1 + within_noise^2 * dim).
double ExpectedWithinCosine(double within_noise, int dim);
// Noise scale giving the requested expected within-speaker cosine.
double NoiseForWithinCosine(double cosine, int dim);

// Writes ref.rttm, speech.txt, osd.txt, vad.scores, osd.scores and
// embeddings.bin into `dir`.
void WriteRecording(const SimRecording& rec, const std::string& dir);

}  // namespace diartk

#endif  // DIARTK_SIMGEN_H_
