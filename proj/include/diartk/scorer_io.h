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

#ifndef DIARTK_SCORER_IO_H_
#define DIARTK_SCORER_IO_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "diartk/tsvad.h"

namespace diartk {

// File contract for out-of-process TSVAD scorers.
//
// Profiles file:
//   PROFILES <recording_id> <dim> <count>
//   <label> <v1> ... <vdim>            (count lines, capacity order)
//
// Chunk request (chunk_<onset_ms>.req):
//   CHUNK <recording_id> <onset_s> <duration_s> <resolution_s> <first_frame> <n_frames>
//   PROFILES <path>
//   EMBEDDINGS <path>                  (text embedding file, chunk segments)
//   OUTPUT <path>
//
// Score block, the FRAMESCORES format with a speaker count:
//   FRAMESCORES <recording_id> <resolution_s> <n_frames> <n_speakers>
//   <s_1> ... <s_n_speakers>           (n_frames lines, profile order)

void WriteProfiles(const SpeakerProfileSet& profiles, std::ostream& out);
SpeakerProfileSet ParseProfiles(std::istream& in);

void WriteScoreBlock(const ScoreBlock& block, const std::string& recording_id,
                     double resolution, std::ostream& out);
// `chunk` and `resolution` fix the expected frame range.
ScoreBlock ParseScoreBlock(std::istream& in, const Interval& chunk,
                           double resolution, std::size_t n_speakers);

std::string ChunkStem(const Interval& chunk);

struct ChunkRequest {
  std::string request_path;
  std::string output_path;
};

// Writes profiles.txt once plus one request and embedding file per chunk.
std::vector<ChunkRequest> EmitChunkRequests(
    const std::string& dir, const std::vector<Interval>& chunks,
    const EmbeddingSequence& seq, const SpeakerProfileSet& profiles,
    double resolution);

// Runs `command <request_path>` per chunk and reads the block it writes to
// the request's OUTPUT path.
class CommandScorer : public FrameScorer {
 public:
  CommandScorer(std::string command, std::string work_dir);
  ScoreBlock Score(const Interval& chunk, const EmbeddingSequence& chunk_seq,
                   const SpeakerProfileSet& profiles,
                   double resolution) const override;

 private:
  std::string command_;
  std::string work_dir_;
};

// Reads precomputed blocks named <dir>/chunk_<onset_ms>.scores.
class DirectoryScorer : public FrameScorer {
 public:
  explicit DirectoryScorer(std::string dir);
  ScoreBlock Score(const Interval& chunk, const EmbeddingSequence& chunk_seq,
                   const SpeakerProfileSet& profiles,
                   double resolution) const override;

 private:
  std::string dir_;
};

}  // namespace diartk

#endif  // DIARTK_SCORER_IO_H_
