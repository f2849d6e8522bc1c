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

#include "diartk/tsvad.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "glog/logging.h"

#include "diartk/errors.h"
#include "diartk/frame_scores.h"

namespace diartk {

std::vector<std::string> SpeakerProfileSet::Labels() const {
  std::vector<std::string> out;
  for (const SpeakerProfile& p : profiles) out.push_back(p.label);
  return out;
}

SpeakerProfileSet ExtractProfiles(const Annotation& diar,
                                  const EmbeddingSequence& seq, int capacity) {
  if (capacity <= 0) throw ArgumentError("speaker capacity must be positive");
  SpeakerProfileSet out;
  out.recording_id = diar.recording_id();
  out.capacity = capacity;

  const std::map<std::string, Timeline> timelines = diar.SpeakerTimelines();
  struct Candidate {
    std::string label;
    Ticks speech;
    Eigen::VectorXd vector;
  };
  std::vector<Candidate> candidates;
  for (const auto& [label, own] : timelines) {
    std::vector<Interval> others;
    for (const auto& [other, tl] : timelines) {
      if (other == label) continue;
      others.insert(others.end(), tl.intervals().begin(), tl.intervals().end());
    }
    const Timeline exclusive = own.Subtract(Timeline(std::move(others)));
    std::vector<const Eigen::VectorXd*> members;
    for (const EmbeddingEntry& e : seq.entries) {
      if (exclusive.Contains(e.span.midpoint())) members.push_back(&e.vector);
    }
    if (members.empty()) {
      LOG(WARNING) << diar.recording_id() << ": speaker " << label
                   << " has no segment embeddings, dropping its profile";
      out.dropped.push_back(label);
      continue;
    }
    candidates.push_back({label, own.total(), MeanDirection(members)});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.speech > b.speech;
                   });
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (static_cast<int>(i) < capacity) {
      out.profiles.push_back({candidates[i].label, candidates[i].vector});
    } else {
      out.dropped.push_back(candidates[i].label);
    }
  }
  if (candidates.size() > static_cast<std::size_t>(capacity)) {
    LOG(WARNING) << diar.recording_id() << ": " << candidates.size()
                 << " speakers exceed capacity " << capacity;
  }
  return out;
}

std::vector<Interval> ChunkSpans(Ticks total, Ticks chunk_len, Ticks stride) {
  if (total <= 0 || chunk_len <= 0 || stride <= 0) {
    throw ArgumentError("chunking needs positive total, length and stride");
  }
  if (total <= chunk_len) return {{0, total}};
  std::vector<Interval> out;
  for (Ticks start = 0; start < total; start += stride) {
    Ticks end = std::min(start + chunk_len, total);
    out.push_back({start, end});
    if (end == total) break;
  }
  return out;
}

std::vector<Interval> ChunkSpans(double total, double chunk_len,
                                 double stride) {
  if (!(total > 0.0) || !(chunk_len > 0.0) || !(stride > 0.0)) {
    throw ArgumentError("chunking needs positive total, length and stride");
  }
  return ChunkSpans(SecondsToTicks(total), SecondsToTicks(chunk_len),
                    SecondsToTicks(stride));
}

FrameRange FramesOf(const Interval& chunk, double resolution) {
  const Ticks res = SecondsToTicks(resolution);
  if (res <= 0) throw ArgumentError("resolution must be positive");
  FrameRange r;
  r.first = static_cast<long>(chunk.begin / res);
  r.end = static_cast<long>((chunk.end + res - 1) / res);
  return r;
}

ActivityMatrix Stitch(const std::vector<ScoreBlock>& blocks,
                      const std::vector<std::string>& labels,
                      double resolution, const std::string& recording_id) {
  ActivityMatrix act;
  act.recording_id = recording_id;
  act.resolution = resolution;
  act.labels = labels;
  const auto n_spk = static_cast<Eigen::Index>(labels.size());
  long n_frames = 0;
  for (const ScoreBlock& b : blocks) {
    if (b.scores.rows() != n_spk) {
      throw InternalError("score block speaker count does not match profiles");
    }
    if (b.scores.cols() != b.frames.size()) {
      throw InternalError("score block width does not match its frame range");
    }
    n_frames = std::max(n_frames, b.frames.end);
  }
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n_spk, n_frames);
  act.weight = Eigen::MatrixXd::Zero(n_spk, n_frames);
  for (const ScoreBlock& b : blocks) {
    sum.middleCols(b.frames.first, b.frames.size()) += b.scores;
    act.weight.middleCols(b.frames.first, b.frames.size()).array() += 1.0;
  }
  act.scores = Eigen::MatrixXd::Zero(n_spk, n_frames);
  for (Eigen::Index s = 0; s < n_spk; ++s) {
    for (Eigen::Index f = 0; f < n_frames; ++f) {
      double w = act.weight(s, f);
      if (w > 0) act.scores(s, f) = std::clamp(sum(s, f) / w, 0.0, 1.0);
    }
  }
  return act;
}

Annotation ActivitiesToAnnotation(const ActivityMatrix& act, double threshold,
                                  double min_on, double min_off) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ArgumentError("activity threshold must lie in [0, 1]");
  }
  BinarizeOptions opts{threshold, threshold, min_on, min_off};
  std::map<std::string, Timeline> speakers;
  for (std::size_t s = 0; s < act.labels.size(); ++s) {
    FrameScoreStream row{act.recording_id, act.resolution, {}};
    row.scores.resize(static_cast<std::size_t>(act.num_frames()));
    for (long f = 0; f < act.num_frames(); ++f) {
      row.scores[static_cast<std::size_t>(f)] =
          act.scores(static_cast<Eigen::Index>(s), f);
    }
    speakers[act.labels[s]] = Binarize(row, opts);
  }
  return AnnotationFromTimelines(act.recording_id, speakers);
}

ScoreBlock CosineScorer::Score(const Interval& chunk,
                               const EmbeddingSequence& chunk_seq,
                               const SpeakerProfileSet& profiles,
                               double resolution) const {
  ScoreBlock block;
  block.chunk = chunk;
  block.frames = FramesOf(chunk, resolution);
  const Ticks res = SecondsToTicks(resolution);
  const auto n_spk = static_cast<Eigen::Index>(profiles.size());
  block.scores = Eigen::MatrixXd::Zero(n_spk, block.frames.size());
  for (long f = block.frames.first; f < block.frames.end; ++f) {
    const Interval frame{f * res, (f + 1) * res};
    const Ticks center = frame.midpoint();
    const EmbeddingEntry* best = nullptr;
    Ticks best_overlap = 0, best_dist = 0;
    for (const EmbeddingEntry& e : chunk_seq.entries) {
      Ticks ov = OverlapDuration(e.span, frame);
      if (ov == 0) continue;
      Ticks dist = std::abs(e.span.midpoint() - center);
      if (!best || ov > best_overlap || (ov == best_overlap && dist < best_dist)) {
        best = &e;
        best_overlap = ov;
        best_dist = dist;
      }
    }
    if (!best) continue;
    for (Eigen::Index s = 0; s < n_spk; ++s) {
      double cos = profiles.profiles[static_cast<std::size_t>(s)].vector.dot(best->vector);
      block.scores(s, f - block.frames.first) = std::clamp((1.0 + cos) / 2.0, 0.0, 1.0);
    }
  }
  return block;
}

void TsvadConfig::Validate() const {
  if (!(chunk_len > 0.0) || !(stride > 0.0) || !(resolution > 0.0)) {
    throw ConfigError("tsvad chunk_len, stride and resolution must be positive");
  }
  if (capacity <= 0) throw ConfigError("tsvad capacity must be positive");
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError("tsvad threshold must lie in [0, 1]");
  }
  if (min_on < 0.0 || min_off < 0.0) {
    throw ConfigError("tsvad min_on/min_off must be non-negative");
  }
}

Annotation DiarizeTsvad(const Timeline& speech, const EmbeddingSequence& seq,
                        const Annotation& init_diar, const FrameScorer& scorer,
                        const TsvadConfig& cfg) {
  cfg.Validate();
  const std::string& rec = init_diar.recording_id();
  if (speech.empty()) return Annotation(rec);
  SpeakerProfileSet profiles = ExtractProfiles(init_diar, seq, cfg.capacity);
  if (profiles.size() == 0) return Annotation(rec);

  std::vector<ScoreBlock> blocks;
  for (const Interval& chunk :
       ChunkSpans(speech.Extent().end, SecondsToTicks(cfg.chunk_len),
                  SecondsToTicks(cfg.stride))) {
    ScoreBlock block =
        scorer.Score(chunk, seq.Overlapping(chunk), profiles, cfg.resolution);
    if (block.scores.size() > 0 &&
        (block.scores.minCoeff() < 0.0 || block.scores.maxCoeff() > 1.0)) {
      throw InternalError("scorer returned values outside [0, 1]");
    }
    blocks.push_back(std::move(block));
  }
  ActivityMatrix act = Stitch(blocks, profiles.Labels(), cfg.resolution, rec);
  return ActivitiesToAnnotation(act, cfg.threshold, cfg.min_on, cfg.min_off)
      .Restrict(speech);
}

}  // namespace diartk
