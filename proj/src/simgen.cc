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

#include "diartk/simgen.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>

#include "diartk/errors.h"

namespace diartk {

namespace {

constexpr int kCentroidAttempts = 10000;

Eigen::VectorXd RandomUnit(SimRandom& rng, int dim) {
  Eigen::VectorXd v(dim);
  for (int d = 0; d < dim; ++d) v(d) = rng.Normal();
  return UnitVector(v);
}

FrameScoreStream Indicator(const Timeline& on, const SimConfig& cfg,
                           const std::string& rec, SimRandom& rng) {
  FrameScoreStream s{rec, cfg.frame_shift, {}};
  const auto n = static_cast<std::size_t>(std::ceil(cfg.duration / cfg.frame_shift - 1e-9));
  s.scores.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = on.Contains(s.FrameStart(i)) ? 1.0 : 0.0;
    if (cfg.score_noise > 0.0) {
      v = std::clamp(v + cfg.score_noise * rng.Normal(), 0.0, 1.0);
    }
    s.scores[i] = v;
  }
  return s;
}

}  // namespace

double SimRandom::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SimRandom::Uniform(double lo, double hi) {
  return lo + (hi - lo) * Uniform();
}

double SimRandom::Normal() {
  double u1 = Uniform();
  double u2 = Uniform();
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t SimRandom::Index(std::size_t n) {
  auto i = static_cast<std::size_t>(Uniform() * static_cast<double>(n));
  return std::min(i, n - 1);
}

void SimConfig::Validate() const {
  if (n_speakers < 1 || n_speakers > 30) {
    throw ConfigError("n_speakers must be in 1..30");
  }
  if (!(duration > 0.0)) throw ConfigError("duration must be positive");
  for (auto [lo, hi] : {turn_len, pause_len, overlap_len}) {
    if (!(lo >= 0.0) || !(lo <= hi)) throw ConfigError("invalid range");
  }
  if (!(turn_len.first > 0.0)) throw ConfigError("turns must have positive length");
  if (!(overlap_prob >= 0.0 && overlap_prob <= 1.0)) {
    throw ConfigError("overlap_prob must be in [0, 1]");
  }
  if (embedding_dim <= 0) throw ConfigError("embedding_dim must be positive");
  if (within_noise < 0.0 || score_noise < 0.0) {
    throw ConfigError("noise scales must be non-negative");
  }
  if (!(frame_shift > 0.0)) throw ConfigError("frame_shift must be positive");
}

double ExpectedWithinCosine(double within_noise, int dim) {
  return 1.0 / (1.0 + within_noise * within_noise * dim);
}

double NoiseForWithinCosine(double cosine, int dim) {
  if (!(cosine > 0.0 && cosine <= 1.0) || dim <= 0) {
    throw ArgumentError("target cosine must be in (0, 1]");
  }
  return std::sqrt((1.0 / cosine - 1.0) / dim);
}

SimRecording Generate(const SimConfig& cfg, const std::string& recording_id) {
  cfg.Validate();
  SimRandom rng(cfg.seed);
  SimRecording rec;
  rec.recording_id = recording_id;

  for (int s = 0; s < cfg.n_speakers; ++s) {
    bool placed = false;
    for (int attempt = 0; attempt < kCentroidAttempts && !placed; ++attempt) {
      Eigen::VectorXd c = RandomUnit(rng, cfg.embedding_dim);
      placed = std::all_of(rec.centroids.begin(), rec.centroids.end(),
                           [&](const Eigen::VectorXd& o) {
                             return std::abs(o.dot(c)) < kMaxCentroidCosine;
                           });
      if (placed) rec.centroids.push_back(std::move(c));
    }
    if (!placed) {
      throw ConfigError("cannot draw " + std::to_string(cfg.n_speakers) +
                        " speaker centroids with |cos| < 0.3 in " +
                        std::to_string(cfg.embedding_dim) + " dimensions");
    }
  }

  // Times live on the frame grid so that scores, RTTM and embeddings agree.
  const Ticks grid = SecondsToTicks(cfg.frame_shift);
  auto snap = [&](double seconds) {
    return static_cast<Ticks>(std::llround(seconds * kTicksPerSecond / grid)) * grid;
  };
  const Ticks total = snap(cfg.duration);
  const Ticks min_turn = snap(cfg.min_turn);

  std::vector<Turn> turns;
  auto label = [](std::size_t s) {
    std::string l = std::to_string(s);
    return "S" + std::string(2 - std::min<std::size_t>(2, l.size()), '0') + l;
  };
  std::size_t speaker = rng.Index(static_cast<std::size_t>(cfg.n_speakers));
  Ticks start = snap(rng.Uniform(cfg.pause_len.first, cfg.pause_len.second));
  Ticks prev_end = 0;
  while (start + min_turn <= total) {
    Ticks end = start + std::max(grid, snap(rng.Uniform(cfg.turn_len.first,
                                                        cfg.turn_len.second)));
    end = std::min(std::max(end, prev_end + min_turn), total);
    turns.push_back({label(speaker), {start, end}});

    std::size_t next = speaker;
    if (cfg.n_speakers > 1) {
      next = rng.Index(static_cast<std::size_t>(cfg.n_speakers - 1));
      if (next >= speaker) ++next;
    }
    double coin = rng.Uniform();
    double ovl_draw = rng.Uniform(cfg.overlap_len.first, cfg.overlap_len.second);
    double pause_draw = rng.Uniform(cfg.pause_len.first, cfg.pause_len.second);
    Ticks next_start = end + snap(pause_draw);
    if (cfg.n_speakers > 1 && coin < cfg.overlap_prob) {
      Ticks ovl = std::min({snap(ovl_draw), (end - start) / 2 / grid * grid,
                            end - std::max(prev_end, start)});
      if (ovl > 0) next_start = end - ovl;
    }
    prev_end = end;
    speaker = next;
    start = next_start;
  }
  rec.ref = Annotation(recording_id, std::move(turns));
  rec.speech = Support(rec.ref);
  rec.osd = OverlapRegions(rec.ref);
  rec.vad_scores = Indicator(rec.speech, cfg, recording_id, rng);
  rec.osd_scores = Indicator(rec.osd, cfg, recording_id, rng);

  const std::vector<std::string> speakers = rec.ref.Speakers();
  std::map<std::string, Timeline> timelines = rec.ref.SpeakerTimelines();
  rec.seq = EmbeddingSequence{recording_id, cfg.embedding_dim, {}};
  for (const Interval& seg : UniformSegments(rec.speech)) {
    Eigen::VectorXd mix = Eigen::VectorXd::Zero(cfg.embedding_dim);
    for (const std::string& spk : speakers) {
      std::size_t idx = static_cast<std::size_t>(std::stoi(spk.substr(1)));
      mix += static_cast<double>(timelines[spk].OverlapWith(seg)) * rec.centroids[idx];
    }
    Eigen::VectorXd v = UnitVector(mix);
    if (cfg.within_noise > 0.0) {
      for (int d = 0; d < cfg.embedding_dim; ++d) v(d) += cfg.within_noise * rng.Normal();
      v = UnitVector(v);
    }
    rec.seq.entries.push_back({seg, std::move(v)});
  }
  return rec;
}

void WriteRecording(const SimRecording& rec, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path d(dir);
  WriteRttmFile({rec.ref}, (d / "ref.rttm").string());
  WriteTimelineFile(rec.speech, (d / "speech.txt").string());
  WriteTimelineFile(rec.osd, (d / "osd.txt").string());
  WriteFrameScoresFile(rec.vad_scores, (d / "vad.scores").string());
  WriteFrameScoresFile(rec.osd_scores, (d / "osd.scores").string());
  WriteEmbeddingsFile(rec.seq, (d / "embeddings.bin").string());
}

}  // namespace diartk
