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

#ifndef DIARTK_FRAME_SCORES_H_
#define DIARTK_FRAME_SCORES_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "diartk/timeline.h"

namespace diartk {

inline constexpr double kDefaultFrameShift = 0.01;

// Uniform-rate posteriors in [0, 1].  Frame i covers
// [i * frame_shift, (i + 1) * frame_shift).
struct FrameScoreStream {
  std::string recording_id;
  double frame_shift = kDefaultFrameShift;
  std::vector<double> scores;

  // Throws ArgumentError when a score leaves [0, 1] or the shift is not
  // positive.
  void Validate() const;
  Ticks FrameStart(std::size_t frame) const;
};

struct BinarizeOptions {
  double onset = 0.5;
  double offset = 0.5;
  double min_on = 0.10;   // seconds
  double min_off = 0.10;  // seconds
};

struct DetectionErrorReport {
  double false_alarm_rate = 0.0;
  double miss_rate = 0.0;
  double total_rate = 0.0;
  double reference_duration = 0.0;  // seconds of reference speech in scope
  double scope_duration = 0.0;      // seconds
};

// Per-frame weighted mean.  Weights default to uniform and are normalized.
// Streams of unequal length are truncated to the shortest with a warning.
FrameScoreStream FuseStreams(const std::vector<FrameScoreStream>& streams,
                             const std::optional<std::vector<double>>& weights =
                                 std::nullopt);

// Hysteresis thresholding: a region opens at the first frame with
// score >= onset and closes at the first frame with score < offset.  Gaps
// shorter than min_off are filled first, then regions shorter than min_on
// are dropped.
Timeline Binarize(const FrameScoreStream& stream, const BinarizeOptions& opts);

// Rates relative to the duration of `scope`.
DetectionErrorReport DetectionErrors(const Timeline& hyp, const Timeline& ref,
                                     const Timeline& scope);

// Score file:
//   FRAMESCORES <recording_id> <frame_shift_seconds> <n_frames>
//   <score>
//   ...
FrameScoreStream ParseFrameScores(std::istream& in);
FrameScoreStream ReadFrameScoresFile(const std::string& path);
void WriteFrameScores(const FrameScoreStream& stream, std::ostream& out);
void WriteFrameScoresFile(const FrameScoreStream& stream,
                          const std::string& path);

}  // namespace diartk

#endif  // DIARTK_FRAME_SCORES_H_
