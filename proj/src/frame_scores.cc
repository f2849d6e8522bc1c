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

#include "diartk/frame_scores.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "glog/logging.h"

#include "diartk/errors.h"
#include "diartk/text_util.h"

namespace diartk {

namespace {

constexpr double kShiftTolerance = 1e-9;

struct FrameRegion {
  std::size_t begin;
  std::size_t end;
};

}  // namespace

void FrameScoreStream::Validate() const {
  if (!(frame_shift > 0.0)) {
    throw ArgumentError("frame shift must be positive");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!(scores[i] >= 0.0 && scores[i] <= 1.0)) {
      throw ArgumentError("score " + std::to_string(scores[i]) +
                          " at frame " + std::to_string(i) +
                          " outside [0, 1]");
    }
  }
}

Ticks FrameScoreStream::FrameStart(std::size_t frame) const {
  return SecondsToTicks(static_cast<double>(frame) * frame_shift);
}

FrameScoreStream FuseStreams(const std::vector<FrameScoreStream>& streams,
                             const std::optional<std::vector<double>>& weights) {
  if (streams.empty()) throw ArgumentError("no streams to fuse");
  const FrameScoreStream& first = streams.front();
  std::size_t length = first.scores.size();
  for (const FrameScoreStream& s : streams) {
    if (std::abs(s.frame_shift - first.frame_shift) > kShiftTolerance) {
      throw ConfigError("frame shift mismatch while fusing " +
                        first.recording_id);
    }
    if (s.recording_id != first.recording_id) {
      throw ConfigError("cannot fuse streams of different recordings: " +
                        first.recording_id + " vs " + s.recording_id);
    }
    length = std::min(length, s.scores.size());
  }
  std::vector<double> w(streams.size(), 1.0);
  if (weights) {
    if (weights->size() != streams.size()) {
      throw ArgumentError("got " + std::to_string(weights->size()) +
                          " weights for " + std::to_string(streams.size()) +
                          " streams");
    }
    w = *weights;
    for (double x : w) {
      if (!(x > 0.0)) throw ArgumentError("fusion weights must be positive");
    }
  }

  for (const FrameScoreStream& s : streams) {
    if (s.scores.size() != length) {
      LOG(WARNING) << "truncating " << s.recording_id << " stream from "
                   << s.scores.size() << " to " << length << " frames";
    }
  }

  FrameScoreStream out{first.recording_id, first.frame_shift, {}};
  out.scores.resize(length);
  for (std::size_t t = 0; t < length; ++t) {
    // Running weighted mean; equal inputs come back unchanged.
    double mean = 0.0, seen = 0.0;
    for (std::size_t k = 0; k < streams.size(); ++k) {
      seen += w[k];
      mean += (w[k] / seen) * (streams[k].scores[t] - mean);
    }
    out.scores[t] = std::clamp(mean, 0.0, 1.0);
  }
  return out;
}

Timeline Binarize(const FrameScoreStream& stream, const BinarizeOptions& opts) {
  if (opts.onset < opts.offset) {
    throw ArgumentError("onset threshold must not be below offset threshold");
  }
  if (opts.min_on < 0.0 || opts.min_off < 0.0) {
    throw ArgumentError("minimum durations must be non-negative");
  }
  std::vector<FrameRegion> regions;
  bool active = false;
  std::size_t start = 0;
  const std::size_t n = stream.scores.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = stream.scores[i];
    if (!active && s >= opts.onset) {
      active = true;
      start = i;
    } else if (active && s < opts.offset) {
      active = false;
      regions.push_back({start, i});
    }
  }
  if (active) regions.push_back({start, n});

  const Ticks min_off = SecondsToTicks(opts.min_off);
  const Ticks min_on = SecondsToTicks(opts.min_on);

  std::vector<FrameRegion> filled;
  for (const FrameRegion& r : regions) {
    if (!filled.empty()) {
      Ticks gap = stream.FrameStart(r.begin) - stream.FrameStart(filled.back().end);
      if (gap < min_off) {
        filled.back().end = r.end;
        continue;
      }
    }
    filled.push_back(r);
  }

  std::vector<Interval> out;
  for (const FrameRegion& r : filled) {
    Interval iv{stream.FrameStart(r.begin), stream.FrameStart(r.end)};
    if (iv.duration() >= min_on) out.push_back(iv);
  }
  return Timeline(std::move(out));
}

DetectionErrorReport DetectionErrors(const Timeline& hyp, const Timeline& ref,
                                     const Timeline& scope) {
  const Ticks scope_total = scope.total();
  if (scope_total == 0) throw ArgumentError("empty scoring scope");
  Timeline h = hyp.Intersect(scope);
  Timeline r = ref.Intersect(scope);
  const Ticks fa = h.Subtract(r).total();
  const Ticks miss = r.Subtract(h).total();
  DetectionErrorReport report;
  report.false_alarm_rate = static_cast<double>(fa) / scope_total;
  report.miss_rate = static_cast<double>(miss) / scope_total;
  report.total_rate = static_cast<double>(fa + miss) / scope_total;
  report.reference_duration = TicksToSeconds(r.total());
  report.scope_duration = TicksToSeconds(scope_total);
  return report;
}

FrameScoreStream ParseFrameScores(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  FrameScoreStream stream;
  long long expected = -1;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> fields = SplitWhitespace(line);
    if (fields.empty()) continue;
    if (expected < 0) {
      if (fields.size() != 4 || fields[0] != "FRAMESCORES" ||
          !ParseDouble(fields[2], &stream.frame_shift) ||
          !ParseInt(fields[3], &expected) || expected < 0) {
        throw ParseError(
            "expected 'FRAMESCORES <recording_id> <frame_shift> <n_frames>'",
            line_no);
      }
      stream.recording_id = fields[1];
      stream.scores.reserve(static_cast<std::size_t>(expected));
      continue;
    }
    double value = 0.0;
    if (fields.size() != 1 || !ParseDouble(fields[0], &value)) {
      throw ParseError("expected one score per line", line_no);
    }
    if (value < 0.0 || value > 1.0) {
      throw ParseError("score outside [0, 1]", line_no);
    }
    stream.scores.push_back(value);
  }
  if (expected < 0) throw ParseError("missing FRAMESCORES header");
  if (static_cast<long long>(stream.scores.size()) != expected) {
    throw ParseError("header announces " + std::to_string(expected) +
                     " frames, found " + std::to_string(stream.scores.size()));
  }
  if (!(stream.frame_shift > 0.0)) throw ParseError("frame shift must be > 0");
  return stream;
}

FrameScoreStream ReadFrameScoresFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open score file " + path);
  try {
    return ParseFrameScores(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void WriteFrameScores(const FrameScoreStream& stream, std::ostream& out) {
  out << "FRAMESCORES " << stream.recording_id << " "
      << FormatDouble(stream.frame_shift) << " " << stream.scores.size()
      << "\n";
  for (double s : stream.scores) out << FormatDouble(s) << "\n";
}

void WriteFrameScoresFile(const FrameScoreStream& stream,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  WriteFrameScores(stream, out);
}

}  // namespace diartk
