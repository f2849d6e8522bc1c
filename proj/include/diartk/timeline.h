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

#ifndef DIARTK_TIMELINE_H_
#define DIARTK_TIMELINE_H_

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace diartk {

// All times are integer ticks of 0.1 ms.  Seconds only appear at I/O
// boundaries.
using Ticks = std::int64_t;
inline constexpr Ticks kTicksPerSecond = 10000;

Ticks SecondsToTicks(double seconds);
inline double TicksToSeconds(Ticks t) {
  return static_cast<double>(t) / kTicksPerSecond;
}

// Half-open interval [begin, end) in ticks.
struct Interval {
  Ticks begin = 0;
  Ticks end = 0;

  Ticks duration() const { return end - begin; }
  bool empty() const { return end <= begin; }
  Ticks midpoint() const { return begin + (end - begin) / 2; }
  bool Contains(Ticks t) const { return t >= begin && t < end; }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

inline Ticks OverlapDuration(const Interval& a, const Interval& b) {
  Ticks lo = a.begin > b.begin ? a.begin : b.begin;
  Ticks hi = a.end < b.end ? a.end : b.end;
  return hi > lo ? hi - lo : 0;
}

// Sorted, pairwise disjoint, non-touching set of intervals.
class Timeline {
 public:
  Timeline() = default;
  // Accepts intervals in any order; merges overlapping and touching ones and
  // drops empty ones.
  explicit Timeline(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }
  Ticks total() const;
  // Start of the first interval / end of the last; {0, 0} when empty.
  Interval Extent() const;
  bool Contains(Ticks t) const;

  Timeline Union(const Timeline& other) const;
  Timeline Intersect(const Timeline& other) const;
  Timeline Subtract(const Timeline& other) const;
  Timeline Clip(const Interval& window) const;
  // Duration of the intersection, without materializing it.
  Ticks OverlapWith(const Interval& span) const;

  friend bool operator==(const Timeline&, const Timeline&) = default;

 private:
  std::vector<Interval> intervals_;
};

struct Turn {
  std::string speaker;
  Interval span;

  double onset() const { return TicksToSeconds(span.begin); }
  double duration() const { return TicksToSeconds(span.duration()); }

  friend bool operator==(const Turn&, const Turn&) = default;
};

// Speaker turns of one recording.  Always normalized: same-speaker turns
// that touch or overlap are merged, turns are sorted by (onset, speaker).
class Annotation {
 public:
  Annotation() = default;
  explicit Annotation(std::string recording_id, std::vector<Turn> turns = {});

  const std::string& recording_id() const { return recording_id_; }
  const std::vector<Turn>& turns() const { return turns_; }
  bool empty() const { return turns_.empty(); }

  // Sorted, unique speaker labels.
  std::vector<std::string> Speakers() const;
  Timeline SpeakerTimeline(const std::string& speaker) const;
  std::map<std::string, Timeline> SpeakerTimelines() const;

  // Renames speakers; labels missing from the map are kept.  Distinct
  // speakers mapped to the same label are merged.
  Annotation Relabel(const std::map<std::string, std::string>& mapping) const;

  // Restricts every turn to the given timeline.
  Annotation Restrict(const Timeline& region) const;

  friend bool operator==(const Annotation&, const Annotation&) = default;

 private:
  std::string recording_id_;
  std::vector<Turn> turns_;
};

// Builds an annotation from one timeline per speaker.
Annotation AnnotationFromTimelines(
    const std::string& recording_id,
    const std::map<std::string, Timeline>& speakers);

// Union of all turns.
Timeline Support(const Annotation& annotation);

// Regions where at least two speakers are active.
Timeline OverlapRegions(const Annotation& annotation);

bool IsValidLabel(const std::string& label);

// RTTM I/O.  One annotation per recording id, in order of first appearance.
std::vector<Annotation> ParseRttm(std::istream& in);
std::vector<Annotation> ReadRttmFile(const std::string& path);
void WriteRttm(const std::vector<Annotation>& annotations, std::ostream& out);
std::string WriteRttm(const std::vector<Annotation>& annotations);
void WriteRttmFile(const std::vector<Annotation>& annotations,
                   const std::string& path);

// Plain-text timeline files: one "onset offset" pair of seconds per line.
Timeline ParseTimeline(std::istream& in);
Timeline ReadTimelineFile(const std::string& path);
void WriteTimeline(const Timeline& timeline, std::ostream& out);
void WriteTimelineFile(const Timeline& timeline, const std::string& path);

// Fixed 3-decimal rendering of ticks ("12.345"), rounding half away from
// zero at the millisecond.
std::string FormatSeconds(Ticks t);

}  // namespace diartk

#endif  // DIARTK_TIMELINE_H_
