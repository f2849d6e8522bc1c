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

#include "diartk/timeline.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "diartk/errors.h"
#include "diartk/text_util.h"

namespace diartk {

Ticks SecondsToTicks(double seconds) {
  return static_cast<Ticks>(std::llround(seconds * kTicksPerSecond));
}

// ---------------------------------------------------------------- Timeline

Timeline::Timeline(std::vector<Interval> intervals) {
  std::erase_if(intervals, [](const Interval& iv) { return iv.empty(); });
  std::sort(intervals.begin(), intervals.end());
  for (const Interval& iv : intervals) {
    if (!intervals_.empty() && iv.begin <= intervals_.back().end) {
      intervals_.back().end = std::max(intervals_.back().end, iv.end);
    } else {
      intervals_.push_back(iv);
    }
  }
}

Ticks Timeline::total() const {
  Ticks sum = 0;
  for (const Interval& iv : intervals_) sum += iv.duration();
  return sum;
}

Interval Timeline::Extent() const {
  if (intervals_.empty()) return {};
  return {intervals_.front().begin, intervals_.back().end};
}

bool Timeline::Contains(Ticks t) const {
  auto it = std::upper_bound(
      intervals_.begin(), intervals_.end(), t,
      [](Ticks value, const Interval& iv) { return value < iv.begin; });
  if (it == intervals_.begin()) return false;
  return std::prev(it)->Contains(t);
}

Timeline Timeline::Union(const Timeline& other) const {
  std::vector<Interval> all = intervals_;
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return Timeline(std::move(all));
}

Timeline Timeline::Intersect(const Timeline& other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  const auto& a = intervals_;
  const auto& b = other.intervals_;
  while (i < a.size() && j < b.size()) {
    Ticks lo = std::max(a[i].begin, b[j].begin);
    Ticks hi = std::min(a[i].end, b[j].end);
    if (lo < hi) out.push_back({lo, hi});
    if (a[i].end < b[j].end) {
      ++i;
    } else {
      ++j;
    }
  }
  return Timeline(std::move(out));
}

Timeline Timeline::Subtract(const Timeline& other) const {
  std::vector<Interval> out;
  std::size_t j = 0;
  const auto& b = other.intervals_;
  for (const Interval& iv : intervals_) {
    Ticks cursor = iv.begin;
    while (j < b.size() && b[j].end <= cursor) ++j;
    std::size_t k = j;
    while (k < b.size() && b[k].begin < iv.end) {
      if (b[k].begin > cursor) out.push_back({cursor, b[k].begin});
      cursor = std::max(cursor, b[k].end);
      ++k;
    }
    if (cursor < iv.end) out.push_back({cursor, iv.end});
  }
  return Timeline(std::move(out));
}

Timeline Timeline::Clip(const Interval& window) const {
  return Intersect(Timeline({window}));
}

Ticks Timeline::OverlapWith(const Interval& span) const {
  Ticks sum = 0;
  auto it = std::lower_bound(
      intervals_.begin(), intervals_.end(), span.begin,
      [](const Interval& iv, Ticks value) { return iv.end <= value; });
  for (; it != intervals_.end() && it->begin < span.end; ++it) {
    sum += OverlapDuration(*it, span);
  }
  return sum;
}

// -------------------------------------------------------------- Annotation

bool IsValidLabel(const std::string& label) {
  if (label.empty()) return false;
  return std::none_of(label.begin(), label.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

Annotation::Annotation(std::string recording_id, std::vector<Turn> turns)
    : recording_id_(std::move(recording_id)) {
  std::map<std::string, std::vector<Interval>> by_speaker;
  for (Turn& turn : turns) {
    if (!IsValidLabel(turn.speaker)) {
      throw ArgumentError("invalid speaker label '" + turn.speaker + "'");
    }
    if (turn.span.begin < 0) {
      throw ArgumentError("negative turn onset for speaker " + turn.speaker);
    }
    by_speaker[turn.speaker].push_back(turn.span);
  }
  for (auto& [speaker, spans] : by_speaker) {
    const Timeline merged(std::move(spans));
    for (const Interval& iv : merged.intervals()) {
      turns_.push_back({speaker, iv});
    }
  }
  std::sort(turns_.begin(), turns_.end(), [](const Turn& a, const Turn& b) {
    if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
    return a.speaker < b.speaker;
  });
}

std::vector<std::string> Annotation::Speakers() const {
  std::vector<std::string> out;
  for (const Turn& t : turns_) out.push_back(t.speaker);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Timeline Annotation::SpeakerTimeline(const std::string& speaker) const {
  std::vector<Interval> spans;
  for (const Turn& t : turns_) {
    if (t.speaker == speaker) spans.push_back(t.span);
  }
  return Timeline(std::move(spans));
}

std::map<std::string, Timeline> Annotation::SpeakerTimelines() const {
  std::map<std::string, std::vector<Interval>> spans;
  for (const Turn& t : turns_) spans[t.speaker].push_back(t.span);
  std::map<std::string, Timeline> out;
  for (auto& [speaker, list] : spans) {
    out.emplace(speaker, Timeline(std::move(list)));
  }
  return out;
}

Annotation Annotation::Relabel(
    const std::map<std::string, std::string>& mapping) const {
  std::vector<Turn> turns = turns_;
  for (Turn& t : turns) {
    auto it = mapping.find(t.speaker);
    if (it != mapping.end()) t.speaker = it->second;
  }
  return Annotation(recording_id_, std::move(turns));
}

Annotation Annotation::Restrict(const Timeline& region) const {
  std::map<std::string, Timeline> speakers;
  for (auto& [speaker, tl] : SpeakerTimelines()) {
    speakers.emplace(speaker, tl.Intersect(region));
  }
  return AnnotationFromTimelines(recording_id_, speakers);
}

Annotation AnnotationFromTimelines(
    const std::string& recording_id,
    const std::map<std::string, Timeline>& speakers) {
  std::vector<Turn> turns;
  for (const auto& [speaker, tl] : speakers) {
    for (const Interval& iv : tl.intervals()) turns.push_back({speaker, iv});
  }
  return Annotation(recording_id, std::move(turns));
}

Timeline Support(const Annotation& annotation) {
  std::vector<Interval> spans;
  spans.reserve(annotation.turns().size());
  for (const Turn& t : annotation.turns()) spans.push_back(t.span);
  return Timeline(std::move(spans));
}

Timeline OverlapRegions(const Annotation& annotation) {
  std::vector<std::pair<Ticks, int>> events;
  for (const Turn& t : annotation.turns()) {
    events.emplace_back(t.span.begin, +1);
    events.emplace_back(t.span.end, -1);
  }
  // Ends sort before begins at equal times so touching turns do not count.
  std::sort(events.begin(), events.end());
  std::vector<Interval> out;
  int active = 0;
  Ticks open = 0;
  for (const auto& [time, delta] : events) {
    int before = active;
    active += delta;
    if (before < 2 && active >= 2) open = time;
    if (before >= 2 && active < 2) out.push_back({open, time});
  }
  return Timeline(std::move(out));
}

// -------------------------------------------------------------------- RTTM

namespace {

// Milliseconds, rounding half away from zero.
Ticks TicksToMillis(Ticks t) {
  Ticks q = t / 10, r = t % 10;
  if (r >= 5) ++q;
  if (r <= -5) --q;
  return q;
}

std::string FormatMillis(Ticks ms) {
  std::string sign = ms < 0 ? "-" : "";
  if (ms < 0) ms = -ms;
  std::string frac = std::to_string(ms % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return sign + std::to_string(ms / 1000) + "." + frac;
}

}  // namespace

std::string FormatSeconds(Ticks t) { return FormatMillis(TicksToMillis(t)); }

std::vector<Annotation> ParseRttm(std::istream& in) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<Turn>> turns;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> fields = SplitWhitespace(line);
    if (fields.empty() || fields[0].starts_with("#")) continue;
    if (fields.size() < 9) {
      throw ParseError("expected at least 9 fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    if (fields[0] != "SPEAKER") {
      throw ParseError("unsupported RTTM record type '" + fields[0] + "'",
                       line_no);
    }
    double onset = 0.0, duration = 0.0;
    if (!ParseDouble(fields[3], &onset) || !ParseDouble(fields[4], &duration)) {
      throw ParseError("non-numeric onset or duration", line_no);
    }
    if (!(duration > 0.0)) {
      throw ParseError("non-positive duration " + fields[4], line_no);
    }
    if (onset < 0.0) throw ParseError("negative onset " + fields[3], line_no);
    Ticks begin = SecondsToTicks(onset);
    Ticks end = SecondsToTicks(onset + duration);
    if (end <= begin) {
      throw ParseError("duration below time resolution", line_no);
    }
    const std::string& rec = fields[1];
    if (!turns.contains(rec)) order.push_back(rec);
    turns[rec].push_back({fields[7], {begin, end}});
  }
  std::vector<Annotation> out;
  for (const std::string& rec : order) {
    out.emplace_back(rec, std::move(turns[rec]));
  }
  return out;
}

std::vector<Annotation> ReadRttmFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open RTTM file " + path);
  try {
    return ParseRttm(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void WriteRttm(const std::vector<Annotation>& annotations, std::ostream& out) {
  for (const Annotation& ann : annotations) {
    for (const Turn& t : ann.turns()) {
      Ticks on = TicksToMillis(t.span.begin);
      Ticks dur = TicksToMillis(t.span.end) - on;
      // Turns shorter than the output precision cannot be represented.
      if (dur <= 0) continue;
      out << "SPEAKER " << ann.recording_id() << " 1 " << FormatMillis(on)
          << " " << FormatMillis(dur) << " <NA> <NA> " << t.speaker
          << " <NA> <NA>\n";
    }
  }
}

std::string WriteRttm(const std::vector<Annotation>& annotations) {
  std::ostringstream out;
  WriteRttm(annotations, out);
  return out.str();
}

void WriteRttmFile(const std::vector<Annotation>& annotations,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  WriteRttm(annotations, out);
}

Timeline ParseTimeline(std::istream& in) {
  std::vector<Interval> spans;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> fields = SplitWhitespace(line);
    if (fields.empty() || fields[0].starts_with("#")) continue;
    double on = 0, off = 0;
    if (fields.size() != 2 || !ParseDouble(fields[0], &on) ||
        !ParseDouble(fields[1], &off)) {
      throw ParseError("expected 'onset offset'", line_no);
    }
    if (on < 0 || off < on) throw ParseError("invalid interval", line_no);
    spans.push_back({SecondsToTicks(on), SecondsToTicks(off)});
  }
  return Timeline(std::move(spans));
}

Timeline ReadTimelineFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open timeline file " + path);
  return ParseTimeline(in);
}

void WriteTimeline(const Timeline& timeline, std::ostream& out) {
  for (const Interval& iv : timeline.intervals()) {
    out << FormatSeconds(iv.begin) << " " << FormatSeconds(iv.end) << "\n";
  }
}

void WriteTimelineFile(const Timeline& timeline, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  WriteTimeline(timeline, out);
}

}  // namespace diartk
