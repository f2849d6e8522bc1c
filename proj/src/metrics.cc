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

#include "diartk/metrics.h"

#include <algorithm>
#include <fstream>
#include <map>

#include "diartk/assignment.h"
#include "diartk/errors.h"
#include "diartk/text_util.h"

namespace diartk {

namespace {

double Rate(Ticks part, Ticks total) {
  if (total == 0) throw UndefinedRateError("no reference speech to score");
  return static_cast<double>(part) / static_cast<double>(total);
}

struct Event {
  Ticks time;
  bool is_ref;
  int speaker;
  bool start;
};

int IndexOf(const std::vector<std::string>& sorted, const std::string& label) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), label);
  return static_cast<int>(it - sorted.begin());
}

struct MappingResult {
  std::vector<int> ref_to_hyp;
  std::vector<ScoringRegion> regions;
};

MappingResult SolveMapping(const Annotation& ref, const Annotation& hyp,
                           const ScoringOptions& opts) {
  MappingResult result;
  result.regions = CutRegions(ref, hyp, ScoredRegion(ref, hyp, opts));
  const std::size_t n_ref = ref.Speakers().size();
  const std::size_t n_hyp = hyp.Speakers().size();
  GainMatrix overlap(n_ref, std::vector<std::int64_t>(n_hyp, 0));
  for (const ScoringRegion& r : result.regions) {
    for (int a : r.ref) {
      for (int b : r.hyp) overlap[a][b] += r.span.duration();
    }
  }
  result.ref_to_hyp = MaxWeightAssignment(overlap);
  return result;
}

}  // namespace

double DERBreakdown::der() const { return Rate(errors(), total_reference); }
double DERBreakdown::miss_rate() const { return Rate(miss, total_reference); }
double DERBreakdown::false_alarm_rate() const {
  return Rate(false_alarm, total_reference);
}
double DERBreakdown::confusion_rate() const {
  return Rate(confusion, total_reference);
}

DERBreakdown& DERBreakdown::operator+=(const DERBreakdown& other) {
  miss += other.miss;
  false_alarm += other.false_alarm;
  confusion += other.confusion;
  total_reference += other.total_reference;
  return *this;
}

Timeline ScoredRegion(const Annotation& ref, const Annotation& hyp,
                      const ScoringOptions& opts) {
  if (opts.collar < 0.0) throw ArgumentError("collar must be non-negative");
  Timeline scored;
  if (opts.uem) {
    scored = *opts.uem;
  } else {
    Interval a = Support(ref).Extent();
    Interval b = Support(hyp).Extent();
    if (ref.empty()) a = b;
    if (hyp.empty()) b = a;
    scored = Timeline({{std::min(a.begin, b.begin), std::max(a.end, b.end)}});
  }
  const Ticks collar = SecondsToTicks(opts.collar);
  if (collar > 0) {
    std::vector<Interval> zones;
    for (const Turn& t : ref.turns()) {
      zones.push_back({t.span.begin - collar, t.span.begin + collar});
      zones.push_back({t.span.end - collar, t.span.end + collar});
    }
    scored = scored.Subtract(Timeline(std::move(zones)));
  }
  if (!opts.score_overlaps) scored = scored.Subtract(OverlapRegions(ref));
  return scored;
}

std::vector<ScoringRegion> CutRegions(const Annotation& ref,
                                      const Annotation& hyp,
                                      const Timeline& scored) {
  const std::vector<std::string> ref_spk = ref.Speakers();
  const std::vector<std::string> hyp_spk = hyp.Speakers();
  std::vector<Event> events;
  for (const Turn& t : ref.turns()) {
    int s = IndexOf(ref_spk, t.speaker);
    events.push_back({t.span.begin, true, s, true});
    events.push_back({t.span.end, true, s, false});
  }
  for (const Turn& t : hyp.turns()) {
    int s = IndexOf(hyp_spk, t.speaker);
    events.push_back({t.span.begin, false, s, true});
    events.push_back({t.span.end, false, s, false});
  }
  std::vector<Ticks> cuts;
  for (const Event& e : events) cuts.push_back(e.time);
  for (const Interval& iv : scored.intervals()) {
    cuts.push_back(iv.begin);
    cuts.push_back(iv.end);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.time < b.time; });

  std::vector<bool> ref_on(ref_spk.size(), false), hyp_on(hyp_spk.size(), false);
  std::vector<ScoringRegion> out;
  std::size_t ev = 0;
  const auto& scored_iv = scored.intervals();
  std::size_t sc = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const Ticks lo = cuts[k], hi = cuts[k + 1];
    for (; ev < events.size() && events[ev].time <= lo; ++ev) {
      const Event& e = events[ev];
      (e.is_ref ? ref_on : hyp_on)[static_cast<std::size_t>(e.speaker)] = e.start;
    }
    while (sc < scored_iv.size() && scored_iv[sc].end <= lo) ++sc;
    if (sc == scored_iv.size()) break;
    if (scored_iv[sc].begin > lo) continue;
    ScoringRegion region{{lo, hi}, {}, {}};
    for (std::size_t i = 0; i < ref_on.size(); ++i) {
      if (ref_on[i]) region.ref.push_back(static_cast<int>(i));
    }
    for (std::size_t i = 0; i < hyp_on.size(); ++i) {
      if (hyp_on[i]) region.hyp.push_back(static_cast<int>(i));
    }
    if (!region.ref.empty() || !region.hyp.empty()) out.push_back(std::move(region));
  }
  return out;
}

DERBreakdown ComputeDer(const Annotation& ref, const Annotation& hyp,
                        const ScoringOptions& opts) {
  MappingResult m = SolveMapping(ref, hyp, opts);
  DERBreakdown out;
  for (const ScoringRegion& r : m.regions) {
    const Ticks d = r.span.duration();
    const auto n_ref = static_cast<Ticks>(r.ref.size());
    const auto n_hyp = static_cast<Ticks>(r.hyp.size());
    Ticks correct = 0;
    for (int a : r.ref) {
      int b = m.ref_to_hyp[static_cast<std::size_t>(a)];
      if (b >= 0 && std::binary_search(r.hyp.begin(), r.hyp.end(), b)) ++correct;
    }
    out.total_reference += d * n_ref;
    out.miss += d * std::max<Ticks>(0, n_ref - n_hyp);
    out.false_alarm += d * std::max<Ticks>(0, n_hyp - n_ref);
    out.confusion += d * (std::min(n_ref, n_hyp) - correct);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> OptimalSpeakerMapping(
    const Annotation& ref, const Annotation& hyp, const ScoringOptions& opts) {
  MappingResult m = SolveMapping(ref, hyp, opts);
  const auto ref_spk = ref.Speakers();
  const auto hyp_spk = hyp.Speakers();
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < ref_spk.size(); ++i) {
    int j = m.ref_to_hyp[i];
    if (j >= 0) out.emplace_back(ref_spk[i], hyp_spk[static_cast<std::size_t>(j)]);
  }
  return out;
}

DERBreakdown CorpusDer(
    const std::vector<std::pair<Annotation, Annotation>>& ref_hyp_pairs,
    const ScoringOptions& opts) {
  if (ref_hyp_pairs.empty()) throw ArgumentError("empty corpus");
  DERBreakdown total;
  for (const auto& [ref, hyp] : ref_hyp_pairs) {
    ScoringOptions per_file = opts;
    total += ComputeDer(ref, hyp, per_file);
  }
  return total;
}

std::vector<std::vector<double>> PairwiseDerMatrix(
    const std::vector<Annotation>& hyps) {
  ScoringOptions opts;
  opts.collar = 0.0;
  opts.score_overlaps = true;
  const std::size_t n = hyps.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      DERBreakdown d = ComputeDer(hyps[i], hyps[j], opts);
      if (d.total_reference == 0) {
        m[i][j] = hyps[j].empty() ? 0.0 : 1.0;
      } else {
        m[i][j] = d.der();
      }
    }
  }
  return m;
}

std::vector<std::pair<std::string, Timeline>> ReadUemFile(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open UEM file " + path);
  std::vector<std::string> order;
  std::map<std::string, std::vector<Interval>> spans;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = SplitWhitespace(line);
    if (fields.empty() || fields[0].starts_with("#")) continue;
    double on = 0, off = 0;
    if (fields.size() != 4 || !ParseDouble(fields[2], &on) ||
        !ParseDouble(fields[3], &off) || off < on || on < 0) {
      throw ParseError(path + ": expected 'recording channel onset offset'",
                       line_no);
    }
    if (!spans.contains(fields[0])) order.push_back(fields[0]);
    spans[fields[0]].push_back({SecondsToTicks(on), SecondsToTicks(off)});
  }
  std::vector<std::pair<std::string, Timeline>> out;
  for (const auto& rec : order) out.emplace_back(rec, Timeline(spans[rec]));
  return out;
}

Timeline UemFor(const std::vector<std::pair<std::string, Timeline>>& uem,
                const std::string& recording_id) {
  for (const auto& [rec, tl] : uem) {
    if (rec == recording_id) return tl;
  }
  return {};
}

}  // namespace diartk
