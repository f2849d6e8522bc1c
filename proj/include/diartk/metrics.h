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

#ifndef DIARTK_METRICS_H_
#define DIARTK_METRICS_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diartk/timeline.h"

namespace diartk {

// Error components in ticks; rates are derived on demand.
struct DERBreakdown {
  Ticks miss = 0;
  Ticks false_alarm = 0;
  Ticks confusion = 0;
  Ticks total_reference = 0;

  Ticks errors() const { return miss + false_alarm + confusion; }
  // Throws UndefinedRateError when total_reference is zero.
  double der() const;
  double miss_rate() const;
  double false_alarm_rate() const;
  double confusion_rate() const;

  DERBreakdown& operator+=(const DERBreakdown& other);
};

struct ScoringOptions {
  double collar = 0.25;  // seconds on each side of reference boundaries
  bool score_overlaps = true;
  std::optional<Timeline> uem;
};

// Scored time: the UEM (or everything) minus +-collar around every
// reference turn boundary, minus multi-speaker reference regions when
// overlaps are not scored.
Timeline ScoredRegion(const Annotation& ref, const Annotation& hyp,
                      const ScoringOptions& opts);

// Homogeneous piece of the scored timeline.
struct ScoringRegion {
  Interval span;
  std::vector<int> ref;  // indices into ref speakers
  std::vector<int> hyp;  // indices into hyp speakers
};

// Cuts the scored region at every turn boundary of either annotation.
// Speaker indices follow Annotation::Speakers() order.
std::vector<ScoringRegion> CutRegions(const Annotation& ref,
                                      const Annotation& hyp,
                                      const Timeline& scored);

// md-eval style DER under the optimal one-to-one speaker mapping computed
// once over the whole scored timeline.  Does not throw when the reference
// is empty; der() on the result does.
DERBreakdown ComputeDer(const Annotation& ref, const Annotation& hyp,
                        const ScoringOptions& opts = {});

// Optimal ref -> hyp label mapping used by ComputeDer.
std::vector<std::pair<std::string, std::string>> OptimalSpeakerMapping(
    const Annotation& ref, const Annotation& hyp,
    const ScoringOptions& opts = {});

// Time-weighted corpus DER: components summed across recordings.
DERBreakdown CorpusDer(
    const std::vector<std::pair<Annotation, Annotation>>& ref_hyp_pairs,
    const ScoringOptions& opts = {});

// Entry (i, j) is the DER of hyps[j] scored against hyps[i] with no collar
// and overlaps scored.  When hyps[i] is empty the entry is 0 if hyps[j] is
// empty too and 1 otherwise.
std::vector<std::vector<double>> PairwiseDerMatrix(
    const std::vector<Annotation>& hyps);

// UEM lines: "recording channel onset offset".
std::vector<std::pair<std::string, Timeline>> ReadUemFile(
    const std::string& path);
Timeline UemFor(const std::vector<std::pair<std::string, Timeline>>& uem,
                const std::string& recording_id);

}  // namespace diartk

#endif  // DIARTK_METRICS_H_
