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

#ifndef DIARTK_FUSION_H_
#define DIARTK_FUSION_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diartk/timeline.h"

namespace diartk {

inline constexpr double kDefaultRankExponent = 0.5;

struct HypothesisSet {
  std::vector<Annotation> hypotheses;
  std::vector<double> weights;  // positive, sum to 1

  // Checks the invariants and rescales weights to sum to one.
  static HypothesisSet Make(std::vector<Annotation> hypotheses,
                            std::vector<double> weights);
};

// Per hypothesis: local speaker label -> global label.
using LabelMapping = std::vector<std::map<std::string, std::string>>;

// Hypotheses are visited by decreasing weight (ties broken by content, so
// the result does not depend on input order).  The first one's labels seed
// the global namespace; each later one is matched to the existing global
// labels by an optimal assignment on accumulated overlap duration.
// Speakers left without a positive-overlap match get fresh labels.
LabelMapping MapLabels(const HypothesisSet& hyps);

// weight_k proportional to rank_k^-exponent, where hypotheses are ranked by
// increasing mean DER against the others (tied ranks are averaged).
std::vector<double> RankWeights(const std::vector<std::vector<double>>& der,
                                double exponent = kDefaultRankExponent);

// Weighted, overlap-aware vote over regions between consecutive turn
// boundaries.  A region gets round-half-up(weighted mean speaker count)
// labels, chosen by accumulated weight with lexicographic tie-breaking.
Annotation Vote(const HypothesisSet& hyps, const LabelMapping& mapping);

// RankWeights (unless weights are given) -> MapLabels -> Vote.
Annotation DoverLap(const std::vector<Annotation>& hyps,
                    const std::optional<std::vector<double>>& weights =
                        std::nullopt,
                    double rank_exponent = kDefaultRankExponent);

}  // namespace diartk

#endif  // DIARTK_FUSION_H_
