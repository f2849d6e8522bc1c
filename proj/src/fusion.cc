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

#include "diartk/fusion.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "diartk/assignment.h"
#include "diartk/errors.h"
#include "diartk/metrics.h"

namespace diartk {

namespace {

constexpr double kWeightTolerance = 1e-9;
constexpr double kTieTolerance = 1e-12;

std::vector<std::size_t> FusionOrder(const HypothesisSet& hyps) {
  std::vector<std::string> text;
  for (const Annotation& a : hyps.hypotheses) text.push_back(WriteRttm({a}));
  std::vector<std::size_t> order(hyps.hypotheses.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (hyps.weights[a] != hyps.weights[b]) return hyps.weights[a] > hyps.weights[b];
    return text[a] < text[b];
  });
  return order;
}

std::string FreshLabel(const std::string& wanted,
                       const std::set<std::string>& taken) {
  if (!taken.contains(wanted)) return wanted;
  for (int k = 2;; ++k) {
    std::string candidate = wanted + "_" + std::to_string(k);
    if (!taken.contains(candidate)) return candidate;
  }
}

}  // namespace

HypothesisSet HypothesisSet::Make(std::vector<Annotation> hypotheses,
                                  std::vector<double> weights) {
  if (hypotheses.empty()) throw ArgumentError("no hypotheses to fuse");
  if (weights.size() != hypotheses.size()) {
    throw ArgumentError("got " + std::to_string(weights.size()) +
                        " weights for " + std::to_string(hypotheses.size()) +
                        " hypotheses");
  }
  for (const Annotation& h : hypotheses) {
    if (h.recording_id() != hypotheses.front().recording_id()) {
      throw ConfigError("cannot fuse hypotheses of different recordings: " +
                        hypotheses.front().recording_id() + " vs " +
                        h.recording_id());
    }
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw ArgumentError("hypothesis weights must be positive");
    total += w;
  }
  for (double& w : weights) w /= total;
  return {std::move(hypotheses), std::move(weights)};
}

LabelMapping MapLabels(const HypothesisSet& hyps) {
  const std::size_t n = hyps.hypotheses.size();
  LabelMapping mapping(n);
  std::vector<std::string> global;              // creation order
  std::vector<std::vector<Timeline>> evidence;  // per global label
  std::set<std::string> taken;

  for (std::size_t h : FusionOrder(hyps)) {
    const Annotation& hyp = hyps.hypotheses[h];
    const std::map<std::string, Timeline> local = hyp.SpeakerTimelines();
    std::vector<std::string> speakers;
    for (const auto& [label, tl] : local) speakers.push_back(label);

    GainMatrix gain(speakers.size(), std::vector<std::int64_t>(global.size(), 0));
    for (std::size_t r = 0; r < speakers.size(); ++r) {
      const Timeline& mine = local.at(speakers[r]);
      for (std::size_t g = 0; g < global.size(); ++g) {
        for (const Timeline& other : evidence[g]) {
          gain[r][g] += mine.Intersect(other).total();
        }
      }
    }
    std::vector<int> match = global.empty()
                                 ? std::vector<int>(speakers.size(), -1)
                                 : MaxWeightAssignment(gain);
    for (std::size_t r = 0; r < speakers.size(); ++r) {
      int g = match[r];
      if (g >= 0 && gain[r][static_cast<std::size_t>(g)] > 0) {
        mapping[h][speakers[r]] = global[static_cast<std::size_t>(g)];
        continue;
      }
      std::string label = FreshLabel(speakers[r], taken);
      taken.insert(label);
      global.push_back(label);
      evidence.emplace_back();
      mapping[h][speakers[r]] = label;
    }
    for (std::size_t r = 0; r < speakers.size(); ++r) {
      const std::string& g = mapping[h][speakers[r]];
      auto it = std::find(global.begin(), global.end(), g);
      evidence[static_cast<std::size_t>(it - global.begin())].push_back(
          local.at(speakers[r]));
    }
  }
  return mapping;
}

std::vector<double> RankWeights(const std::vector<std::vector<double>>& der,
                                double exponent) {
  const std::size_t n = der.size();
  for (const auto& row : der) {
    if (row.size() != n) throw ArgumentError("DER matrix must be square");
  }
  if (n == 0) return {};
  if (n == 1) return {1.0};
  std::vector<double> mean(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) mean[i] += 0.5 * (der[i][j] + der[j][i]);
    }
    mean[i] /= static_cast<double>(n - 1);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mean[a] < mean[b]; });
  std::vector<double> rank(n, 0.0);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(mean[order[j + 1]] - mean[order[i]]) <= kTieTolerance) ++j;
    // Ranks are 1-based; positions i..j share their average.
    double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = shared;
    i = j + 1;
  }
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::pow(rank[i], -exponent);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

Annotation Vote(const HypothesisSet& hyps, const LabelMapping& mapping) {
  const std::size_t n = hyps.hypotheses.size();
  if (mapping.size() != n) throw InternalError("mapping/hypothesis count mismatch");
  struct Event {
    Ticks time;
    std::size_t hyp;
    const std::string* label;
    bool start;
  };
  std::vector<Event> events;
  for (std::size_t h = 0; h < n; ++h) {
    for (const Turn& t : hyps.hypotheses[h].turns()) {
      auto it = mapping[h].find(t.speaker);
      if (it == mapping[h].end()) {
        throw InternalError("speaker " + t.speaker + " missing from label mapping");
      }
      events.push_back({t.span.begin, h, &it->second, true});
      events.push_back({t.span.end, h, &it->second, false});
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });

  std::vector<std::set<std::string>> active(n);
  std::map<std::string, std::vector<Interval>> out;
  for (std::size_t e = 0; e < events.size();) {
    const Ticks lo = events[e].time;
    for (; e < events.size() && events[e].time == lo; ++e) {
      if (events[e].start) {
        active[events[e].hyp].insert(*events[e].label);
      } else {
        active[events[e].hyp].erase(*events[e].label);
      }
    }
    if (e == events.size()) break;
    const Ticks hi = events[e].time;
    double mean_count = 0.0;
    std::map<std::string, double> support;
    for (std::size_t h = 0; h < n; ++h) {
      mean_count += hyps.weights[h] * static_cast<double>(active[h].size());
      for (const std::string& label : active[h]) support[label] += hyps.weights[h];
    }
    auto k = static_cast<std::size_t>(std::max(0.0, std::floor(mean_count + 0.5 + kWeightTolerance)));
    if (k == 0 || support.empty()) continue;
    std::vector<std::pair<std::string, double>> ranked(support.begin(), support.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (std::abs(a.second - b.second) > kWeightTolerance) return a.second > b.second;
      return a.first < b.first;
    });
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) {
      out[ranked[i].first].push_back({lo, hi});
    }
  }
  std::map<std::string, Timeline> speakers;
  for (auto& [label, spans] : out) speakers.emplace(label, Timeline(std::move(spans)));
  return AnnotationFromTimelines(hyps.hypotheses.front().recording_id(), speakers);
}

Annotation DoverLap(const std::vector<Annotation>& hyps,
                    const std::optional<std::vector<double>>& weights,
                    double rank_exponent) {
  if (hyps.empty()) throw ArgumentError("no hypotheses to fuse");
  std::vector<double> w = weights ? *weights
                                  : (hyps.size() == 1
                                         ? std::vector<double>{1.0}
                                         : RankWeights(PairwiseDerMatrix(hyps),
                                                       rank_exponent));
  HypothesisSet set = HypothesisSet::Make(hyps, std::move(w));
  if (set.hypotheses.size() == 1) return set.hypotheses.front();
  return Vote(set, MapLabels(set));
}

}  // namespace diartk
