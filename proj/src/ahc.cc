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

#include "diartk/ahc.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>

#include "glog/logging.h"

#include "diartk/errors.h"

namespace diartk {

namespace {

constexpr double kNoPair = -std::numeric_limits<double>::infinity();

// Renumbers ids densely in order of first appearance.
std::vector<int> Compact(const std::vector<int>& ids) {
  std::map<int, int> remap;
  std::vector<int> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(ids[i], static_cast<int>(remap.size()));
    out[i] = it->second;
  }
  return out;
}

std::string SpeakerLabel(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "spk%02d", index);
  return buf;
}

}  // namespace

Linkage ParseLinkage(const std::string& name) {
  if (name == "average") return Linkage::kAverage;
  if (name == "complete") return Linkage::kComplete;
  if (name == "single") return Linkage::kSingle;
  throw ConfigError("unknown linkage '" + name + "'");
}

std::string LinkageName(Linkage linkage) {
  switch (linkage) {
    case Linkage::kAverage:
      return "average";
    case Linkage::kComplete:
      return "complete";
    case Linkage::kSingle:
      return "single";
  }
  return "average";
}

void AhcConfig::Validate() const {
  for (double thr : {segment_thr, stop_thr, speaker_thr}) {
    if (!(thr >= -1.0 && thr <= 1.0)) {
      throw ConfigError("AHC thresholds must lie in [-1, 1]");
    }
  }
  if (!(long_cluster_min > 0.0)) {
    throw ConfigError("long_cluster_min must be positive");
  }
}

ClusterState AhcCluster(const SimilarityMatrix& sim, double stop_thr,
                        Linkage linkage) {
  const std::size_t n = sim.n();
  ClusterState state;
  state.assignments.resize(n);
  std::iota(state.assignments.begin(), state.assignments.end(), 0);
  if (n < 2) return state;

  Eigen::MatrixXd s = sim.values;
  std::vector<std::size_t> size(n, 1);
  std::vector<bool> active(n, true);
  std::vector<double> best(n, kNoPair);
  std::vector<std::size_t> best_idx(n, n);

  auto refresh = [&](std::size_t i) {
    best[i] = kNoPair;
    best_idx[i] = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      double v = s(i, j);
      if (v > best[i]) {
        best[i] = v;
        best_idx[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  std::vector<int>& owner = state.assignments;
  for (std::size_t remaining = n; remaining > 1; --remaining) {
    std::size_t a = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i] && best_idx[i] < n && (a == n || best[i] > best[a])) a = i;
    }
    if (a == n || best[a] < stop_thr) break;
    const std::size_t b = best_idx[a];  // b > a, see lowest-pair argument
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      double merged = 0.0;
      switch (linkage) {
        case Linkage::kAverage:
          merged = (static_cast<double>(size[a]) * s(a, k) +
                    static_cast<double>(size[b]) * s(b, k)) /
                   static_cast<double>(size[a] + size[b]);
          break;
        case Linkage::kComplete:
          merged = std::min(s(a, k), s(b, k));
          break;
        case Linkage::kSingle:
          merged = std::max(s(a, k), s(b, k));
          break;
      }
      s(a, k) = merged;
      s(k, a) = merged;
    }
    size[a] += size[b];
    active[b] = false;
    for (int& o : owner) {
      if (o == static_cast<int>(b)) o = static_cast<int>(a);
    }
    refresh(a);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a) continue;
      if (best_idx[k] == a || best_idx[k] == b) {
        refresh(k);
      } else if (s(k, a) > best[k] || (s(k, a) == best[k] && a < best_idx[k])) {
        best[k] = s(k, a);
        best_idx[k] = a;
      }
    }
  }
  state.assignments = Compact(owner);
  return state;
}

ClusterState WithClusterStats(std::vector<int> assignments,
                              const EmbeddingSequence& seq) {
  if (assignments.size() != seq.size()) {
    throw InternalError("cluster assignments do not match the sequence");
  }
  ClusterState state;
  state.assignments = Compact(assignments);
  int k = 0;
  for (int id : state.assignments) k = std::max(k, id + 1);
  std::vector<std::vector<const Eigen::VectorXd*>> members(k);
  std::vector<std::vector<Interval>> spans(k);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    int c = state.assignments[i];
    members[c].push_back(&seq.entries[i].vector);
    spans[c].push_back(seq.entries[i].span);
  }
  for (int c = 0; c < k; ++c) {
    state.centroids.push_back(MeanDirection(members[c]));
    state.durations.push_back(Timeline(spans[c]).total());
  }
  return state;
}

ClusterState ReassignShortClusters(const ClusterState& state,
                                   const EmbeddingSequence& seq,
                                   const AhcConfig& cfg) {
  const Ticks long_min = SecondsToTicks(cfg.long_cluster_min);
  std::vector<int> long_ids, short_ids;
  for (int c = 0; c < state.num_clusters(); ++c) {
    (state.durations[c] >= long_min ? long_ids : short_ids).push_back(c);
  }
  if (short_ids.empty() || long_ids.empty()) return state;
  std::stable_sort(short_ids.begin(), short_ids.end(), [&](int x, int y) {
    return state.durations[x] > state.durations[y];
  });
  std::vector<int> target(state.num_clusters());
  std::iota(target.begin(), target.end(), 0);
  for (int c : short_ids) {
    int best = -1;
    double best_sim = kNoPair;
    for (int l : long_ids) {
      double v = state.centroids[c].dot(state.centroids[l]);
      if (v > best_sim) {
        best_sim = v;
        best = l;
      }
    }
    if (best_sim >= cfg.speaker_thr) target[c] = best;
  }
  std::vector<int> assignments = state.assignments;
  for (int& a : assignments) a = target[a];
  return WithClusterStats(std::move(assignments), seq);
}

Annotation AssignOverlaps(const Annotation& diar, const Timeline& osd,
                          const EmbeddingSequence& seq,
                          const std::vector<LabeledCentroid>& centroids) {
  if (osd.empty() || centroids.size() < 2) return diar;
  const Timeline support = Support(diar);
  const Timeline clipped = osd.Intersect(support);
  if (clipped.total() != osd.total()) {
    LOG(WARNING) << diar.recording_id() << ": "
                 << TicksToSeconds(osd.total() - clipped.total())
                 << " s of overlap outside speech ignored";
  }
  std::map<std::string, std::vector<Interval>> removed, added;
  for (const Interval& region : clipped.intervals()) {
    std::vector<const Eigen::VectorXd*> local;
    for (const EmbeddingEntry& e : seq.entries) {
      if (OverlapDuration(e.span, region) > 0) local.push_back(&e.vector);
    }
    if (local.empty()) continue;
    const Eigen::VectorXd probe = MeanDirection(local);
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      ranked.emplace_back(centroids[c].vector.dot(probe), c);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [&](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first > y.first;
      return centroids[x.second].label < centroids[y.second].label;
    });
    const std::string& first = centroids[ranked[0].second].label;
    const std::string& second = centroids[ranked[1].second].label;
    for (const Turn& t : diar.turns()) {
      Ticks lo = std::max(t.span.begin, region.begin);
      Ticks hi = std::min(t.span.end, region.end);
      if (hi <= lo) continue;
      if (t.speaker == first) {
        added[second].push_back({lo, hi});
      } else if (t.speaker == second) {
        added[first].push_back({lo, hi});
      } else {
        removed[t.speaker].push_back({lo, hi});
        added[first].push_back({lo, hi});
        added[second].push_back({lo, hi});
      }
    }
  }
  std::map<std::string, Timeline> speakers = diar.SpeakerTimelines();
  for (auto& [label, spans] : removed) {
    speakers[label] = speakers[label].Subtract(Timeline(spans));
  }
  for (auto& [label, spans] : added) {
    speakers[label] = speakers[label].Union(Timeline(spans));
  }
  return AnnotationFromTimelines(diar.recording_id(), speakers);
}

Annotation LabelSpeech(const Timeline& speech, const EmbeddingSequence& segments,
                       const std::vector<int>& cluster_of_segment,
                       const std::string& recording_id,
                       std::vector<std::string>* labels_by_cluster) {
  if (segments.empty()) return Annotation(recording_id);
  int k = 0;
  for (int c : cluster_of_segment) k = std::max(k, c + 1);
  std::vector<std::string> labels(k);
  int next_label = 0;
  std::vector<Turn> turns;

  auto emit = [&](std::size_t seg, Ticks lo, Ticks hi) {
    if (hi <= lo) return;
    int c = cluster_of_segment[seg];
    if (labels[c].empty()) labels[c] = SpeakerLabel(next_label++);
    turns.push_back({labels[c], {lo, hi}});
  };

  for (const Interval& region : speech.intervals()) {
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (OverlapDuration(segments.entries[i].span, region) > 0) inside.push_back(i);
    }
    if (inside.empty()) {
      // No segment overlaps this region: borrow the temporally nearest one.
      std::size_t nearest = 0;
      Ticks best = std::numeric_limits<Ticks>::max();
      for (std::size_t i = 0; i < segments.size(); ++i) {
        const Interval& s = segments.entries[i].span;
        Ticks d = s.end <= region.begin ? region.begin - s.end : s.begin - region.end;
        if (d < best) {
          best = d;
          nearest = i;
        }
      }
      emit(nearest, region.begin, region.end);
      continue;
    }
    Ticks cursor = region.begin;
    for (std::size_t n = 0; n < inside.size(); ++n) {
      Ticks cut = region.end;
      if (n + 1 < inside.size()) {
        const Interval& a = segments.entries[inside[n]].span;
        const Interval& b = segments.entries[inside[n + 1]].span;
        cut = std::clamp((a.end + b.begin) / 2, cursor, region.end);
      }
      emit(inside[n], cursor, cut);
      cursor = cut;
    }
  }
  if (labels_by_cluster) *labels_by_cluster = labels;
  return Annotation(recording_id, std::move(turns));
}

AhcResult DiarizeAhcDetailed(const Timeline& speech,
                             const EmbeddingSequence& seq, const Timeline& osd,
                             const AhcConfig& cfg) {
  cfg.Validate();
  AhcResult result;
  result.diarization = Annotation(seq.recording_id);
  result.single_label = result.diarization;
  if (speech.empty()) return result;
  EmbeddingSequence segments = seq.Overlapping(speech);
  if (segments.empty()) {
    throw ArgumentError(seq.recording_id + ": no embeddings inside speech");
  }
  result.merged =
      MergeConsecutive(segments, CosineMatrix(segments), cfg.segment_thr);
  ClusterState plain = AhcCluster(CosineMatrix(result.merged), cfg.stop_thr,
                                  cfg.linkage);
  result.clusters = ReassignShortClusters(
      WithClusterStats(std::move(plain.assignments), result.merged),
      result.merged, cfg);
  result.single_label =
      LabelSpeech(speech, result.merged, result.clusters.assignments,
                  seq.recording_id, &result.labels);
  std::vector<LabeledCentroid> centroids;
  for (int c = 0; c < result.clusters.num_clusters(); ++c) {
    if (result.labels[c].empty()) continue;
    centroids.push_back({result.labels[c], result.clusters.centroids[c]});
  }
  result.diarization = AssignOverlaps(result.single_label,
                                      osd.Intersect(speech), segments,
                                      centroids);
  return result;
}

Annotation DiarizeAhc(const Timeline& speech, const EmbeddingSequence& seq,
                      const Timeline& osd, const AhcConfig& cfg) {
  return DiarizeAhcDetailed(speech, seq, osd, cfg).diarization;
}

}  // namespace diartk
