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

#ifndef DIARTK_AHC_H_
#define DIARTK_AHC_H_

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "diartk/embeddings.h"
#include "diartk/timeline.h"

namespace diartk {

enum class Linkage { kAverage, kComplete, kSingle };

Linkage ParseLinkage(const std::string& name);
std::string LinkageName(Linkage linkage);

struct AhcConfig {
  double segment_thr = 0.54;
  double stop_thr = 0.60;
  double speaker_thr = 0.20;
  double long_cluster_min = 6.0;  // seconds
  Linkage linkage = Linkage::kAverage;

  void Validate() const;
};

// Tuned threshold triples (segment, stop, speaker) for three embedding
// extractors; the long/short split is 6 s for all of them.
inline constexpr AhcConfig kAhc1{0.54, 0.60, 0.20, 6.0, Linkage::kAverage};
inline constexpr AhcConfig kAhc2{0.62, 0.62, 0.20, 6.0, Linkage::kAverage};
inline constexpr AhcConfig kAhc3{0.66, 0.68, 0.30, 6.0, Linkage::kAverage};

// Cluster ids are dense, numbered by first member segment.
struct ClusterState {
  std::vector<int> assignments;            // cluster id per segment
  std::vector<Eigen::VectorXd> centroids;  // unit mean of member vectors
  std::vector<Ticks> durations;            // time covered by members

  int num_clusters() const { return static_cast<int>(centroids.size()); }
};

// Plain agglomerative clustering on a similarity matrix.  Merges the pair
// with the highest linkage similarity (lowest index pair on ties) until the
// best similarity drops below stop_thr.  Only `assignments` is filled.
ClusterState AhcCluster(const SimilarityMatrix& sim, double stop_thr,
                        Linkage linkage = Linkage::kAverage);

// Renumbers `assignments` densely by first appearance and fills centroids
// and durations from `seq`.  A cluster's duration is the length of the
// union of its members' spans.
ClusterState WithClusterStats(std::vector<int> assignments,
                              const EmbeddingSequence& seq);

// Folds every short cluster (duration < long_cluster_min) into the most
// similar long cluster when the centroid cosine reaches speaker_thr, and
// keeps it as a separate speaker otherwise.  Short clusters are visited by
// decreasing duration; long-cluster centroids stay frozen during the pass.
ClusterState ReassignShortClusters(const ClusterState& state,
                                   const EmbeddingSequence& seq,
                                   const AhcConfig& cfg);

struct LabeledCentroid {
  std::string label;
  Eigen::VectorXd vector;
};

// Gives each overlapped-speech region its two speakers: the centroids most
// similar to the region's local embedding (normalized mean of the segment
// vectors overlapping it).  The existing label stays when it ranks in the
// top two; otherwise both top labels replace it inside the region.
Annotation AssignOverlaps(const Annotation& diar, const Timeline& osd,
                          const EmbeddingSequence& seq,
                          const std::vector<LabeledCentroid>& centroids);

// Labels each speech time point with the cluster of the nearest segment.
// Consecutive segments split the time between them at the middle of their
// overlap (or gap).
Annotation LabelSpeech(const Timeline& speech, const EmbeddingSequence& segments,
                       const std::vector<int>& cluster_of_segment,
                       const std::string& recording_id,
                       std::vector<std::string>* labels_by_cluster);

struct AhcResult {
  Annotation diarization;            // with overlap assignment
  Annotation single_label;           // before overlap assignment
  EmbeddingSequence merged;          // segments after consecutive merging
  ClusterState clusters;             // final clusters over `merged`
  std::vector<std::string> labels;   // label per cluster id
};

AhcResult DiarizeAhcDetailed(const Timeline& speech,
                             const EmbeddingSequence& seq, const Timeline& osd,
                             const AhcConfig& cfg);

// merge -> cosine matrix -> AHC -> short-cluster reassignment -> overlap
// assignment.  Labels are spk00, spk01, ... by first appearance.
Annotation DiarizeAhc(const Timeline& speech, const EmbeddingSequence& seq,
                      const Timeline& osd, const AhcConfig& cfg);

}  // namespace diartk

#endif  // DIARTK_AHC_H_
