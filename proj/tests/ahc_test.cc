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

#include <random>

#include "gtest/gtest.h"

#include "diartk/ahc.h"
#include "diartk/errors.h"
#include "diartk/metrics.h"
#include "test_util.h"

namespace diartk {
namespace {

using testing::Basis;

Ticks T(double s) { return SecondsToTicks(s); }

SimilarityMatrix Sim(Eigen::MatrixXd m) { return SimilarityMatrix{std::move(m)}; }

EmbeddingSequence SeqOf(const std::vector<Interval>& spans,
                        const std::vector<Eigen::VectorXd>& vs) {
  EmbeddingSequence seq{"r", static_cast<int>(vs.front().size()), {}};
  for (std::size_t i = 0; i < spans.size(); ++i) seq.entries.push_back({spans[i], vs[i]});
  seq.Normalize();
  return seq;
}

TEST(AhcConfigTest, PresetsAndValidation) {
  EXPECT_EQ(kAhc1.segment_thr, 0.54);
  EXPECT_EQ(kAhc1.stop_thr, 0.60);
  EXPECT_EQ(kAhc1.speaker_thr, 0.20);
  EXPECT_EQ(kAhc2.segment_thr, 0.62);
  EXPECT_EQ(kAhc2.stop_thr, 0.62);
  EXPECT_EQ(kAhc3.stop_thr, 0.68);
  EXPECT_EQ(kAhc3.speaker_thr, 0.30);
  EXPECT_EQ(kAhc1.long_cluster_min, 6.0);
  AhcConfig bad;
  bad.stop_thr = 1.5;
  EXPECT_THROW(bad.Validate(), ConfigError);
  EXPECT_THROW(ParseLinkage("ward"), ConfigError);
}

TEST(AhcClusterTest, AllOnesMergeToOne) {
  auto s = AhcCluster(Sim(Eigen::MatrixXd::Ones(5, 5)), 0.6);
  EXPECT_EQ(s.assignments, (std::vector<int>{0, 0, 0, 0, 0}));
}

TEST(AhcClusterTest, DissimilarStaysSingleton) {
  Eigen::MatrixXd m = -Eigen::MatrixXd::Ones(5, 5);
  m.diagonal().setOnes();
  auto s = AhcCluster(Sim(m), 0.6);
  EXPECT_EQ(s.assignments, (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(AhcClusterTest, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const std::string linkage : {"average", "complete", "single"}) {
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 8;
      std::vector<Eigen::VectorXd> vs;
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd v(4);
        for (int d = 0; d < 4; ++d) v(d) = g(rng);
        vs.push_back(v.normalized());
      }
      Eigen::MatrixXd m(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = i == j ? 1.0 : vs[i].dot(vs[j]);
      }
      double thr = std::uniform_real_distribution<double>(-0.3, 0.8)(rng);
      auto got = AhcCluster(Sim(m), thr, ParseLinkage(linkage));
      EXPECT_EQ(got.assignments, testing::BruteForceAgglomeration(m, thr, linkage))
          << linkage << " trial " << trial;
    }
  }
}

TEST(ReassignTest, NoShortClustersUnchanged) {
  auto seq = SeqOf({{0, T(7)}, {T(7), T(14)}}, {Basis(2, 0), Basis(2, 1)});
  ClusterState s = WithClusterStats({0, 1}, seq);
  ClusterState r = ReassignShortClusters(s, seq, kAhc1);
  EXPECT_EQ(r.assignments, s.assignments);
}

TEST(ReassignTest, ShortClusterJoinsIdenticalLong) {
  auto seq = SeqOf({{0, T(7)}, {T(7), T(8)}}, {Basis(2, 0), Basis(2, 0)});
  ClusterState r = ReassignShortClusters(WithClusterStats({0, 1}, seq), seq, kAhc1);
  EXPECT_EQ(r.assignments, (std::vector<int>{0, 0}));
  EXPECT_EQ(r.durations[0], T(8));
}

TEST(ReassignTest, OrthogonalShortClusterKept) {
  auto seq = SeqOf({{0, T(7)}, {T(7), T(8)}}, {Basis(2, 0), Basis(2, 1)});
  ClusterState r = ReassignShortClusters(WithClusterStats({0, 1}, seq), seq, kAhc1);
  EXPECT_EQ(r.assignments, (std::vector<int>{0, 1}));
}

TEST(ReassignTest, DurationIsUnionOfSpans) {
  auto seq = SeqOf({{0, T(1.28)}, {T(0.32), T(1.6)}}, {Basis(2, 0), Basis(2, 0)});
  ClusterState s = WithClusterStats({0, 0}, seq);
  EXPECT_EQ(s.durations[0], T(1.6));
}

TEST(AssignOverlapsTest, EmptyOsdUnchanged) {
  Annotation diar("r", {{"A", {0, T(10)}}});
  auto seq = SeqOf({{0, T(10)}}, {Basis(3, 0)});
  std::vector<LabeledCentroid> c{{"A", Basis(3, 0)}, {"B", Basis(3, 1)}};
  EXPECT_EQ(AssignOverlaps(diar, Timeline(), seq, c), diar);
}

TEST(AssignOverlapsTest, AddsSecondClosestSpeaker) {
  // Local embedding (0.8, 0.6, 0) ranks A (1,0,0) then B (0,1,0) then C.
  Annotation diar("r", {{"A", {0, T(10)}}, {"C", {T(10), T(20)}}});
  Eigen::VectorXd local(3);
  local << 0.8, 0.6, 0.0;
  Eigen::VectorXd c_vec(3);
  c_vec << 0.0, 0.5, -0.8;
  auto seq = SeqOf({{0, T(4)}, {T(4), T(6)}, {T(6), T(10)}, {T(10), T(20)}},
                   {Basis(3, 0), local, Basis(3, 0), c_vec});
  std::vector<LabeledCentroid> c{{"A", Basis(3, 0)}, {"B", Basis(3, 1)},
                                 {"C", c_vec.normalized()}};
  Annotation out = AssignOverlaps(diar, Timeline({{T(4.5), T(5.5)}}), seq, c);
  EXPECT_EQ(out.SpeakerTimeline("A"), Timeline({{0, T(10)}}));
  EXPECT_EQ(out.SpeakerTimeline("B"), Timeline({{T(4.5), T(5.5)}}));
  EXPECT_EQ(out.SpeakerTimeline("C"), Timeline({{T(10), T(20)}}));
}

TEST(AssignOverlapsTest, PrimaryNotInTopTwoIsReplaced) {
  Annotation diar("r", {{"C", {0, T(10)}}});
  auto seq = SeqOf({{0, T(10)}}, {Basis(3, 0) + Basis(3, 1)});
  std::vector<LabeledCentroid> c{{"A", Basis(3, 0)}, {"B", Basis(3, 1)},
                                 {"C", Basis(3, 2)}};
  Annotation out = AssignOverlaps(diar, Timeline({{T(2), T(3)}}), seq, c);
  EXPECT_EQ(out.SpeakerTimeline("C"), Timeline({{0, T(2)}, {T(3), T(10)}}));
  EXPECT_EQ(out.SpeakerTimeline("A"), Timeline({{T(2), T(3)}}));
  EXPECT_EQ(out.SpeakerTimeline("B"), Timeline({{T(2), T(3)}}));
}

TEST(AssignOverlapsTest, SingleSpeakerUnchanged) {
  Annotation diar("r", {{"A", {0, T(10)}}});
  auto seq = SeqOf({{0, T(10)}}, {Basis(3, 0)});
  EXPECT_EQ(AssignOverlaps(diar, Timeline({{T(1), T(2)}}), seq, {{"A", Basis(3, 0)}}),
            diar);
}

TEST(LabelSpeechTest, CoversSpeechExactly) {
  Timeline speech({{0, T(3)}, {T(5), T(6)}});
  auto seq = SeqOf({{0, T(1.28)}, {T(1), T(3)}}, {Basis(2, 0), Basis(2, 1)});
  std::vector<std::string> labels;
  Annotation a = LabelSpeech(speech, seq, {0, 1}, "r", &labels);
  EXPECT_EQ(Support(a), speech);
  EXPECT_EQ(labels, (std::vector<std::string>{"spk00", "spk01"}));
  // Split at the midpoint of the overlap between the two segments.
  EXPECT_EQ(a.SpeakerTimeline("spk00"), Timeline({{0, T(1.14)}}));
  // The region without segments borrows the nearest one.
  EXPECT_TRUE(a.SpeakerTimeline("spk01").Contains(T(5.5)));
}

TEST(DiarizeAhcTest, SingleSegment) {
  Timeline speech({{0, T(1)}});
  auto seq = SeqOf({{0, T(1)}}, {Basis(4, 0)});
  Annotation a = DiarizeAhc(speech, seq, Timeline(), kAhc1);
  ASSERT_EQ(a.turns().size(), 1u);
  EXPECT_EQ(a.turns()[0].span, (Interval{0, T(1)}));
}

TEST(DiarizeAhcTest, RecoversConstantConversation) {
  Annotation ref("r", {{"A", {0, T(20)}}, {"B", {T(20), T(35)}},
                       {"C", {T(35), T(50)}}, {"A", {T(50), T(60)}}});
  auto seq = testing::ConstantSequence(ref, {Basis(8, 0), Basis(8, 1), Basis(8, 2)});
  Annotation hyp = DiarizeAhc(Support(ref), seq, Timeline(), kAhc1);
  EXPECT_EQ(hyp.Speakers().size(), 3u);
  EXPECT_LT(ComputeDer(ref, hyp).der(), 0.01);
}

TEST(DiarizeAhcTest, EdgeCases) {
  auto seq = SeqOf({{0, T(1)}}, {Basis(4, 0)});
  EXPECT_TRUE(DiarizeAhc(Timeline(), seq, Timeline(), kAhc1).empty());
  EXPECT_THROW(DiarizeAhc(Timeline({{T(5), T(6)}}), seq, Timeline(), kAhc1),
               ArgumentError);
}

}  // namespace
}  // namespace diartk
