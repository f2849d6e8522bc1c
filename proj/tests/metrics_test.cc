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

#include <fstream>
#include <random>

#include "gtest/gtest.h"

#include "diartk/assignment.h"
#include "diartk/errors.h"
#include "diartk/metrics.h"
#include "test_util.h"

namespace diartk {
namespace {

Ticks T(double s) { return SecondsToTicks(s); }

ScoringOptions NoCollar() {
  ScoringOptions o;
  o.collar = 0.0;
  return o;
}

TEST(AssignmentTest, BruteForceAndHungarianAgree) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(1, 7), val(0, 20);
  for (int trial = 0; trial < 300; ++trial) {
    GainMatrix g(dim(rng), std::vector<std::int64_t>(dim(rng)));
    for (auto& row : g) {
      for (auto& x : row) x = val(rng);
    }
    auto bf = BruteForceAssignment(g);
    auto hu = HungarianAssignment(g);
    EXPECT_EQ(AssignmentGain(g, bf), AssignmentGain(g, hu));
    std::vector<bool> used(g[0].size(), false);
    for (int c : hu) {
      if (c < 0) continue;
      EXPECT_FALSE(used[c]);
      used[c] = true;
    }
  }
}

TEST(AssignmentTest, LargeInstanceUsesHungarian) {
  GainMatrix g(12, std::vector<std::int64_t>(12, 0));
  for (int i = 0; i < 12; ++i) g[i][(i + 5) % 12] = 10;
  auto a = MaxWeightAssignment(g);
  EXPECT_EQ(AssignmentGain(g, a), 120);
}

TEST(DerTest, IdenticalIsZero) {
  Annotation a("r", {{"A", {0, T(10)}}, {"B", {T(5), T(15)}}});
  DERBreakdown d = ComputeDer(a, a);
  EXPECT_EQ(d.errors(), 0);
  EXPECT_EQ(d.der(), 0.0);
}

TEST(DerTest, HandExample) {
  Annotation ref("r", {{"A", {0, T(10)}}});
  Annotation hyp("r", {{"X", {0, T(8)}}});
  DERBreakdown d = ComputeDer(ref, hyp, NoCollar());
  EXPECT_EQ(d.miss, T(2));
  EXPECT_EQ(d.false_alarm, 0);
  EXPECT_EQ(d.confusion, 0);
  EXPECT_DOUBLE_EQ(d.der(), 0.2);
}

TEST(DerTest, CollarAndOverlapExclusion) {
  Annotation ref("r", {{"A", {0, T(10)}}, {"B", {T(8), T(12)}}});
  Annotation hyp("r", {{"X", {0, T(10)}}});
  ScoringOptions opts;
  opts.collar = 0.5;
  opts.score_overlaps = false;
  DERBreakdown d = ComputeDer(ref, hyp, opts);
  // Scored: [0.5,7.5) for A and [10.5,11.5) for B.
  EXPECT_EQ(d.total_reference, T(8));
  EXPECT_EQ(d.miss, T(1));
  EXPECT_EQ(d.false_alarm, 0);
}

TEST(DerTest, UemRestrictsScoring) {
  Annotation ref("r", {{"A", {0, T(10)}}});
  Annotation hyp("r", {{"X", {T(5), T(20)}}});
  ScoringOptions opts = NoCollar();
  opts.uem = Timeline({{0, T(12)}});
  DERBreakdown d = ComputeDer(ref, hyp, opts);
  EXPECT_EQ(d.miss, T(5));
  EXPECT_EQ(d.false_alarm, T(2));
}

TEST(DerTest, UndefinedRate) {
  DERBreakdown d = ComputeDer(Annotation("r"), Annotation("r"));
  EXPECT_THROW(d.der(), UndefinedRateError);
}

TEST(DerTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    Annotation ref = testing::RandomAnnotation(rng, "r", 3);
    Annotation hyp = trial % 2 ? testing::PerturbedAnnotation(rng, ref, 4)
                               : testing::RandomAnnotation(rng, "r", 4);
    for (double collar : {0.0, 0.25}) {
      for (bool overlaps : {true, false}) {
        ScoringOptions o;
        o.collar = collar;
        o.score_overlaps = overlaps;
        DERBreakdown got = ComputeDer(ref, hyp, o);
        DERBreakdown want = testing::BruteForceDer(ref, hyp, T(collar), overlaps);
        ASSERT_EQ(got.total_reference, want.total_reference);
        ASSERT_EQ(got.miss, want.miss);
        ASSERT_EQ(got.false_alarm, want.false_alarm);
        ASSERT_EQ(got.confusion, want.confusion);
      }
    }
  }
}

TEST(DerTest, OptimalMappingPairsRenamedSpeakers) {
  Annotation ref("r", {{"A", {0, T(5)}}, {"B", {T(5), T(10)}}});
  Annotation hyp = ref.Relabel({{"A", "y"}, {"B", "x"}});
  auto m = OptimalSpeakerMapping(ref, hyp);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0], (std::pair<std::string, std::string>{"A", "y"}));
  EXPECT_EQ(m[1], (std::pair<std::string, std::string>{"B", "x"}));
}

TEST(CorpusDerTest, PoolsDurations) {
  Annotation r1("a", {{"A", {0, T(10)}}});
  Annotation h1("a", {{"A", {0, T(9)}}});
  Annotation r2("b", {{"A", {0, T(30)}}});
  Annotation h2("b", {{"A", {0, T(27)}}});
  ScoringOptions o = NoCollar();
  EXPECT_EQ(CorpusDer({{r1, h1}}, o).der(), ComputeDer(r1, h1, o).der());
  EXPECT_DOUBLE_EQ(CorpusDer({{r1, h1}, {r2, h2}}, o).der(), 0.10);
  EXPECT_EQ(CorpusDer({{r1, r1}, {r2, r2}}, o).der(), 0.0);
  EXPECT_THROW(CorpusDer({}, o), ArgumentError);
}

TEST(PairwiseDerTest, Examples) {
  std::mt19937_64 rng(4);
  Annotation h = testing::RandomAnnotation(rng, "r", 3);
  auto zero = PairwiseDerMatrix({h, h, h});
  for (const auto& row : zero) {
    for (double v : row) EXPECT_EQ(v, 0.0);
  }
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Annotation> hyps;
    for (int k = 0; k < 3; ++k) hyps.push_back(testing::RandomAnnotation(rng, "r", 3));
    auto m = PairwiseDerMatrix(hyps);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_GE(m[i][j], 0.0);
        if (i == j || hyps[i].empty()) continue;
        DERBreakdown d = testing::BruteForceDer(hyps[i], hyps[j], 0, true);
        EXPECT_DOUBLE_EQ(m[i][j], static_cast<double>(d.errors()) /
                                      static_cast<double>(d.total_reference));
      }
    }
  }
}

TEST(UemFileTest, ParsesAndRejects) {
  const std::string path = ::testing::TempDir() + "/test.uem";
  {
    std::ofstream f(path);
    f << "r 1 0.0 5.0\nr 1 7.0 9.0\nq 1 0 1\n";
  }
  auto uem = ReadUemFile(path);
  EXPECT_EQ(UemFor(uem, "r"), Timeline({{0, T(5)}, {T(7), T(9)}}));
  EXPECT_TRUE(UemFor(uem, "zz").empty());
  {
    std::ofstream f(path);
    f << "r 1 5.0 1.0\n";
  }
  EXPECT_THROW(ReadUemFile(path), ParseError);
}

}  // namespace
}  // namespace diartk
