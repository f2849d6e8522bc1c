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
#include <sstream>

#include "gtest/gtest.h"

#include "diartk/errors.h"
#include "diartk/timeline.h"
#include "test_util.h"

namespace diartk {
namespace {

Ticks T(double s) { return SecondsToTicks(s); }

Annotation Parse(const std::string& text) {
  std::istringstream in(text);
  auto anns = ParseRttm(in);
  EXPECT_EQ(anns.size(), 1u);
  return anns.empty() ? Annotation() : anns.front();
}

TEST(TimelineTest, NormalizesAndMergesTouching) {
  Timeline tl({{T(3), T(4)}, {T(0), T(1)}, {T(1), T(2)}, {T(5), T(5)}});
  ASSERT_EQ(tl.size(), 2u);
  EXPECT_EQ(tl.intervals()[0], (Interval{T(0), T(2)}));
  EXPECT_EQ(tl.intervals()[1], (Interval{T(3), T(4)}));
  EXPECT_EQ(tl.total(), T(3));
  EXPECT_EQ(tl.Extent(), (Interval{T(0), T(4)}));
}

TEST(TimelineTest, SetAlgebra) {
  Timeline a({{T(0), T(5)}, {T(8), T(10)}});
  Timeline b({{T(3), T(9)}});
  EXPECT_EQ(a.Union(b), Timeline({{T(0), T(10)}}));
  EXPECT_EQ(a.Intersect(b), Timeline({{T(3), T(5)}, {T(8), T(9)}}));
  EXPECT_EQ(a.Subtract(b), Timeline({{T(0), T(3)}, {T(9), T(10)}}));
  EXPECT_EQ(b.Subtract(a), Timeline({{T(5), T(8)}}));
  EXPECT_EQ(a.Clip({T(4), T(9)}), Timeline({{T(4), T(5)}, {T(8), T(9)}}));
  EXPECT_EQ(a.OverlapWith({T(4), T(9)}), T(2));
  EXPECT_TRUE(a.Contains(T(0)));
  EXPECT_FALSE(a.Contains(T(5)));
}

TEST(TimelineTest, RandomAlgebraMatchesTickSets) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pos(0, 200);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Interval> ia, ib;
    for (int k = 0; k < 6; ++k) {
      int x = pos(rng), y = pos(rng);
      ia.push_back({std::min(x, y), std::max(x, y)});
      x = pos(rng);
      y = pos(rng);
      ib.push_back({std::min(x, y), std::max(x, y)});
    }
    Timeline a(ia), b(ib);
    for (Ticks t = 0; t <= 200; ++t) {
      bool in_a = a.Contains(t), in_b = b.Contains(t);
      ASSERT_EQ(a.Union(b).Contains(t), in_a || in_b);
      ASSERT_EQ(a.Intersect(b).Contains(t), in_a && in_b);
      ASSERT_EQ(a.Subtract(b).Contains(t), in_a && !in_b);
    }
  }
}

TEST(RttmTest, ParsesSingleLine) {
  Annotation a = Parse("SPEAKER rec1 1 0.00 5.00 <NA> <NA> spkA <NA> <NA>\n");
  EXPECT_EQ(a.recording_id(), "rec1");
  ASSERT_EQ(a.turns().size(), 1u);
  EXPECT_EQ(a.turns()[0], (Turn{"spkA", {0, T(5)}}));
}

TEST(RttmTest, EmptyInput) {
  std::istringstream in("");
  EXPECT_TRUE(ParseRttm(in).empty());
}

TEST(RttmTest, MergesOverlappingSameSpeakerTurns) {
  Annotation a = Parse(
      "SPEAKER rec1 1 0.00 5.00 <NA> <NA> spkA <NA> <NA>\n"
      "SPEAKER rec1 1 4.00 2.00 <NA> <NA> spkA <NA> <NA>\n");
  ASSERT_EQ(a.turns().size(), 1u);
  EXPECT_EQ(a.turns()[0].span, (Interval{0, T(6)}));
}

TEST(RttmTest, GroupsRecordingsInOrderOfAppearance) {
  std::istringstream in(
      "SPEAKER b 1 0 1 <NA> <NA> x <NA> <NA>\n"
      "SPEAKER a 1 0 1 <NA> <NA> y <NA> <NA>\n"
      "SPEAKER b 1 2 1 <NA> <NA> x <NA> <NA>\n");
  auto anns = ParseRttm(in);
  ASSERT_EQ(anns.size(), 2u);
  EXPECT_EQ(anns[0].recording_id(), "b");
  EXPECT_EQ(anns[0].turns().size(), 2u);
}

TEST(RttmTest, WriteFormat) {
  Annotation a("rec1", {{"spkA", {0, T(5)}}});
  EXPECT_EQ(WriteRttm({a}), "SPEAKER rec1 1 0.000 5.000 <NA> <NA> spkA <NA> <NA>\n");
  EXPECT_EQ(WriteRttm({}), "");
}

TEST(RttmTest, MalformedLinesCarryLineNumbers) {
  for (const std::string bad :
       {"SPEAKER rec1 1 0.0 5.0 <NA> <NA> spkA\n", "SPEAKER rec1 1 x 5 <NA> <NA> a <NA> <NA>\n",
        "SPEAKER rec1 1 1 -2 <NA> <NA> a <NA> <NA>\n", "LEXEME rec1 1 1 2 <NA> <NA> a <NA> <NA>\n"}) {
    std::istringstream in("SPEAKER r 1 0 1 <NA> <NA> a <NA> <NA>\n" + bad);
    try {
      ParseRttm(in);
      FAIL() << bad;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 2u) << bad;
    }
  }
}

TEST(RttmTest, RoundTripRandom) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    Annotation a = testing::RandomAnnotation(rng, "rec" + std::to_string(i), 5);
    std::istringstream in(WriteRttm({a}));
    auto back = ParseRttm(in);
    if (a.empty()) {
      EXPECT_TRUE(back.empty());
      continue;
    }
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0], a);
  }
}

TEST(AnnotationTest, RejectsBadLabelsAndOnsets) {
  EXPECT_THROW(Annotation("r", {{"", {0, 1}}}), ArgumentError);
  EXPECT_THROW(Annotation("r", {{"a b", {0, 1}}}), ArgumentError);
  EXPECT_THROW(Annotation("r", {{"a", {-1, 1}}}), ArgumentError);
}

TEST(AnnotationTest, SupportExamples) {
  EXPECT_TRUE(Support(Annotation("r")).empty());
  Annotation two("r", {{"a", {0, T(5)}}, {"b", {T(3), T(8)}}});
  EXPECT_EQ(Support(two), Timeline({{0, T(8)}}));
  Annotation gap("r", {{"a", {0, T(2)}}, {"a", {T(4), T(6)}}});
  EXPECT_EQ(Support(gap).size(), 2u);
  EXPECT_EQ(Support(gap).total(), T(4));
}

TEST(AnnotationTest, OverlapRegions) {
  Annotation a("r", {{"a", {0, T(5)}}, {"b", {T(3), T(8)}}, {"c", {T(4), T(9)}}});
  EXPECT_EQ(OverlapRegions(a), Timeline({{T(3), T(8)}}));
}

TEST(AnnotationTest, RelabelAndRestrict) {
  Annotation a("r", {{"a", {0, T(5)}}, {"b", {T(3), T(8)}}});
  Annotation m = a.Relabel({{"b", "a"}});
  EXPECT_EQ(m.turns().size(), 1u);
  Annotation r = a.Restrict(Timeline({{T(4), T(6)}}));
  EXPECT_EQ(r.turns().size(), 2u);
  EXPECT_EQ(Support(r).total(), T(2));
}

TEST(TimelineFileTest, RoundTrip) {
  Timeline tl({{T(0.5), T(1.25)}, {T(3), T(4.001)}});
  std::stringstream s;
  WriteTimeline(tl, s);
  EXPECT_EQ(ParseTimeline(s), tl);
  std::istringstream bad("1.0 0.5\n");
  EXPECT_THROW(ParseTimeline(bad), ParseError);
}

}  // namespace
}  // namespace diartk
