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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

#include "diartk/config.h"
#include "diartk/errors.h"
#include "diartk/scorer_io.h"
#include "diartk/text_util.h"
#include "diartk/tsvad.h"
#include "test_util.h"

namespace diartk {
namespace {

namespace fs = std::filesystem;
using testing::Basis;

Ticks T(double s) { return SecondsToTicks(s); }

fs::path Scratch(const std::string& name) {
  fs::path p = fs::path(::testing::TempDir()) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(TextUtilTest, StrictNumbers) {
  double d = 0;
  long long i = 0;
  EXPECT_TRUE(ParseDouble("1.25", &d));
  EXPECT_EQ(d, 1.25);
  EXPECT_FALSE(ParseDouble("1.25x", &d));
  EXPECT_FALSE(ParseDouble("", &d));
  EXPECT_TRUE(ParseInt("-3", &i));
  EXPECT_FALSE(ParseInt("3.0", &i));
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(Trim("  a b \t"), "a b");
  EXPECT_EQ(Split("a,,b", ',').size(), 3u);
}

TEST(ConfigTest, ParsesDottedKeys) {
  Config c = Config::Parse(
      "# comment\n"
      "vad.onset = 0.6   # trailing\n"
      "ahc1.linkage=complete\n"
      "tsvad.chunk_len = 16, 64\n"
      "fusion.enabled = no\n");
  EXPECT_DOUBLE_EQ(c.GetDouble("vad.onset", 0.5), 0.6);
  EXPECT_EQ(c.GetString("ahc1.linkage", ""), "complete");
  EXPECT_EQ(c.GetDoubleList("tsvad.chunk_len"), (std::vector<double>{16, 64}));
  EXPECT_FALSE(c.GetBool("fusion.enabled", true));
  EXPECT_EQ(c.GetInt("missing.key", 7), 7);
  EXPECT_EQ(c.Sections(), (std::vector<std::string>{"ahc1", "fusion", "tsvad", "vad"}));
  EXPECT_THROW(c.GetDouble("ahc1.linkage", 0), ConfigError);
  EXPECT_THROW(Config::Parse("no equals sign\n"), ConfigError);
  EXPECT_THROW(Config::ReadFile("/nonexistent/config"), ConfigError);
}

TEST(ScorerIoTest, ProfilesRoundTrip) {
  SpeakerProfileSet set;
  set.recording_id = "r";
  set.profiles = {{"a", Basis(3, 0)}, {"b", Basis(3, 2)}};
  std::stringstream s;
  WriteProfiles(set, s);
  SpeakerProfileSet back = ParseProfiles(s);
  EXPECT_EQ(back.Labels(), set.Labels());
  EXPECT_EQ(back.profiles[1].vector, Basis(3, 2));
  std::istringstream bad("PROFILES r 3 2\na 1 0 0\n");
  EXPECT_THROW(ParseProfiles(bad), ParseError);
}

TEST(ScorerIoTest, ScoreBlockRoundTripAndShapeCheck) {
  const Interval chunk{0, T(1.6)};
  ScoreBlock block{chunk, FramesOf(chunk, 0.08), Eigen::MatrixXd::Constant(2, 20, 0.25)};
  block.scores(1, 3) = 1.0;
  std::stringstream s;
  WriteScoreBlock(block, "r", 0.08, s);
  const std::string text = s.str();
  std::istringstream in(text);
  EXPECT_EQ(ParseScoreBlock(in, chunk, 0.08, 2).scores, block.scores);
  std::istringstream wrong(text);
  EXPECT_THROW(ParseScoreBlock(wrong, chunk, 0.08, 3), ParseError);
  std::istringstream range("FRAMESCORES r 0.08 1 1\n1.5\n");
  EXPECT_THROW(ParseScoreBlock(range, {0, T(0.08)}, 0.08, 1), ParseError);
  EXPECT_EQ(ChunkStem({T(12.5), T(20)}), "chunk_00012500");
}

TEST(ScorerIoTest, EmittedRequestsAndDirectoryScorer) {
  const fs::path dir = Scratch("requests");
  Annotation diar("r", {{"a", {0, T(5)}}, {"b", {T(5), T(10)}}});
  EmbeddingSequence seq = testing::ConstantSequence(diar, {Basis(4, 0), Basis(4, 1)});
  SpeakerProfileSet profiles = ExtractProfiles(diar, seq);
  auto chunks = ChunkSpans(T(10), T(4), T(2));
  auto reqs = EmitChunkRequests(dir.string(), chunks, seq, profiles, 0.08);
  ASSERT_EQ(reqs.size(), chunks.size());
  std::ifstream req(reqs[1].request_path);
  std::string first_line;
  std::getline(req, first_line);
  EXPECT_EQ(first_line, "CHUNK r 2.000 4.000 0.08 25 50");
  // Answer every request with what the toy scorer would say.
  CosineScorer toy;
  for (std::size_t k = 0; k < chunks.size(); ++k) {
    std::ofstream out(reqs[k].output_path);
    WriteScoreBlock(toy.Score(chunks[k], seq.Overlapping(chunks[k]), profiles, 0.08),
                    "r", 0.08, out);
  }
  DirectoryScorer from_dir(dir.string());
  for (const Interval& c : chunks) {
    ScoreBlock want = toy.Score(c, seq.Overlapping(c), profiles, 0.08);
    EXPECT_EQ(from_dir.Score(c, seq, profiles, 0.08).scores, want.scores);
  }
  EXPECT_THROW(from_dir.Score({T(50), T(54)}, seq, profiles, 0.08), ConfigError);
}

TEST(ScorerIoTest, CommandScorerRunsSubprocess) {
  const fs::path dir = Scratch("cmd");
  const fs::path script = dir / "half.sh";
  {
    std::ofstream s(script);
    s << "#!/bin/sh\n"
         "awk 'NR==1{rec=$2;res=$5;n=$7} $1==\"PROFILES\"{p=$2} $1==\"OUTPUT\"{o=$2}\n"
         "END{getline h < p; split(h,f,\" \"); k=f[4];\n"
         "printf \"FRAMESCORES %s %s %d %d\\n\", rec, res, n, k > o;\n"
         "for(i=0;i<n;i++){line=\"\"; for(j=0;j<k;j++) line=line (j?\" \":\"\") \"0.5\";"
         " print line > o}}' \"$1\"\n";
  }
  fs::permissions(script, fs::perms::owner_all);
  Annotation diar("r", {{"a", {0, T(5)}}, {"b", {T(5), T(10)}}});
  EmbeddingSequence seq = testing::ConstantSequence(diar, {Basis(4, 0), Basis(4, 1)});
  SpeakerProfileSet profiles = ExtractProfiles(diar, seq);
  CommandScorer scorer(script.string(), (dir / "work").string());
  ScoreBlock b = scorer.Score({0, T(4)}, seq, profiles, 0.08);
  EXPECT_EQ(b.scores, Eigen::MatrixXd::Constant(2, 50, 0.5));
  CommandScorer failing("false", (dir / "work2").string());
  EXPECT_THROW(failing.Score({0, T(4)}, seq, profiles, 0.08), ConfigError);
}

}  // namespace
}  // namespace diartk
