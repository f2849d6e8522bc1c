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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"

#include "diartk/ahc.h"
#include "diartk/config.h"
#include "diartk/errors.h"
#include "diartk/pipeline.h"
#include "diartk/simgen.h"

namespace diartk {
namespace {

namespace fs = std::filesystem;

fs::path Scratch(const std::string& name) {
  fs::path p = fs::path(::testing::TempDir()) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int RunCli(const std::string& args) {
  const std::string cmd = std::string(DIARTK_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Small simulated corpus shared by the tests below.
fs::path Corpus() {
  static const fs::path dir = [] {
    fs::path d = Scratch("pipeline_corpus");
    EXPECT_EQ(RunCli("simgen -o " + d.string() +
                  " --recordings 3 --duration 60 --within-cosine 0.9 --seed 3"),
              0);
    return d;
  }();
  return dir;
}

const char* kThreeByThree =
    "ahc1.segment_thr = 0.54\nahc1.stop_thr = 0.60\nahc1.speaker_thr = 0.20\n"
    "ahc2.segment_thr = 0.62\nahc2.stop_thr = 0.62\nahc2.speaker_thr = 0.20\n"
    "ahc3.segment_thr = 0.66\nahc3.stop_thr = 0.68\nahc3.speaker_thr = 0.30\n"
    "tsvad.threshold = 0.75\n"
    "tsvad1.chunk_len = 64\ntsvad2.chunk_len = 16\ntsvad3.chunk_len = 16\n";

fs::path WriteConfig(const fs::path& dir, const std::string& body) {
  fs::path p = dir / "pipeline.conf";
  std::ofstream(p) << "pipeline.manifest = " << (Corpus() / "manifest.tsv").string()
                   << "\npipeline.output_dir = " << (dir / "out").string() << "\n"
                   << body;
  return p;
}

TEST(PipelineConfigTest, ThreeAhcThreeScorersGiveEightSystems) {
  PipelineConfig p = PipelineConfig::FromConfig(Config::Parse(kThreeByThree));
  std::vector<std::string> names;
  for (const SystemSpec& s : PipelineSystems(p)) names.push_back(s.name);
  EXPECT_EQ(names, (std::vector<std::string>{"ahc1", "ahc2", "ahc3", "dover_ahc",
                                             "tsvad1", "tsvad2", "tsvad3",
                                             "dover_final"}));
  EXPECT_EQ(PipelineSystems(p)[3].description, "Dover-Lap (#1-3)");
  EXPECT_EQ(PipelineSystems(p)[7].description, "Dover-Lap (#4-7)");
  EXPECT_EQ(p.ahc[2].cfg.stop_thr, 0.68);
  EXPECT_EQ(p.scorers[0].cfg.chunk_len, 64.0);
  EXPECT_EQ(p.scorers[1].cfg.threshold, 0.75);
}

TEST(PipelineConfigTest, RejectsUnknownKeysAndBadScorers) {
  EXPECT_THROW(PipelineConfig::FromConfig(Config::Parse("ahc1.stop = 1\n")), ConfigError);
  EXPECT_THROW(PipelineConfig::FromConfig(Config::Parse("foo.bar = 1\n")), ConfigError);
  EXPECT_THROW(PipelineConfig::FromConfig(Config::Parse("tsvad1.scorer = nn\n")),
               ConfigError);
  PipelineConfig none = PipelineConfig::FromConfig(Config());
  EXPECT_EQ(none.ahc.size(), 1u);
  EXPECT_THROW(none.Validate(), ConfigError);  // no manifest
}

TEST(PipelineTest, SingleAhcEqualsDirectDiarization) {
  const fs::path dir = Scratch("pipeline_single");
  const fs::path conf = WriteConfig(dir, "fusion.enabled = false\n");
  ASSERT_EQ(RunCli("--config " + conf.string() + " --jobs 2 pipeline"), 0);
  for (const ManifestEntry& e : ReadManifest((Corpus() / "manifest.tsv").string())) {
    const fs::path rec = Corpus() / e.recording_id;
    Timeline speech = ReadTimelineFile((rec / "speech.txt").string());
    Timeline osd = ReadTimelineFile((rec / "osd.txt").string());
    EmbeddingSequence seq = ReadEmbeddingsFile((rec / "embeddings.bin").string(),
                                               e.recording_id);
    EXPECT_EQ(Slurp(dir / "out" / "recordings" / e.recording_id / "ahc1.rttm"),
              WriteRttm({DiarizeAhc(speech, seq, osd, kAhc1)}));
  }
  EXPECT_TRUE(fs::exists(dir / "out" / "der_table.txt"));
  EXPECT_FALSE(fs::exists(dir / "out" / "dover_ahc.rttm"));
}

TEST(PipelineTest, FullRunFusionWithinOnePercentOfBest) {
  const fs::path dir = Scratch("pipeline_full");
  ASSERT_EQ(RunCli("--config " + WriteConfig(dir, kThreeByThree).string() + " pipeline"), 0);
  auto j = nlohmann::json::parse(Slurp(dir / "out" / "der.json"));
  ASSERT_EQ(j["systems"].size(), 8u);
  double best = 1.0;
  for (const auto& row : j["systems"]) best = std::min(best, row["der"].get<double>());
  EXPECT_LE(j["systems"][7]["der"].get<double>(), best + 0.01);
  // A second run is served from the cache and changes nothing.
  const std::string before = Slurp(dir / "out" / "dover_final.rttm");
  ASSERT_EQ(RunCli("--config " + WriteConfig(dir, kThreeByThree).string() + " pipeline"), 0);
  EXPECT_EQ(Slurp(dir / "out" / "dover_final.rttm"), before);
}

TEST(PipelineTest, FailingRecordingIsIsolated) {
  const fs::path dir = Scratch("pipeline_broken");
  const fs::path corpus = dir / "corpus";
  fs::copy(Corpus(), corpus, fs::copy_options::recursive);
  std::ofstream(corpus / "sim001" / "embeddings.bin") << "EMBD garbage";
  fs::path conf = dir / "p.conf";
  std::ofstream(conf) << "pipeline.manifest = " << (corpus / "manifest.tsv").string()
                      << "\npipeline.output_dir = " << (dir / "out").string() << "\n";
  EXPECT_EQ(RunCli("--config " + conf.string() + " pipeline"), 1);
  EXPECT_TRUE(fs::exists(dir / "out" / "recordings" / "sim000" / "ahc1.rttm"));
  EXPECT_TRUE(fs::exists(dir / "out" / "recordings" / "sim002" / "ahc1.rttm"));
  EXPECT_EQ(Slurp(dir / "out" / "ahc1.rttm").find("sim001"), std::string::npos);
}

TEST(CliTest, ExitCodes) {
  const fs::path dir = Scratch("cli_codes");
  EXPECT_EQ(RunCli("--config " + WriteConfig(dir, "bogus.key = 1\n").string() + " pipeline"), 2);
  EXPECT_EQ(RunCli("pipeline --manifest /nonexistent/manifest.tsv -o " + dir.string()), 2);
  EXPECT_EQ(RunCli("score --ref /nonexistent.rttm --hyp /nonexistent.rttm"), 2);
  EXPECT_EQ(RunCli("no-such-command"), 2);
  // Missing inputs listed in a manifest fail before any work starts.
  std::ofstream(dir / "m.tsv") << "recX\tmissing.scores\tmissing.bin\t\n";
  EXPECT_EQ(RunCli("pipeline --manifest " + (dir / "m.tsv").string() + " -o " +
                (dir / "o").string()),
            2);
  EXPECT_FALSE(fs::exists(dir / "o" / "recordings"));
}

TEST(CliTest, StageSubcommandsChain) {
  const fs::path dir = Scratch("cli_stages");
  const fs::path rec = Corpus() / "sim000";
  const std::string d = dir.string() + "/";
  ASSERT_EQ(RunCli("fuse-scores " + (rec / "vad.scores").string() + " " +
                (rec / "vad.scores").string() + " -o " + d + "vad.scores"), 0);
  ASSERT_EQ(RunCli("binarize " + d + "vad.scores -o " + d + "speech.txt"), 0);
  EXPECT_EQ(ReadTimelineFile(d + "speech.txt"),
            ReadTimelineFile((rec / "speech.txt").string()));
  ASSERT_EQ(RunCli("segment --speech " + d + "speech.txt -o " + d + "segments.txt"), 0);
  for (int preset : {1, 2, 3}) {
    ASSERT_EQ(RunCli("ahc --preset " + std::to_string(preset) + " --speech " + d +
                  "speech.txt --embeddings " + (rec / "embeddings.bin").string() +
                  " --osd " + (rec / "osd.txt").string() + " --recording sim000 -o " + d +
                  "ahc" + std::to_string(preset) + ".rttm"),
              0);
  }
  ASSERT_EQ(RunCli("dover-lap " + d + "ahc1.rttm " + d + "ahc2.rttm " + d +
                "ahc3.rttm -o " + d + "fused.rttm"), 0);
  ASSERT_EQ(RunCli("tsvad --threshold 0.75 --speech " + d + "speech.txt --embeddings " +
                (rec / "embeddings.bin").string() + " --init " + d + "fused.rttm -o " + d +
                "tsvad.rttm"), 0);
  ASSERT_EQ(RunCli("tsvad --speech " + d + "speech.txt --embeddings " +
                (rec / "embeddings.bin").string() + " --init " + d +
                "fused.rttm --emit-requests " + d + "req"), 0);
  EXPECT_TRUE(fs::exists(dir / "req" / "profiles.txt"));
  EXPECT_TRUE(fs::exists(dir / "req" / "chunk_00000000.req"));
  ASSERT_EQ(RunCli("score --ref " + (rec / "ref.rttm").string() + " --hyp " + d +
                "tsvad.rttm --json " + d + "der.json"), 0);
  auto j = nlohmann::json::parse(Slurp(dir / "der.json"));
  EXPECT_LT(j["systems"][0]["der"].get<double>(), 0.05);
}

}  // namespace
}  // namespace diartk
