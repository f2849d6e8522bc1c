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

#include "diartk/scorer_io.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "diartk/errors.h"
#include "diartk/text_util.h"

namespace diartk {

namespace fs = std::filesystem;

namespace {

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

void WriteRequest(const std::string& path, const std::string& rec,
                  const Interval& chunk, double resolution,
                  const std::string& profiles_path,
                  const std::string& embeddings_path,
                  const std::string& output_path) {
  FrameRange frames = FramesOf(chunk, resolution);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "CHUNK " << rec << " " << FormatSeconds(chunk.begin) << " "
      << FormatSeconds(chunk.duration()) << " " << FormatDouble(resolution)
      << " " << frames.first << " " << frames.size() << "\n"
      << "PROFILES " << profiles_path << "\n"
      << "EMBEDDINGS " << embeddings_path << "\n"
      << "OUTPUT " << output_path << "\n";
}

ScoreBlock ReadBlockFile(const std::string& path, const Interval& chunk,
                         double resolution, std::size_t n_speakers) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scorer produced no output at " + path);
  try {
    return ParseScoreBlock(in, chunk, resolution, n_speakers);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace

void WriteProfiles(const SpeakerProfileSet& profiles, std::ostream& out) {
  const long dim =
      profiles.profiles.empty() ? 0 : profiles.profiles.front().vector.size();
  out << "PROFILES " << profiles.recording_id << " " << dim << " "
      << profiles.size() << "\n";
  for (const SpeakerProfile& p : profiles.profiles) {
    out << p.label;
    for (Eigen::Index d = 0; d < p.vector.size(); ++d) {
      out << " " << FormatDouble(p.vector(d));
    }
    out << "\n";
  }
}

SpeakerProfileSet ParseProfiles(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  SpeakerProfileSet set;
  long long dim = -1, count = -1;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = SplitWhitespace(line);
    if (fields.empty()) continue;
    if (dim < 0) {
      if (fields.size() != 4 || fields[0] != "PROFILES" ||
          !ParseInt(fields[2], &dim) || !ParseInt(fields[3], &count) ||
          dim < 0 || count < 0) {
        throw ParseError("expected 'PROFILES <recording_id> <dim> <count>'",
                         line_no);
      }
      set.recording_id = fields[1];
      continue;
    }
    if (static_cast<long long>(fields.size()) != dim + 1) {
      throw ParseError("expected a label and " + std::to_string(dim) + " values",
                       line_no);
    }
    Eigen::VectorXd v(dim);
    for (long long d = 0; d < dim; ++d) {
      if (!ParseDouble(fields[static_cast<std::size_t>(d + 1)], &v(d))) {
        throw ParseError("non-numeric profile value", line_no);
      }
    }
    set.profiles.push_back({fields[0], UnitVector(v)});
  }
  if (dim < 0) throw ParseError("missing PROFILES header");
  if (static_cast<long long>(set.profiles.size()) != count) {
    throw ParseError("profile count does not match header");
  }
  return set;
}

void WriteScoreBlock(const ScoreBlock& block, const std::string& recording_id,
                     double resolution, std::ostream& out) {
  out << "FRAMESCORES " << recording_id << " " << FormatDouble(resolution)
      << " " << block.scores.cols() << " " << block.scores.rows() << "\n";
  for (Eigen::Index f = 0; f < block.scores.cols(); ++f) {
    for (Eigen::Index s = 0; s < block.scores.rows(); ++s) {
      if (s > 0) out << " ";
      out << FormatDouble(block.scores(s, f));
    }
    out << "\n";
  }
}

ScoreBlock ParseScoreBlock(std::istream& in, const Interval& chunk,
                           double resolution, std::size_t n_speakers) {
  ScoreBlock block;
  block.chunk = chunk;
  block.frames = FramesOf(chunk, resolution);
  std::string line;
  std::size_t line_no = 0;
  long long n_frames = -1, n_spk = -1;
  long frame = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = SplitWhitespace(line);
    if (fields.empty()) continue;
    if (n_frames < 0) {
      double res = 0;
      if (fields.size() != 5 || fields[0] != "FRAMESCORES" ||
          !ParseDouble(fields[2], &res) || !ParseInt(fields[3], &n_frames) ||
          !ParseInt(fields[4], &n_spk)) {
        throw ParseError(
            "expected 'FRAMESCORES <recording_id> <resolution> <n_frames> "
            "<n_speakers>'",
            line_no);
      }
      if (n_frames != block.frames.size() ||
          n_spk != static_cast<long long>(n_speakers) ||
          std::abs(res - resolution) > 1e-9) {
        throw ParseError("score block shape does not match the request",
                         line_no);
      }
      block.scores = Eigen::MatrixXd::Zero(n_spk, n_frames);
      continue;
    }
    if (frame >= n_frames || static_cast<long long>(fields.size()) != n_spk) {
      throw ParseError("unexpected score line", line_no);
    }
    for (long long s = 0; s < n_spk; ++s) {
      double v = 0;
      if (!ParseDouble(fields[static_cast<std::size_t>(s)], &v) || v < 0.0 ||
          v > 1.0) {
        throw ParseError("score must be a number in [0, 1]", line_no);
      }
      block.scores(s, frame) = v;
    }
    ++frame;
  }
  if (n_frames < 0) throw ParseError("missing FRAMESCORES header");
  if (frame != n_frames) throw ParseError("truncated score block");
  return block;
}

std::string ChunkStem(const Interval& chunk) {
  std::string ms = std::to_string((chunk.begin + 5) / 10);
  ms.insert(0, ms.size() < 8 ? 8 - ms.size() : 0, '0');
  return "chunk_" + ms;
}

std::vector<ChunkRequest> EmitChunkRequests(
    const std::string& dir, const std::vector<Interval>& chunks,
    const EmbeddingSequence& seq, const SpeakerProfileSet& profiles,
    double resolution) {
  fs::create_directories(dir);
  const std::string profiles_path = (fs::path(dir) / "profiles.txt").string();
  {
    std::ofstream out(profiles_path);
    if (!out) throw ConfigError("cannot write " + profiles_path);
    WriteProfiles(profiles, out);
  }
  std::vector<ChunkRequest> requests;
  for (const Interval& chunk : chunks) {
    const fs::path stem = fs::path(dir) / ChunkStem(chunk);
    const std::string emb = stem.string() + ".emb";
    {
      std::ofstream out(emb);
      if (!out) throw ConfigError("cannot write " + emb);
      WriteEmbeddingsText(seq.Overlapping(chunk), out);
    }
    ChunkRequest req{stem.string() + ".req", stem.string() + ".scores"};
    WriteRequest(req.request_path, profiles.recording_id, chunk, resolution,
                 profiles_path, emb, req.output_path);
    requests.push_back(req);
  }
  return requests;
}

CommandScorer::CommandScorer(std::string command, std::string work_dir)
    : command_(std::move(command)), work_dir_(std::move(work_dir)) {}

ScoreBlock CommandScorer::Score(const Interval& chunk,
                                const EmbeddingSequence& chunk_seq,
                                const SpeakerProfileSet& profiles,
                                double resolution) const {
  ChunkRequest req =
      EmitChunkRequests(work_dir_, {chunk}, chunk_seq, profiles, resolution)
          .front();
  std::error_code ignored;
  fs::remove(req.output_path, ignored);
  const std::string cmd = command_ + " " + ShellQuote(req.request_path);
  int status = std::system(cmd.c_str());
  if (status != 0) {
    throw ConfigError("scorer command failed (status " +
                      std::to_string(status) + "): " + cmd);
  }
  return ReadBlockFile(req.output_path, chunk, resolution, profiles.size());
}

DirectoryScorer::DirectoryScorer(std::string dir) : dir_(std::move(dir)) {}

ScoreBlock DirectoryScorer::Score(const Interval& chunk,
                                  const EmbeddingSequence& /*chunk_seq*/,
                                  const SpeakerProfileSet& profiles,
                                  double resolution) const {
  const std::string path =
      (fs::path(dir_) / (ChunkStem(chunk) + ".scores")).string();
  return ReadBlockFile(path, chunk, resolution, profiles.size());
}

}  // namespace diartk
