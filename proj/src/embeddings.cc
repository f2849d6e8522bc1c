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

#include "diartk/embeddings.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "diartk/errors.h"
#include "diartk/text_util.h"

namespace diartk {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', 'D'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void PutLittleEndian(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T GetLittleEndian(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw ParseError("truncated embedding file");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

EmbeddingSequence ReadBinary(std::istream& in, const std::string& rec) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw ParseError("bad embedding file magic");
  }
  auto version = GetLittleEndian<std::uint32_t>(in);
  if (version != kVersion) {
    throw ParseError("unsupported embedding file version " +
                     std::to_string(version));
  }
  auto dim = GetLittleEndian<std::uint32_t>(in);
  auto count = GetLittleEndian<std::uint32_t>(in);
  if (dim == 0) throw ParseError("embedding dimension must be positive");
  EmbeddingSequence seq{rec, static_cast<int>(dim), {}};
  seq.entries.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    double onset = GetLittleEndian<double>(in);
    double duration = GetLittleEndian<double>(in);
    if (!(onset >= 0.0) || !(duration > 0.0)) {
      throw ParseError("invalid segment interval in record " +
                       std::to_string(i));
    }
    Eigen::VectorXd v(dim);
    for (std::uint32_t d = 0; d < dim; ++d) v(d) = GetLittleEndian<float>(in);
    seq.entries.push_back(
        {{SecondsToTicks(onset), SecondsToTicks(onset + duration)},
         std::move(v)});
  }
  return seq;
}

EmbeddingSequence ReadText(std::istream& in, const std::string& rec) {
  EmbeddingSequence seq{rec, 0, {}};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> fields = SplitWhitespace(line);
    if (fields.empty() || fields[0].starts_with("#")) continue;
    if (fields.size() < 3) {
      throw ParseError("expected 'onset duration v1 ... vD'", line_no);
    }
    int dim = static_cast<int>(fields.size()) - 2;
    if (seq.dim == 0) seq.dim = dim;
    if (dim != seq.dim) throw ParseError("inconsistent dimension", line_no);
    double onset = 0, duration = 0;
    if (!ParseDouble(fields[0], &onset) || !ParseDouble(fields[1], &duration) ||
        onset < 0 || duration <= 0) {
      throw ParseError("invalid segment interval", line_no);
    }
    Eigen::VectorXd v(dim);
    for (int d = 0; d < dim; ++d) {
      if (!ParseDouble(fields[d + 2], &v(d))) {
        throw ParseError("non-numeric embedding value", line_no);
      }
    }
    seq.entries.push_back(
        {{SecondsToTicks(onset), SecondsToTicks(onset + duration)},
         std::move(v)});
  }
  return seq;
}

}  // namespace

Eigen::VectorXd UnitVector(const Eigen::VectorXd& v) {
  double norm = v.norm();
  if (!(norm > 0.0)) throw ArgumentError("cannot normalize a zero vector");
  return v / norm;
}

Eigen::VectorXd MeanDirection(const std::vector<const Eigen::VectorXd*>& vs) {
  if (vs.empty()) throw ArgumentError("mean of no vectors");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(vs.front()->size());
  for (const Eigen::VectorXd* v : vs) sum += *v;
  return UnitVector(sum);
}

void EmbeddingSequence::Normalize() {
  for (EmbeddingEntry& e : entries) {
    if (e.vector.size() != dim) {
      throw ArgumentError("embedding of dimension " +
                          std::to_string(e.vector.size()) + " in a " +
                          std::to_string(dim) + "-dim sequence");
    }
    e.vector = UnitVector(e.vector);
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const EmbeddingEntry& a, const EmbeddingEntry& b) {
                     return a.span.begin < b.span.begin;
                   });
}

EmbeddingSequence EmbeddingSequence::Overlapping(const Interval& window) const {
  EmbeddingSequence out{recording_id, dim, {}};
  for (const EmbeddingEntry& e : entries) {
    if (OverlapDuration(e.span, window) > 0) out.entries.push_back(e);
  }
  return out;
}

EmbeddingSequence EmbeddingSequence::Overlapping(const Timeline& region) const {
  EmbeddingSequence out{recording_id, dim, {}};
  for (const EmbeddingEntry& e : entries) {
    if (region.OverlapWith(e.span) > 0) out.entries.push_back(e);
  }
  return out;
}

std::vector<Interval> UniformSegments(const Timeline& speech, double window,
                                      double shift) {
  if (!(window > 0.0) || !(shift > 0.0) || shift > window) {
    throw ArgumentError("segmentation needs window > 0 and 0 < shift <= window");
  }
  const Ticks win = SecondsToTicks(window);
  const Ticks hop = SecondsToTicks(shift);
  std::vector<Interval> out;
  for (const Interval& iv : speech.intervals()) {
    if (iv.duration() < win) {
      out.push_back(iv);
      continue;
    }
    Ticks start = iv.begin;
    Ticks last_end = iv.begin;
    for (; start + win <= iv.end; start += hop) {
      out.push_back({start, start + win});
      last_end = start + win;
    }
    if (iv.end - last_end >= hop) out.push_back({iv.end - win, iv.end});
  }
  return out;
}

SimilarityMatrix CosineMatrix(const EmbeddingSequence& seq) {
  if (seq.empty()) throw ArgumentError("cosine matrix of an empty sequence");
  const auto n = static_cast<Eigen::Index>(seq.size());
  Eigen::MatrixXd stacked(seq.dim, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    stacked.col(i) = seq.entries[static_cast<std::size_t>(i)].vector;
  }
  SimilarityMatrix sim;
  sim.values = stacked.transpose() * stacked;
  for (Eigen::Index i = 0; i < n; ++i) {
    sim.values(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double v = std::clamp(sim.values(i, j), -1.0, 1.0);
      sim.values(i, j) = v;
      sim.values(j, i) = v;
    }
  }
  return sim;
}

EmbeddingSequence MergeConsecutive(const EmbeddingSequence& seq,
                                   const SimilarityMatrix& sim,
                                   double segment_thr, double max_gap) {
  if (sim.n() != seq.size()) {
    throw InternalError("similarity matrix does not match the sequence");
  }
  EmbeddingSequence out{seq.recording_id, seq.dim, {}};
  if (seq.empty()) return out;
  const Ticks gap_limit = SecondsToTicks(max_gap);

  std::size_t first = 0;
  Interval hull = seq.entries[0].span;
  Eigen::VectorXd sum = seq.entries[0].vector;
  std::size_t members = 1;

  auto flush = [&] {
    out.entries.push_back({hull, UnitVector(sum)});
  };

  for (std::size_t i = 1; i < seq.size(); ++i) {
    const EmbeddingEntry& next = seq.entries[i];
    if (next.vector.size() != seq.dim) {
      throw InternalError("embedding dimension mismatch");
    }
    bool adjacent = next.span.begin - hull.end < gap_limit;
    double similarity = members == 1 ? sim(first, i)
                                     : UnitVector(sum).dot(next.vector);
    if (adjacent && similarity > segment_thr) {
      hull.end = std::max(hull.end, next.span.end);
      sum += next.vector;
      ++members;
      continue;
    }
    flush();
    first = i;
    hull = next.span;
    sum = next.vector;
    members = 1;
  }
  flush();
  return out;
}

EmbeddingSequence ReadEmbeddings(std::istream& in,
                                 const std::string& recording_id) {
  char head[4] = {0, 0, 0, 0};
  in.read(head, 4);
  std::streamsize got = in.gcount();
  in.clear();
  in.seekg(-got, std::ios::cur);
  EmbeddingSequence seq = (got == 4 && std::memcmp(head, kMagic, 4) == 0)
                              ? ReadBinary(in, recording_id)
                              : ReadText(in, recording_id);
  seq.Normalize();
  return seq;
}

EmbeddingSequence ReadEmbeddingsFile(const std::string& path,
                                     const std::string& recording_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open embedding file " + path);
  try {
    return ReadEmbeddings(in, recording_id);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void WriteEmbeddingsBinary(const EmbeddingSequence& seq, std::ostream& out) {
  out.write(kMagic, 4);
  PutLittleEndian<std::uint32_t>(out, kVersion);
  PutLittleEndian<std::uint32_t>(out, static_cast<std::uint32_t>(seq.dim));
  PutLittleEndian<std::uint32_t>(out,
                                 static_cast<std::uint32_t>(seq.size()));
  for (const EmbeddingEntry& e : seq.entries) {
    PutLittleEndian<double>(out, TicksToSeconds(e.span.begin));
    PutLittleEndian<double>(out, TicksToSeconds(e.span.duration()));
    for (Eigen::Index d = 0; d < e.vector.size(); ++d) {
      PutLittleEndian<float>(out, static_cast<float>(e.vector(d)));
    }
  }
}

void WriteEmbeddingsText(const EmbeddingSequence& seq, std::ostream& out) {
  for (const EmbeddingEntry& e : seq.entries) {
    out << FormatDouble(TicksToSeconds(e.span.begin)) << " "
        << FormatDouble(TicksToSeconds(e.span.duration()));
    for (Eigen::Index d = 0; d < e.vector.size(); ++d) {
      out << " " << FormatDouble(e.vector(d));
    }
    out << "\n";
  }
}

void WriteEmbeddingsFile(const EmbeddingSequence& seq,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  WriteEmbeddingsBinary(seq, out);
}

}  // namespace diartk
