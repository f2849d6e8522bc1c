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

#include "diartk/pipeline.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include "glog/logging.h"
#include "json.hpp"

#include "diartk/errors.h"
#include "diartk/fusion.h"
#include "diartk/scorer_io.h"
#include "diartk/text_util.h"

namespace diartk {

namespace fs = std::filesystem;

namespace {

const std::regex kAhcSection("ahc[0-9]*");
const std::regex kTsvadSection("tsvad[0-9]+");

const std::set<std::string> kDetectorKeys = {"weights", "onset", "offset",
                                             "min_on", "min_off"};
const std::set<std::string> kAhcKeys = {"segment_thr", "stop_thr",
                                        "speaker_thr", "long_cluster_min",
                                        "linkage", "embeddings"};
const std::set<std::string> kTsvadKeys = {"scorer",   "chunk_len", "stride",
                                          "resolution", "capacity", "threshold",
                                          "min_on",   "min_off",   "embeddings"};
const std::map<std::string, std::set<std::string>> kFixedSections = {
    {"pipeline", {"manifest", "output_dir", "cache"}},
    {"vad", kDetectorKeys},
    {"osd", {"enabled", "weights", "onset", "offset", "min_on", "min_off"}},
    {"segment", {"window", "shift"}},
    {"tsvad", kTsvadKeys},
    {"fusion", {"enabled", "rank_exponent"}},
    {"score", {"collar", "ignore_overlaps", "uem"}},
};

// "ahc2" sorts before "ahc10"; a bare "ahc" comes first.
bool SectionLess(const std::string& a, const std::string& b) {
  auto number = [](const std::string& s) {
    std::size_t i = s.find_first_of("0123456789");
    return i == std::string::npos ? -1L : std::stol(s.substr(i));
  };
  return number(a) < number(b);
}

DetectorStage ReadDetector(const Config& cfg, const std::string& section) {
  DetectorStage stage;
  auto w = cfg.GetDoubleList(section + ".weights");
  if (!w.empty()) stage.weights = w;
  stage.binarize.onset = cfg.GetDouble(section + ".onset", stage.binarize.onset);
  stage.binarize.offset = cfg.GetDouble(section + ".offset", stage.binarize.offset);
  stage.binarize.min_on = cfg.GetDouble(section + ".min_on", stage.binarize.min_on);
  stage.binarize.min_off = cfg.GetDouble(section + ".min_off", stage.binarize.min_off);
  return stage;
}

std::string DetectorKey(const DetectorStage& s) {
  std::ostringstream k;
  k << s.binarize.onset << "/" << s.binarize.offset << "/" << s.binarize.min_on
    << "/" << s.binarize.min_off << "/";
  if (s.weights) {
    for (double w : *s.weights) k << w << ",";
  }
  return k.str();
}

std::string ReadWholeFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteWholeFile(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
  }
  fs::rename(tmp, path);
}

fs::path ResolvePath(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<std::string> ResolveList(const fs::path& base,
                                     const std::string& field) {
  std::vector<std::string> out;
  for (const std::string& item : Split(field, ',')) {
    std::string t = Trim(item);
    if (!t.empty()) out.push_back(ResolvePath(base, t).string());
  }
  return out;
}

// Parses then re-serializes, so that cached and freshly computed stage
// results are indistinguishable downstream.
Annotation FromRttmText(const std::string& text, const std::string& rec) {
  std::istringstream in(text);
  for (Annotation& a : ParseRttm(in)) {
    if (a.recording_id() == rec) return a;
  }
  return Annotation(rec);
}

class StageRunner {
 public:
  StageRunner(const PipelineConfig& cfg, fs::path rec_dir)
      : cache_dir_(fs::path(cfg.output_dir) / "cache"),
        use_cache_(cfg.cache),
        rec_dir_(std::move(rec_dir)) {}

  // Returns the stage text, from cache when present, and writes it to the
  // recording directory under `name`.
  std::string Run(const std::string& name, const std::string& key_material,
                  const std::function<std::string()>& compute) {
    const std::string key = Sha256Hex(key_material);
    const fs::path cached = cache_dir_ / (key + ".txt");
    std::string text;
    if (use_cache_ && fs::exists(cached)) {
      text = ReadWholeFile(cached.string());
    } else {
      text = compute();
      if (use_cache_) WriteWholeFile(cached.string(), text);
    }
    WriteWholeFile((rec_dir_ / name).string(), text);
    return text;
  }

 private:
  fs::path cache_dir_;
  bool use_cache_;
  fs::path rec_dir_;
};

Timeline DetectRegions(const std::vector<std::string>& paths,
                       const DetectorStage& stage, const std::string& rec) {
  std::vector<FrameScoreStream> streams;
  for (const std::string& p : paths) {
    streams.push_back(ReadFrameScoresFile(p));
    if (streams.back().recording_id != rec) {
      throw ConfigError(p + " holds scores for " + streams.back().recording_id +
                        ", expected " + rec);
    }
  }
  return Binarize(FuseStreams(streams, stage.weights), stage.binarize);
}

std::string TimelineText(const Timeline& tl) {
  std::ostringstream out;
  WriteTimeline(tl, out);
  return out.str();
}

std::string FusionKey(const std::string& rec, double exponent,
                      const std::vector<std::string>& inputs) {
  std::string key = "dover|" + rec + "|" + FormatDouble(exponent);
  for (const std::string& t : inputs) key += "|" + Sha256Hex(t);
  return key;
}

}  // namespace

std::string Sha256Hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw InternalError("SHA-256 failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::vector<ManifestEntry> ReadManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path);
  const fs::path base = fs::path(path).parent_path();
  std::vector<ManifestEntry> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty() || Trim(line).starts_with("#")) continue;
    std::vector<std::string> fields = Split(line, '\t');
    if (fields.size() < 4 || fields.size() > 5) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected 4 or 5 tab-separated fields");
    }
    ManifestEntry e;
    e.recording_id = Trim(fields[0]);
    e.vad_paths = ResolveList(base, fields[1]);
    e.embedding_paths = ResolveList(base, fields[2]);
    e.osd_paths = ResolveList(base, fields[3]);
    if (fields.size() == 5 && !Trim(fields[4]).empty()) {
      e.ref_path = ResolvePath(base, Trim(fields[4])).string();
    }
    if (!IsValidLabel(e.recording_id) || e.vad_paths.empty() ||
        e.embedding_paths.empty()) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": recording id, VAD scores and embeddings are required");
    }
    if (!seen.insert(e.recording_id).second) {
      throw ConfigError(path + ": duplicate recording " + e.recording_id);
    }
    out.push_back(std::move(e));
  }
  return out;
}

void WriteManifest(const std::vector<ManifestEntry>& entries,
                   const std::string& path) {
  std::ostringstream out;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
  };
  for (const ManifestEntry& e : entries) {
    out << e.recording_id << "\t" << join(e.vad_paths) << "\t"
        << join(e.embedding_paths) << "\t" << join(e.osd_paths);
    if (e.ref_path) out << "\t" << *e.ref_path;
    out << "\n";
  }
  WriteWholeFile(path, out.str());
}

PipelineConfig PipelineConfig::FromConfig(const Config& cfg) {
  for (const auto& [key, value] : cfg.values()) {
    const std::string section = key.substr(0, key.find('.'));
    const std::string field =
        key.find('.') == std::string::npos ? "" : key.substr(key.find('.') + 1);
    bool known = false;
    if (auto it = kFixedSections.find(section); it != kFixedSections.end()) {
      known = it->second.contains(field);
    } else if (std::regex_match(section, kAhcSection)) {
      known = kAhcKeys.contains(field);
    } else if (std::regex_match(section, kTsvadSection)) {
      known = kTsvadKeys.contains(field);
    }
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }

  PipelineConfig p;
  p.manifest = cfg.GetString("pipeline.manifest", "");
  p.output_dir = cfg.GetString("pipeline.output_dir", "");
  p.cache = cfg.GetBool("pipeline.cache", true);
  p.vad = ReadDetector(cfg, "vad");
  p.osd = ReadDetector(cfg, "osd");
  p.use_osd = cfg.GetBool("osd.enabled", true);
  p.segment_window = cfg.GetDouble("segment.window", kSegmentWindow);
  p.segment_shift = cfg.GetDouble("segment.shift", kSegmentShift);
  p.fusion = cfg.GetBool("fusion.enabled", true);
  p.rank_exponent = cfg.GetDouble("fusion.rank_exponent", kDefaultRankExponent);
  p.scoring.collar = cfg.GetDouble("score.collar", 0.25);
  p.scoring.score_overlaps = !cfg.GetBool("score.ignore_overlaps", false);
  if (cfg.Has("score.uem")) p.uem_path = cfg.GetString("score.uem", "");

  std::vector<std::string> ahc_sections, tsvad_sections;
  for (const std::string& s : cfg.Sections()) {
    if (std::regex_match(s, kAhcSection)) ahc_sections.push_back(s);
    if (std::regex_match(s, kTsvadSection)) tsvad_sections.push_back(s);
  }
  std::stable_sort(ahc_sections.begin(), ahc_sections.end(), SectionLess);
  std::stable_sort(tsvad_sections.begin(), tsvad_sections.end(), SectionLess);
  if (ahc_sections.empty()) ahc_sections.push_back("ahc1");

  for (const std::string& s : ahc_sections) {
    AhcSystem sys;
    sys.name = s;
    sys.cfg.segment_thr = cfg.GetDouble(s + ".segment_thr", sys.cfg.segment_thr);
    sys.cfg.stop_thr = cfg.GetDouble(s + ".stop_thr", sys.cfg.stop_thr);
    sys.cfg.speaker_thr = cfg.GetDouble(s + ".speaker_thr", sys.cfg.speaker_thr);
    sys.cfg.long_cluster_min =
        cfg.GetDouble(s + ".long_cluster_min", sys.cfg.long_cluster_min);
    sys.cfg.linkage = ParseLinkage(cfg.GetString(s + ".linkage", "average"));
    sys.embeddings = cfg.GetInt(s + ".embeddings", -1);
    p.ahc.push_back(sys);
  }

  TsvadConfig shared;
  auto read_tsvad = [&](const std::string& s, TsvadConfig base) {
    base.chunk_len = cfg.GetDouble(s + ".chunk_len", base.chunk_len);
    base.stride = cfg.GetDouble(s + ".stride", base.stride);
    base.resolution = cfg.GetDouble(s + ".resolution", base.resolution);
    base.capacity = cfg.GetInt(s + ".capacity", base.capacity);
    base.threshold = cfg.GetDouble(s + ".threshold", base.threshold);
    base.min_on = cfg.GetDouble(s + ".min_on", base.min_on);
    base.min_off = cfg.GetDouble(s + ".min_off", base.min_off);
    return base;
  };
  shared = read_tsvad("tsvad", shared);
  for (const std::string& s : tsvad_sections) {
    ScorerBinding b;
    b.name = s;
    b.cfg = read_tsvad(s, shared);
    b.embeddings = cfg.GetInt(s + ".embeddings", cfg.GetInt("tsvad.embeddings", -1));
    std::string scorer = cfg.GetString(s + ".scorer", cfg.GetString("tsvad.scorer", "toy"));
    if (scorer == "toy") {
      b.kind = "toy";
    } else if (scorer.starts_with("cmd:") && scorer.size() > 4) {
      b.kind = "cmd";
      b.command = scorer.substr(4);
    } else {
      throw ConfigError(s + ".scorer: expected 'toy' or 'cmd:<command>'");
    }
    p.scorers.push_back(b);
  }
  return p;
}

void PipelineConfig::Validate() const {
  if (manifest.empty()) throw ConfigError("pipeline.manifest is not set");
  if (output_dir.empty()) throw ConfigError("pipeline.output_dir is not set");
  if (ahc.empty()) throw ConfigError("at least one AHC system is required");
  if (vad.binarize.onset < vad.binarize.offset ||
      osd.binarize.onset < osd.binarize.offset) {
    throw ConfigError("onset threshold must not be below offset threshold");
  }
  if (!(segment_window > 0.0) || !(segment_shift > 0.0) ||
      segment_shift > segment_window) {
    throw ConfigError("segment.window/shift invalid");
  }
  for (const AhcSystem& s : ahc) s.cfg.Validate();
  for (const ScorerBinding& b : scorers) b.cfg.Validate();
  if (scoring.collar < 0.0) throw ConfigError("score.collar must be >= 0");
  if (uem_path && !fs::exists(*uem_path)) {
    throw ConfigError("missing UEM file " + *uem_path);
  }
  for (const ManifestEntry& e : ReadManifest(manifest)) {
    std::vector<std::string> files = e.vad_paths;
    files.insert(files.end(), e.embedding_paths.begin(), e.embedding_paths.end());
    if (use_osd) files.insert(files.end(), e.osd_paths.begin(), e.osd_paths.end());
    if (e.ref_path) files.push_back(*e.ref_path);
    for (const std::string& f : files) {
      if (!fs::exists(f)) {
        throw ConfigError("missing input for " + e.recording_id + ": " + f);
      }
    }
  }
}

std::vector<SystemSpec> PipelineSystems(const PipelineConfig& cfg) {
  std::vector<SystemSpec> out;
  for (const AhcSystem& s : cfg.ahc) {
    out.push_back({s.name, "AHC " + FormatDouble(s.cfg.segment_thr) + "/" +
                               FormatDouble(s.cfg.stop_thr) + "/" +
                               FormatDouble(s.cfg.speaker_thr)});
  }
  const std::size_t n_ahc = out.size();
  const bool fuse_ahc = cfg.fusion && n_ahc > 1;
  if (fuse_ahc) {
    out.push_back({"dover_ahc", "Dover-Lap (#1-" + std::to_string(n_ahc) + ")"});
  }
  const std::size_t seed_row = fuse_ahc ? out.size() : 1;
  for (const ScorerBinding& b : cfg.scorers) {
    out.push_back({b.name, "TSVAD " + b.kind + " chunk " +
                               FormatDouble(b.cfg.chunk_len) + "s"});
  }
  if (cfg.fusion && !cfg.scorers.empty()) {
    out.push_back({"dover_final", "Dover-Lap (#" + std::to_string(seed_row) +
                                      "-" + std::to_string(out.size()) + ")"});
  }
  return out;
}

RecordingOutcome ProcessRecording(const ManifestEntry& entry,
                                  const PipelineConfig& cfg) {
  RecordingOutcome outcome;
  outcome.recording_id = entry.recording_id;
  const std::string& rec = entry.recording_id;
  try {
    const fs::path dir = fs::path(cfg.output_dir) / "recordings" / rec;
    fs::create_directories(dir);
    StageRunner stages(cfg, dir);

    std::string vad_key = "speech|" + rec + "|" + DetectorKey(cfg.vad);
    for (const auto& p : entry.vad_paths) vad_key += "|" + Sha256Hex(ReadWholeFile(p));
    const std::string speech_text = stages.Run("speech.txt", vad_key, [&] {
      return TimelineText(DetectRegions(entry.vad_paths, cfg.vad, rec));
    });
    std::istringstream speech_in(speech_text);
    const Timeline speech = ParseTimeline(speech_in);

    std::string osd_text;
    if (cfg.use_osd && !entry.osd_paths.empty()) {
      std::string osd_key = "osd|" + rec + "|" + DetectorKey(cfg.osd) + "|" +
                            Sha256Hex(speech_text);
      for (const auto& p : entry.osd_paths) osd_key += "|" + Sha256Hex(ReadWholeFile(p));
      osd_text = stages.Run("osd.txt", osd_key, [&] {
        return TimelineText(
            DetectRegions(entry.osd_paths, cfg.osd, rec).Intersect(speech));
      });
    } else {
      osd_text = stages.Run("osd.txt", "osd|none", [] { return std::string(); });
    }
    std::istringstream osd_in(osd_text);
    const Timeline osd = ParseTimeline(osd_in);

    {
      std::ostringstream seg;
      for (const Interval& iv : UniformSegments(speech, cfg.segment_window,
                                                cfg.segment_shift)) {
        seg << FormatSeconds(iv.begin) << " " << FormatSeconds(iv.end) << "\n";
      }
      WriteWholeFile((dir / "segments.txt").string(), seg.str());
    }

    std::map<std::size_t, std::pair<EmbeddingSequence, std::string>> emb_cache;
    auto embeddings = [&](int requested, std::size_t k)
        -> const std::pair<EmbeddingSequence, std::string>& {
      const std::size_t n = entry.embedding_paths.size();
      std::size_t idx = requested >= 0 ? static_cast<std::size_t>(requested) : k % n;
      if (idx >= n) {
        throw ConfigError("embedding index " + std::to_string(idx) +
                          " out of range for " + rec);
      }
      auto it = emb_cache.find(idx);
      if (it == emb_cache.end()) {
        const std::string& path = entry.embedding_paths[idx];
        it = emb_cache
                 .emplace(idx, std::make_pair(ReadEmbeddingsFile(path, rec),
                                              Sha256Hex(ReadWholeFile(path))))
                 .first;
      }
      return it->second;
    };

    std::vector<std::string> texts;
    for (std::size_t k = 0; k < cfg.ahc.size(); ++k) {
      const AhcSystem& sys = cfg.ahc[k];
      const auto& [seq, seq_hash] = embeddings(sys.embeddings, k);
      std::ostringstream key;
      key << "ahc|" << rec << "|" << sys.cfg.segment_thr << "|" << sys.cfg.stop_thr
          << "|" << sys.cfg.speaker_thr << "|" << sys.cfg.long_cluster_min << "|"
          << LinkageName(sys.cfg.linkage) << "|" << Sha256Hex(speech_text) << "|"
          << Sha256Hex(osd_text) << "|" << seq_hash;
      texts.push_back(stages.Run(sys.name + ".rttm", key.str(), [&] {
        return WriteRttm({DiarizeAhc(speech, seq, osd, sys.cfg)});
      }));
    }

    auto fuse = [&](const std::string& name, const std::vector<std::string>& inputs) {
      return stages.Run(name + ".rttm", FusionKey(rec, cfg.rank_exponent, inputs), [&] {
        std::vector<Annotation> hyps;
        for (const std::string& t : inputs) hyps.push_back(FromRttmText(t, rec));
        return WriteRttm({DoverLap(hyps, std::nullopt, cfg.rank_exponent)});
      });
    };

    std::string seed_text = texts.front();
    if (cfg.fusion && cfg.ahc.size() > 1) {
      seed_text = fuse("dover_ahc", texts);
      texts.push_back(seed_text);
    }
    const Annotation seed = FromRttmText(seed_text, rec);

    std::vector<std::string> final_inputs{seed_text};
    for (std::size_t k = 0; k < cfg.scorers.size(); ++k) {
      const ScorerBinding& b = cfg.scorers[k];
      const auto& [seq, seq_hash] = embeddings(b.embeddings, k);
      std::ostringstream key;
      key << "tsvad|" << rec << "|" << b.kind << "|" << b.command << "|"
          << b.cfg.chunk_len << "|" << b.cfg.stride << "|" << b.cfg.resolution
          << "|" << b.cfg.capacity << "|" << b.cfg.threshold << "|" << b.cfg.min_on
          << "|" << b.cfg.min_off << "|" << Sha256Hex(speech_text) << "|"
          << Sha256Hex(seed_text) << "|" << seq_hash;
      std::string text = stages.Run(b.name + ".rttm", key.str(), [&] {
        std::unique_ptr<FrameScorer> scorer;
        if (b.kind == "cmd") {
          scorer = std::make_unique<CommandScorer>(
              b.command, (dir / (b.name + "_requests")).string());
        } else {
          scorer = std::make_unique<CosineScorer>();
        }
        return WriteRttm({DiarizeTsvad(speech, seq, seed, *scorer, b.cfg)});
      });
      texts.push_back(text);
      final_inputs.push_back(text);
    }
    if (cfg.fusion && !cfg.scorers.empty()) {
      texts.push_back(fuse("dover_final", final_inputs));
    }

    for (const std::string& t : texts) outcome.systems.push_back(FromRttmText(t, rec));
    if (entry.ref_path) {
      for (Annotation& a : ReadRttmFile(*entry.ref_path)) {
        if (a.recording_id() == rec) outcome.ref = std::move(a);
      }
      if (!outcome.ref) outcome.ref = Annotation(rec);
    }
    outcome.ok = true;
  } catch (const std::exception& e) {
    outcome.ok = false;
    outcome.error = e.what();
    LOG(ERROR) << rec << ": " << e.what();
  }
  return outcome;
}

std::string FormatDerTable(const std::vector<DerRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(4) << "#" << std::setw(14) << "System"
      << std::setw(28) << "Description" << std::right << std::setw(8) << "MISS%"
      << std::setw(8) << "FA%" << std::setw(8) << "CONF%" << std::setw(8)
      << "DER%" << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const DERBreakdown& b = rows[i].breakdown;
    out << std::left << std::setw(4) << (i + 1) << std::setw(14) << rows[i].name
        << std::setw(28) << rows[i].description << std::right << std::fixed
        << std::setprecision(2);
    if (b.total_reference == 0) {
      out << std::setw(8) << "-" << std::setw(8) << "-" << std::setw(8) << "-"
          << std::setw(8) << "-" << "\n";
      continue;
    }
    out << std::setw(8) << 100.0 * b.miss_rate() << std::setw(8)
        << 100.0 * b.false_alarm_rate() << std::setw(8)
        << 100.0 * b.confusion_rate() << std::setw(8) << 100.0 * b.der() << "\n";
  }
  return out.str();
}

std::string DerJson(const std::vector<DerRow>& rows, const ScoringOptions& opts) {
  nlohmann::ordered_json j;
  j["collar"] = opts.collar;
  j["score_overlaps"] = opts.score_overlaps;
  j["systems"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const DERBreakdown& b = rows[i].breakdown;
    nlohmann::ordered_json row;
    row["index"] = i + 1;
    row["name"] = rows[i].name;
    row["description"] = rows[i].description;
    row["miss"] = TicksToSeconds(b.miss);
    row["false_alarm"] = TicksToSeconds(b.false_alarm);
    row["confusion"] = TicksToSeconds(b.confusion);
    row["total_reference"] = TicksToSeconds(b.total_reference);
    if (b.total_reference > 0) {
      row["der"] = b.der();
    } else {
      row["der"] = nullptr;
    }
    j["systems"].push_back(row);
  }
  return j.dump(2) + "\n";
}

int RunPipeline(const PipelineConfig& cfg, int jobs) {
  const std::vector<ManifestEntry> manifest = ReadManifest(cfg.manifest);
  fs::create_directories(fs::path(cfg.output_dir) / "cache");
  std::vector<std::pair<std::string, Timeline>> uem;
  if (cfg.uem_path) uem = ReadUemFile(*cfg.uem_path);

  std::vector<RecordingOutcome> outcomes(manifest.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < manifest.size(); i = next++) {
      outcomes[i] = ProcessRecording(manifest[i], cfg);
    }
  };
  const int n_workers = std::max(1, std::min<int>(jobs, static_cast<int>(manifest.size())));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  const std::vector<SystemSpec> systems = PipelineSystems(cfg);
  int status = 0;
  for (const RecordingOutcome& o : outcomes) {
    if (!o.ok) status = 1;
  }
  for (std::size_t s = 0; s < systems.size(); ++s) {
    std::vector<Annotation> all;
    for (const RecordingOutcome& o : outcomes) {
      if (o.ok) all.push_back(o.systems[s]);
    }
    WriteWholeFile((fs::path(cfg.output_dir) / (systems[s].name + ".rttm")).string(),
                   WriteRttm(all));
  }

  std::vector<DerRow> rows;
  bool any_ref = false;
  for (std::size_t s = 0; s < systems.size(); ++s) {
    DerRow row{systems[s].name, systems[s].description, {}};
    for (const RecordingOutcome& o : outcomes) {
      if (!o.ok || !o.ref) continue;
      any_ref = true;
      ScoringOptions opts = cfg.scoring;
      if (cfg.uem_path) opts.uem = UemFor(uem, o.recording_id);
      row.breakdown += ComputeDer(*o.ref, o.systems[s], opts);
    }
    rows.push_back(row);
  }
  if (any_ref) {
    const std::string table = FormatDerTable(rows);
    WriteWholeFile((fs::path(cfg.output_dir) / "der_table.txt").string(), table);
    WriteWholeFile((fs::path(cfg.output_dir) / "der.json").string(),
                   DerJson(rows, cfg.scoring));
    std::cout << table;
  }
  for (const RecordingOutcome& o : outcomes) {
    if (!o.ok) std::cerr << "FAILED " << o.recording_id << ": " << o.error << "\n";
  }
  return status;
}

}  // namespace diartk
