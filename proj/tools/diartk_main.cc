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
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "glog/logging.h"

#include "diartk/ahc.h"
#include "diartk/config.h"
#include "diartk/embeddings.h"
#include "diartk/errors.h"
#include "diartk/frame_scores.h"
#include "diartk/fusion.h"
#include "diartk/metrics.h"
#include "diartk/pipeline.h"
#include "diartk/scorer_io.h"
#include "diartk/simgen.h"
#include "diartk/text_util.h"
#include "diartk/timeline.h"
#include "diartk/tsvad.h"

namespace fs = std::filesystem;
using namespace diartk;  // NOLINT

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;

std::ostream* OpenOutput(const std::string& path, std::ofstream* file) {
  if (path.empty() || path == "-") return &std::cout;
  file->open(path);
  if (!*file) throw ConfigError("cannot write " + path);
  return file;
}

// Recording id of a single-recording RTTM file.
std::string SoleRecording(const std::vector<Annotation>& anns,
                          const std::string& path) {
  if (anns.size() != 1) {
    throw ArgumentError(path + " must hold exactly one recording");
  }
  return anns.front().recording_id();
}

Annotation ReadSingleRttm(const std::string& path, const std::string& rec) {
  std::vector<Annotation> anns = ReadRttmFile(path);
  if (rec.empty()) {
    if (anns.empty()) throw ArgumentError(path + " holds no turns");
    SoleRecording(anns, path);
    return anns.front();
  }
  for (Annotation& a : anns) {
    if (a.recording_id() == rec) return a;
  }
  return Annotation(rec);
}

struct GlobalFlags {
  std::string config_path;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool verbose = false;
  Config config;
};

BinarizeOptions DetectorDefaults(const Config& cfg, const std::string& section) {
  BinarizeOptions o;
  o.onset = cfg.GetDouble(section + ".onset", o.onset);
  o.offset = cfg.GetDouble(section + ".offset", o.offset);
  o.min_on = cfg.GetDouble(section + ".min_on", o.min_on);
  o.min_off = cfg.GetDouble(section + ".min_off", o.min_off);
  return o;
}

}  // namespace

int main(int argc, char* argv[]) {
  google::InitGoogleLogging(argv[0]);
  FLAGS_logtostderr = true;

  CLI::App app{"diartk: speaker diarization toolkit"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--config", g.config_path, "config file with dotted keys");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", g.verbose, "verbose logging");

  // fuse-scores
  auto* fuse = app.add_subcommand("fuse-scores", "weighted mean of score streams");
  std::vector<std::string> fuse_inputs;
  std::vector<double> fuse_weights;
  std::string fuse_out;
  fuse->add_option("inputs", fuse_inputs, "FRAMESCORES files")->required();
  fuse->add_option("--weights", fuse_weights, "one weight per input")->delimiter(',');
  fuse->add_option("-o,--output", fuse_out, "output file (default stdout)");

  // binarize
  auto* binarize = app.add_subcommand("binarize", "threshold scores into regions");
  std::vector<std::string> bin_inputs;
  std::string bin_stage = "vad", bin_out;
  std::optional<double> bin_onset, bin_offset, bin_min_on, bin_min_off;
  binarize->add_option("inputs", bin_inputs, "FRAMESCORES files, fused first")
      ->required();
  binarize->add_option("--stage", bin_stage, "config section for defaults")
      ->check(CLI::IsMember({"vad", "osd"}));
  binarize->add_option("--onset", bin_onset);
  binarize->add_option("--offset", bin_offset);
  binarize->add_option("--min-on", bin_min_on);
  binarize->add_option("--min-off", bin_min_off);
  binarize->add_option("-o,--output", bin_out, "timeline file (default stdout)");

  // segment
  auto* segment = app.add_subcommand("segment", "uniform segments over speech");
  std::string seg_speech, seg_out;
  std::optional<double> seg_window, seg_shift;
  segment->add_option("--speech", seg_speech, "speech timeline")->required();
  segment->add_option("--window", seg_window);
  segment->add_option("--shift", seg_shift);
  segment->add_option("-o,--output", seg_out);

  // ahc
  auto* ahc = app.add_subcommand("ahc", "clustering diarization");
  std::string ahc_speech, ahc_emb, ahc_osd, ahc_rec, ahc_out, ahc_section = "ahc1";
  std::optional<int> ahc_preset;
  std::optional<double> ahc_seg, ahc_stop, ahc_spk, ahc_long;
  std::optional<std::string> ahc_linkage;
  ahc->add_option("--speech", ahc_speech)->required();
  ahc->add_option("--embeddings", ahc_emb)->required();
  ahc->add_option("--osd", ahc_osd, "overlap timeline");
  ahc->add_option("--recording", ahc_rec)->required();
  ahc->add_option("--preset", ahc_preset, "threshold row 1, 2 or 3")
      ->check(CLI::Range(1, 3));
  ahc->add_option("--section", ahc_section, "config section for defaults");
  ahc->add_option("--segment-thr", ahc_seg);
  ahc->add_option("--stop-thr", ahc_stop);
  ahc->add_option("--speaker-thr", ahc_spk);
  ahc->add_option("--long-cluster-min", ahc_long);
  ahc->add_option("--linkage", ahc_linkage)
      ->check(CLI::IsMember({"average", "complete", "single"}));
  ahc->add_option("-o,--output", ahc_out);

  // tsvad
  auto* tsvad = app.add_subcommand("tsvad", "profile-conditioned re-diarization");
  std::string ts_speech, ts_emb, ts_init, ts_out, ts_scorer = "toy";
  std::string ts_emit, ts_scores;
  std::optional<double> ts_chunk, ts_stride, ts_thr, ts_min_on, ts_min_off;
  tsvad->add_option("--speech", ts_speech)->required();
  tsvad->add_option("--embeddings", ts_emb)->required();
  tsvad->add_option("--init", ts_init, "initial diarization RTTM")->required();
  tsvad->add_option("--scorer", ts_scorer, "toy or cmd:<command>");
  tsvad->add_option("--emit-requests", ts_emit, "write chunk requests and exit");
  tsvad->add_option("--scores-dir", ts_scores, "read chunk_*.scores blocks");
  tsvad->add_option("--chunk-len", ts_chunk);
  tsvad->add_option("--stride", ts_stride);
  tsvad->add_option("--threshold", ts_thr);
  tsvad->add_option("--min-on", ts_min_on);
  tsvad->add_option("--min-off", ts_min_off);
  tsvad->add_option("-o,--output", ts_out);

  // dover-lap
  auto* dover = app.add_subcommand("dover-lap", "fuse diarization hypotheses");
  std::vector<std::string> dover_inputs;
  std::vector<double> dover_weights;
  std::optional<double> dover_exp;
  std::string dover_out;
  dover->add_option("inputs", dover_inputs, "RTTM files")->required();
  dover->add_option("--weights", dover_weights)->delimiter(',');
  dover->add_option("--rank-exponent", dover_exp);
  dover->add_option("-o,--output", dover_out);

  // score
  auto* score = app.add_subcommand("score", "diarization error rate");
  std::string sc_ref, sc_uem, sc_json;
  std::vector<std::string> sc_hyps;
  std::optional<double> sc_collar;
  bool sc_ignore = false;
  score->add_option("--ref", sc_ref)->required();
  score->add_option("--hyp", sc_hyps, "one or more hypothesis RTTMs")->required();
  score->add_option("--collar", sc_collar);
  score->add_flag("--ignore-overlaps", sc_ignore);
  score->add_option("--uem", sc_uem);
  score->add_option("--json", sc_json, "also write the JSON summary here");

  // simgen
  auto* simgen = app.add_subcommand("simgen", "synthetic recordings");
  SimConfig sim;
  std::string sim_out, sim_prefix = "sim";
  int sim_count = 0, sim_min_spk = 2, sim_max_spk = 5;
  std::optional<double> sim_within_cos;
  simgen->add_option("-o,--output", sim_out, "output directory")->required();
  simgen->add_option("--seed", sim.seed);
  simgen->add_option("--speakers", sim.n_speakers);
  simgen->add_option("--duration", sim.duration);
  simgen->add_option("--overlap-prob", sim.overlap_prob);
  simgen->add_option("--dim", sim.embedding_dim);
  simgen->add_option("--within-noise", sim.within_noise);
  simgen->add_option("--within-cosine", sim_within_cos,
                     "set within-noise from a target within-speaker cosine");
  simgen->add_option("--score-noise", sim.score_noise);
  simgen->add_option("--recordings", sim_count,
                     "write a corpus of N recordings plus manifest.tsv");
  simgen->add_option("--min-speakers", sim_min_spk);
  simgen->add_option("--max-speakers", sim_max_spk);
  simgen->add_option("--prefix", sim_prefix, "recording id prefix");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "run every stage over a manifest");
  std::string pl_manifest, pl_out;
  pipeline->add_option("--manifest", pl_manifest, "overrides pipeline.manifest");
  pipeline->add_option("-o,--output", pl_out, "overrides pipeline.output_dir");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  if (g.verbose) FLAGS_v = 1;

  try {
    if (!g.config_path.empty()) g.config = Config::ReadFile(g.config_path);
    const Config& cfg = g.config;

    if (*fuse) {
      std::vector<FrameScoreStream> streams;
      for (const auto& p : fuse_inputs) streams.push_back(ReadFrameScoresFile(p));
      std::optional<std::vector<double>> w;
      if (!fuse_weights.empty()) w = fuse_weights;
      std::ofstream f;
      WriteFrameScores(FuseStreams(streams, w), *OpenOutput(fuse_out, &f));
    } else if (*binarize) {
      std::vector<FrameScoreStream> streams;
      for (const auto& p : bin_inputs) streams.push_back(ReadFrameScoresFile(p));
      std::optional<std::vector<double>> w;
      auto cw = cfg.GetDoubleList(bin_stage + ".weights");
      if (!cw.empty()) w = cw;
      BinarizeOptions o = DetectorDefaults(cfg, bin_stage);
      if (bin_onset) o.onset = *bin_onset;
      if (bin_offset) o.offset = *bin_offset;
      if (bin_min_on) o.min_on = *bin_min_on;
      if (bin_min_off) o.min_off = *bin_min_off;
      std::ofstream f;
      WriteTimeline(Binarize(FuseStreams(streams, w), o), *OpenOutput(bin_out, &f));
    } else if (*segment) {
      double window = seg_window.value_or(cfg.GetDouble("segment.window", kSegmentWindow));
      double shift = seg_shift.value_or(cfg.GetDouble("segment.shift", kSegmentShift));
      std::ofstream f;
      std::ostream& out = *OpenOutput(seg_out, &f);
      for (const Interval& iv :
           UniformSegments(ReadTimelineFile(seg_speech), window, shift)) {
        out << FormatSeconds(iv.begin) << " " << FormatSeconds(iv.end) << "\n";
      }
    } else if (*ahc) {
      AhcConfig c;
      if (ahc_preset) {
        c = *ahc_preset == 1 ? kAhc1 : *ahc_preset == 2 ? kAhc2 : kAhc3;
      } else {
        c.segment_thr = cfg.GetDouble(ahc_section + ".segment_thr", c.segment_thr);
        c.stop_thr = cfg.GetDouble(ahc_section + ".stop_thr", c.stop_thr);
        c.speaker_thr = cfg.GetDouble(ahc_section + ".speaker_thr", c.speaker_thr);
        c.long_cluster_min =
            cfg.GetDouble(ahc_section + ".long_cluster_min", c.long_cluster_min);
        c.linkage = ParseLinkage(cfg.GetString(ahc_section + ".linkage", "average"));
      }
      if (ahc_seg) c.segment_thr = *ahc_seg;
      if (ahc_stop) c.stop_thr = *ahc_stop;
      if (ahc_spk) c.speaker_thr = *ahc_spk;
      if (ahc_long) c.long_cluster_min = *ahc_long;
      if (ahc_linkage) c.linkage = ParseLinkage(*ahc_linkage);
      c.Validate();
      Timeline speech = ReadTimelineFile(ahc_speech);
      Timeline osd = ahc_osd.empty() ? Timeline() : ReadTimelineFile(ahc_osd);
      EmbeddingSequence seq = ReadEmbeddingsFile(ahc_emb, ahc_rec);
      std::ofstream f;
      WriteRttm({DiarizeAhc(speech, seq, osd, c)}, *OpenOutput(ahc_out, &f));
    } else if (*tsvad) {
      TsvadConfig c;
      c.chunk_len = ts_chunk.value_or(cfg.GetDouble("tsvad.chunk_len", c.chunk_len));
      c.stride = ts_stride.value_or(cfg.GetDouble("tsvad.stride", c.stride));
      c.threshold = ts_thr.value_or(cfg.GetDouble("tsvad.threshold", c.threshold));
      c.min_on = ts_min_on.value_or(cfg.GetDouble("tsvad.min_on", c.min_on));
      c.min_off = ts_min_off.value_or(cfg.GetDouble("tsvad.min_off", c.min_off));
      c.resolution = cfg.GetDouble("tsvad.resolution", c.resolution);
      c.capacity = cfg.GetInt("tsvad.capacity", c.capacity);
      c.Validate();
      Annotation init = ReadSingleRttm(ts_init, "");
      Timeline speech = ReadTimelineFile(ts_speech);
      EmbeddingSequence seq = ReadEmbeddingsFile(ts_emb, init.recording_id());
      if (!ts_emit.empty()) {
        SpeakerProfileSet profiles = ExtractProfiles(init, seq, c.capacity);
        auto chunks = ChunkSpans(speech.empty() ? 0 : speech.Extent().end,
                                 SecondsToTicks(c.chunk_len),
                                 SecondsToTicks(c.stride));
        for (const ChunkRequest& r :
             EmitChunkRequests(ts_emit, chunks, seq, profiles, c.resolution)) {
          std::cout << r.request_path << "\n";
        }
        return 0;
      }
      std::unique_ptr<FrameScorer> scorer;
      if (!ts_scores.empty()) {
        scorer = std::make_unique<DirectoryScorer>(ts_scores);
      } else if (ts_scorer == "toy") {
        scorer = std::make_unique<CosineScorer>();
      } else if (ts_scorer.starts_with("cmd:") && ts_scorer.size() > 4) {
        fs::path work = fs::temp_directory_path() /
                        ("diartk_" + init.recording_id() + "_requests");
        scorer = std::make_unique<CommandScorer>(ts_scorer.substr(4), work.string());
      } else {
        throw ConfigError("--scorer must be 'toy' or 'cmd:<command>'");
      }
      std::ofstream f;
      WriteRttm({DiarizeTsvad(speech, seq, init, *scorer, c)},
                *OpenOutput(ts_out, &f));
    } else if (*dover) {
      std::vector<Annotation> hyps;
      std::string rec;
      for (const auto& p : dover_inputs) {
        std::vector<Annotation> anns = ReadRttmFile(p);
        Annotation a = anns.empty() ? Annotation(rec.empty() ? "unknown" : rec)
                                    : anns.front();
        if (anns.size() > 1) throw ArgumentError(p + " holds several recordings");
        if (!anns.empty()) {
          if (!rec.empty() && a.recording_id() != rec) {
            throw ArgumentError("hypotheses disagree on the recording id");
          }
          rec = a.recording_id();
        }
        hyps.push_back(std::move(a));
      }
      for (Annotation& h : hyps) {
        if (h.turns().empty() && !rec.empty()) h = Annotation(rec);
      }
      std::optional<std::vector<double>> w;
      if (!dover_weights.empty()) w = dover_weights;
      double exponent = dover_exp.value_or(
          cfg.GetDouble("fusion.rank_exponent", kDefaultRankExponent));
      std::ofstream f;
      WriteRttm({DoverLap(hyps, w, exponent)}, *OpenOutput(dover_out, &f));
    } else if (*score) {
      ScoringOptions opts;
      opts.collar = sc_collar.value_or(cfg.GetDouble("score.collar", opts.collar));
      opts.score_overlaps =
          !(sc_ignore || cfg.GetBool("score.ignore_overlaps", false));
      std::string uem_path = sc_uem.empty() ? cfg.GetString("score.uem", "") : sc_uem;
      std::vector<std::pair<std::string, Timeline>> uem;
      if (!uem_path.empty()) uem = ReadUemFile(uem_path);
      std::vector<Annotation> refs = ReadRttmFile(sc_ref);
      std::vector<DerRow> rows;
      for (const std::string& hp : sc_hyps) {
        std::vector<Annotation> hyps = ReadRttmFile(hp);
        DERBreakdown total;
        for (const Annotation& r : refs) {
          Annotation h(r.recording_id());
          for (const Annotation& x : hyps) {
            if (x.recording_id() == r.recording_id()) h = x;
          }
          ScoringOptions o = opts;
          if (!uem_path.empty()) o.uem = UemFor(uem, r.recording_id());
          total += ComputeDer(r, h, o);
        }
        rows.push_back({fs::path(hp).stem().string(), hp, total});
      }
      std::cout << FormatDerTable(rows) << "\n" << DerJson(rows, opts);
      if (!sc_json.empty()) {
        std::ofstream f(sc_json);
        if (!f) throw ConfigError("cannot write " + sc_json);
        f << DerJson(rows, opts);
      }
    } else if (*simgen) {
      if (sim_within_cos) {
        sim.within_noise = NoiseForWithinCosine(*sim_within_cos, sim.embedding_dim);
      }
      if (sim_count <= 0) {
        sim.Validate();
        SimRecording r = Generate(sim, sim_prefix + std::to_string(sim.seed));
        WriteRecording(r, sim_out);
        return 0;
      }
      if (sim_min_spk < 1 || sim_max_spk < sim_min_spk) {
        throw ConfigError("--min-speakers/--max-speakers invalid");
      }
      std::vector<ManifestEntry> manifest;
      for (int i = 0; i < sim_count; ++i) {
        SimConfig c = sim;
        c.seed = sim.seed + static_cast<std::uint64_t>(i);
        c.n_speakers = sim_min_spk + i % (sim_max_spk - sim_min_spk + 1);
        c.Validate();
        std::ostringstream id;
        id << sim_prefix << std::setw(3) << std::setfill('0') << i;
        SimRecording r = Generate(c, id.str());
        WriteRecording(r, (fs::path(sim_out) / id.str()).string());
        manifest.push_back({id.str(), {id.str() + "/vad.scores"},
                            {id.str() + "/embeddings.bin"},
                            {id.str() + "/osd.scores"},
                            id.str() + "/ref.rttm"});
      }
      WriteManifest(manifest, (fs::path(sim_out) / "manifest.tsv").string());
    } else if (*pipeline) {
      Config c = cfg;
      if (!pl_manifest.empty()) c.Set("pipeline.manifest", pl_manifest);
      if (!pl_out.empty()) c.Set("pipeline.output_dir", pl_out);
      PipelineConfig p = PipelineConfig::FromConfig(c);
      p.Validate();
      return RunPipeline(p, g.jobs);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ArgumentError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return 0;
}
