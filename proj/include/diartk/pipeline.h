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

#ifndef DIARTK_PIPELINE_H_
#define DIARTK_PIPELINE_H_

#include <optional>
#include <string>
#include <vector>

#include "diartk/ahc.h"
#include "diartk/config.h"
#include "diartk/frame_scores.h"
#include "diartk/metrics.h"
#include "diartk/tsvad.h"

namespace diartk {

// One manifest line:
//   recording_id <TAB> vad_scores(comma-sep) <TAB> embeddings(comma-sep)
//   <TAB> osd_scores(comma-sep) <TAB> [ref_rttm]
// Relative paths are resolved against the manifest's directory.  With
// several embedding files, AHC system k and scorer k use file k mod count.
struct ManifestEntry {
  std::string recording_id;
  std::vector<std::string> vad_paths;
  std::vector<std::string> embedding_paths;
  std::vector<std::string> osd_paths;
  std::optional<std::string> ref_path;
};

std::vector<ManifestEntry> ReadManifest(const std::string& path);
void WriteManifest(const std::vector<ManifestEntry>& entries,
                   const std::string& path);

struct DetectorStage {
  std::optional<std::vector<double>> weights;
  BinarizeOptions binarize;
};

struct AhcSystem {
  std::string name;
  AhcConfig cfg;
  int embeddings = -1;  // index into the manifest's embedding list
};

struct ScorerBinding {
  std::string name;
  std::string kind;     // "toy" or "cmd"
  std::string command;  // for kind == "cmd"
  TsvadConfig cfg;
  int embeddings = -1;
};

struct PipelineConfig {
  std::string manifest;
  std::string output_dir;
  DetectorStage vad;
  DetectorStage osd;
  bool use_osd = true;
  double segment_window = kSegmentWindow;
  double segment_shift = kSegmentShift;
  std::vector<AhcSystem> ahc;
  std::vector<ScorerBinding> scorers;
  bool fusion = true;
  double rank_exponent = 0.5;
  ScoringOptions scoring;
  std::optional<std::string> uem_path;
  bool cache = true;

  // Throws ConfigError on unknown keys or invalid values.
  static PipelineConfig FromConfig(const Config& cfg);
  // Structural checks plus existence of every referenced file.
  void Validate() const;
};

// A named output of the pipeline, in the order of the DER table.
struct SystemSpec {
  std::string name;
  std::string description;
};
std::vector<SystemSpec> PipelineSystems(const PipelineConfig& cfg);

struct RecordingOutcome {
  std::string recording_id;
  bool ok = false;
  std::string error;
  std::vector<Annotation> systems;  // parallel to PipelineSystems()
  std::optional<Annotation> ref;
};

// Runs every stage for one recording, writing intermediates under
// <output_dir>/recordings/<recording_id>/.
RecordingOutcome ProcessRecording(const ManifestEntry& entry,
                                  const PipelineConfig& cfg);

// Whole pipeline over the manifest with `jobs` workers.  Returns the
// process exit status: 0 on success, 1 when any recording failed.
int RunPipeline(const PipelineConfig& cfg, int jobs);

// Fixed-width DER table plus the matching JSON summary.
struct DerRow {
  std::string name;
  std::string description;
  DERBreakdown breakdown;
};
std::string FormatDerTable(const std::vector<DerRow>& rows);
std::string DerJson(const std::vector<DerRow>& rows, const ScoringOptions& opts);

std::string Sha256Hex(const std::string& data);

}  // namespace diartk

#endif  // DIARTK_PIPELINE_H_
