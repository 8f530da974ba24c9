// beatforge/pipeline.h

// Copyright 2026  BeatForge Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef BEATFORGE_PIPELINE_H_
#define BEATFORGE_PIPELINE_H_

#include <string>
#include <vector>

#include "beatforge/evaluate.h"
#include "beatforge/filterbank.h"
#include "beatforge/hmm.h"
#include "beatforge/manifest.h"
#include "beatforge/stem_select.h"
#include "beatforge/train.h"

namespace beatforge {

// File-level operations behind the CLI subcommands and the C API. Primary
// outputs are written atomically and are byte-identical for identical inputs
// and seeds.

void ExtractFeaturesFile(const std::string& wav_path,
                         const FeatureConfig& feature_config,
                         const std::string& out_path);

BeatSequence TrackClip(const AudioClip& clip, const NetworkWeights& weights,
                       const FeatureConfig& feature_config,
                       const DecoderConfig& decoder_config);

BeatSequence TrackFile(const std::string& wav_path,
                       const std::string& weights_path,
                       const FeatureConfig& feature_config,
                       const DecoderConfig& decoder_config,
                       const std::string& out_beats_path);

// Evaluates every *.wav directly inside stem_dir (sorted by filename).
std::vector<StemDecision> SelectStems(const std::string& stem_dir,
                                      const OnsetConfig& onset_config, int jobs);

void SelectStemsToFile(const std::string& stem_dir, const std::string& rule,
                       const OnsetConfig& onset_config, int jobs,
                       const std::string& out_json_path);

// Scans <corpus_root>/<song_id>/ directories, filters drum stems, materializes
// non-drum audio under <manifest_dir>/derived/ when the combination needs it,
// splits songs with the seed, and writes the manifest.
DatasetManifest BuildAugset(const std::string& corpus_root,
                            const std::string& combination_name, uint64_t seed,
                            const OnsetConfig& onset_config, int jobs,
                            const std::string& out_manifest_path);

// Trains on the manifest's train split, validating on the val split, and
// writes the checkpoint plus the per-epoch CSV log.
TrainResult TrainFromManifest(const DatasetManifest& manifest,
                              const FeatureConfig& feature_config,
                              const TrainConfig& train_config,
                              const std::string& out_checkpoint_path,
                              const std::string& out_log_csv_path);

struct ClipResult {
  std::string song_id;
  std::string data_type;
  ClipScores scores;
};

struct SkippedClip {
  std::string song_id;
  std::string error;
};

struct CorpusScore {
  double beat_f1 = 0.0;
  double beat_precision = 0.0;
  double beat_recall = 0.0;
  double downbeat_f1 = 0.0;
  double downbeat_precision = 0.0;
  double downbeat_recall = 0.0;
  long clips = 0;
};

struct EvalReport {
  std::string model;
  std::string split;
  EvalConfig eval_config;
  DecoderConfig decoder_config;
  ManifestProvenance provenance;
  std::vector<ClipResult> clips;
  std::vector<SkippedClip> skipped;
  CorpusScore corpus;  // unweighted mean over clips
};

// Runs track() per clip of the split; failures are recorded as skips.
EvalReport EvaluateCorpus(const DatasetManifest& manifest, Split split,
                          const NetworkWeights& weights,
                          const FeatureConfig& feature_config,
                          const DecoderConfig& decoder_config,
                          const EvalConfig& eval_config, int jobs);

// Grid-search the decoder on the manifest's validation split.
DecoderConfig TuneOnManifest(const DatasetManifest& manifest,
                             const NetworkWeights& weights,
                             const FeatureConfig& feature_config,
                             const DecoderConfig& base, const TuneGrid& grid,
                             double tolerance_window, int jobs);

std::string FormatReportJson(const EvalReport& report);
// Table-shaped CSV: model,beat_f1,downbeat_f1
std::string FormatReportCsv(const EvalReport& report);
void WriteReport(const EvalReport& report, const std::string& json_path,
                 const std::string& csv_path /* empty = skip */);

}  // namespace beatforge

#endif  // BEATFORGE_PIPELINE_H_
