// beatforge/pipeline.cc

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

#include "beatforge/pipeline.h"

#include <algorithm>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "beatforge/io_util.h"
#include "beatforge/parallel.h"

namespace beatforge {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void ExtractFeaturesFile(const std::string& wav_path,
                         const FeatureConfig& feature_config,
                         const std::string& out_path) {
  const AudioClip clip = LoadWavFile(wav_path, feature_config.sample_rate);
  const FeatureMatrix features = ExtractFeatures(clip, feature_config);
  SaveFeatures(features, out_path);
}

BeatSequence TrackClip(const AudioClip& clip, const NetworkWeights& weights,
                       const FeatureConfig& feature_config,
                       const DecoderConfig& decoder_config) {
  const FeatureMatrix features = ExtractFeatures(clip, feature_config);
  const ActivationSequence activations = Forward(features, weights);
  return Decode(activations, decoder_config);
}

BeatSequence TrackFile(const std::string& wav_path,
                       const std::string& weights_path,
                       const FeatureConfig& feature_config,
                       const DecoderConfig& decoder_config,
                       const std::string& out_beats_path) {
  const NetworkWeights weights = LoadWeights(weights_path);
  const AudioClip clip = LoadWavFile(wav_path, feature_config.sample_rate);
  const BeatSequence beats = TrackClip(clip, weights, feature_config, decoder_config);
  if (!out_beats_path.empty()) {
    WriteBeatsFile(beats.events, out_beats_path);
  }
  return beats;
}

std::vector<StemDecision> SelectStems(const std::string& stem_dir,
                                      const OnsetConfig& onset_config, int jobs) {
  if (!fs::is_directory(stem_dir)) {
    throw BfError(ErrorKind::kIo, "not a directory: " + stem_dir);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(stem_dir)) {
    if (entry.path().extension() == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<StemDecision> decisions(files.size());
  ParallelFor(static_cast<long>(files.size()), jobs, [&](long i) {
    const AudioClip clip = LoadWavFile(files[i].string(), 0);
    decisions[i] = EvaluateStem(clip, onset_config, files[i].stem().string());
  });
  return decisions;
}

void SelectStemsToFile(const std::string& stem_dir, const std::string& rule,
                       const OnsetConfig& onset_config, int jobs,
                       const std::string& out_json_path) {
  if (rule != "absm" && rule != "osfq") {
    throw BfError(ErrorKind::kConfig, "rule must be 'absm' or 'osfq'");
  }
  const auto decisions = SelectStems(stem_dir, onset_config, jobs);
  WriteFileAtomic(out_json_path, FormatDecisionsJson(decisions, rule, onset_config));
}

DatasetManifest BuildAugset(const std::string& corpus_root,
                            const std::string& combination_name, uint64_t seed,
                            const OnsetConfig& onset_config, int jobs,
                            const std::string& out_manifest_path) {
  const CombinationSpec spec = CombinationByName(combination_name);
  const bool needs_stems =
      std::any_of(spec.included.begin(), spec.included.end(),
                  [](DataType t) { return t != DataType::kMix; });
  const bool needs_non_drum =
      std::find(spec.included.begin(), spec.included.end(), DataType::kNonDrum) !=
      spec.included.end();

  if (!fs::is_directory(corpus_root)) {
    throw BfError(ErrorKind::kIo, "not a directory: " + corpus_root);
  }
  std::vector<std::string> song_dirs;
  for (const auto& entry : fs::directory_iterator(corpus_root)) {
    if (entry.is_directory()) song_dirs.push_back(entry.path().string());
  }
  std::sort(song_dirs.begin(), song_dirs.end());
  if (song_dirs.empty()) {
    throw BfError(ErrorKind::kIncompleteCorpus, "no songs under " + corpus_root);
  }

  const fs::path derived_root =
      fs::path(out_manifest_path).parent_path() / "derived";

  std::vector<SongRecord> records(song_dirs.size());
  ParallelFor(static_cast<long>(song_dirs.size()), jobs, [&](long i) {
    const fs::path dir(song_dirs[i]);
    SongRecord record;
    record.song_id = dir.filename().string();
    record.mix_path = (dir / "mix.wav").string();
    record.annotation_path = (dir / "beats.txt").string();

    if (!needs_stems) {
      if (!fs::exists(record.mix_path) || !fs::exists(record.annotation_path)) {
        throw BfError(ErrorKind::kIncompleteCorpus,
                      "missing mix.wav or beats.txt in " + song_dirs[i]);
      }
      ReadBeatsFile(record.annotation_path);  // validate
      records[i] = record;
      return;
    }

    const StemSet set = IngestSeparation(song_dirs[i]);
    record.has_stems = true;
    record.drums_path = set.stem_paths.at("drums");
    const StemDecision decision =
        EvaluateStem(set.stems.at("drums"), onset_config, record.song_id);
    record.passed_absm = decision.passed_absm;
    record.passed_osfq = decision.passed_osfq;

    if (needs_non_drum) {
      const AudioClip non_drum = MakeNonDrum(set.stems);
      const fs::path out = derived_root / record.song_id / "non_drum.wav";
      WriteWavFile(out.string(), non_drum, WavSampleFormat::kFloat32);
      record.non_drum_path = out.string();
    }
    records[i] = record;
  });

  std::vector<std::string> song_ids;
  for (const auto& r : records) song_ids.push_back(r.song_id);
  const auto splits = SplitCorpus(song_ids, seed);

  ManifestProvenance provenance;
  provenance.combination = spec.name;
  provenance.split_seed = seed;
  provenance.absm_threshold = kAbsmThreshold;
  provenance.osfq_energy_threshold = kOsfqEnergyThreshold;
  provenance.osfq_min_onset_rate = kOsfqMinOnsetRate;
  provenance.onset = onset_config;

  DatasetManifest manifest = BuildCombination(records, spec, splits, provenance);
  SaveManifest(manifest, out_manifest_path);
  return manifest;
}

namespace {

std::vector<TrainSequence> LoadSequences(const std::vector<ManifestEntry>& entries,
                                         const FeatureConfig& feature_config,
                                         const TrainConfig& train_config) {
  std::vector<TrainSequence> sequences(entries.size());
  ParallelFor(static_cast<long>(entries.size()), train_config.jobs, [&](long i) {
    const AudioClip clip =
        LoadWavFile(entries[i].audio_path, feature_config.sample_rate);
    const BeatAnnotation annotation = ReadBeatsFile(entries[i].annotation_path);
    TrainSequence seq;
    seq.features = ExtractFeatures(clip, feature_config);
    seq.targets = MakeTargets(annotation, seq.features.data.frames,
                              feature_config.frame_rate,
                              train_config.target_widen_frames,
                              train_config.widen_weight);
    sequences[i] = std::move(seq);
  });
  return sequences;
}

}  // namespace

TrainResult TrainFromManifest(const DatasetManifest& manifest,
                              const FeatureConfig& feature_config,
                              const TrainConfig& train_config,
                              const std::string& out_checkpoint_path,
                              const std::string& out_log_csv_path) {
  manifest.CheckNoSplitLeakage();
  const auto train_entries = manifest.EntriesForSplit(Split::kTrain);
  const auto val_entries = manifest.EntriesForSplit(Split::kVal);
  if (train_entries.empty() || val_entries.empty()) {
    throw BfError(ErrorKind::kEmptyInput,
                  "manifest needs non-empty train and val splits");
  }

  const auto train_set = LoadSequences(train_entries, feature_config, train_config);
  const auto val_set = LoadSequences(val_entries, feature_config, train_config);
  TrainResult result = Train(train_set, val_set, train_config);

  if (!out_checkpoint_path.empty()) {
    SaveWeights(result.weights, out_checkpoint_path);
  }
  if (!out_log_csv_path.empty()) {
    WriteTrainLogCsv(result.log, out_log_csv_path);
  }
  return result;
}

EvalReport EvaluateCorpus(const DatasetManifest& manifest, Split split,
                          const NetworkWeights& weights,
                          const FeatureConfig& feature_config,
                          const DecoderConfig& decoder_config,
                          const EvalConfig& eval_config, int jobs) {
  const auto entries = manifest.EntriesForSplit(split);
  if (entries.empty()) {
    throw BfError(ErrorKind::kEmptyInput,
                  std::string("no entries in split ") + SplitName(split));
  }

  EvalReport report;
  report.split = SplitName(split);
  report.eval_config = eval_config;
  report.decoder_config = decoder_config;
  report.provenance = manifest.provenance;

  struct Slot {
    bool ok = false;
    ClipResult result;
    std::string error;
  };
  std::vector<Slot> slots(entries.size());
  const StateSpace space = BuildStateSpace(decoder_config);

  ParallelFor(static_cast<long>(entries.size()), jobs, [&](long i) {
    Slot& slot = slots[i];
    slot.result.song_id = entries[i].song_id;
    slot.result.data_type = DataTypeName(entries[i].data_type);
    try {
      const AudioClip clip =
          LoadWavFile(entries[i].audio_path, feature_config.sample_rate);
      const BeatAnnotation annotation = ReadBeatsFile(entries[i].annotation_path);
      const FeatureMatrix features = ExtractFeatures(clip, feature_config);
      const ActivationSequence activations = Forward(features, weights);
      const BeatSequence decoded =
          DecodeWithSpace(activations, space, decoder_config);
      slot.result.scores = EvaluateClip(decoded, annotation, eval_config);
      slot.ok = true;
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  });

  for (const auto& slot : slots) {
    if (slot.ok) {
      report.clips.push_back(slot.result);
      report.corpus.beat_f1 += slot.result.scores.beat.f1;
      report.corpus.beat_precision += slot.result.scores.beat.precision;
      report.corpus.beat_recall += slot.result.scores.beat.recall;
      report.corpus.downbeat_f1 += slot.result.scores.downbeat.f1;
      report.corpus.downbeat_precision += slot.result.scores.downbeat.precision;
      report.corpus.downbeat_recall += slot.result.scores.downbeat.recall;
    } else {
      report.skipped.push_back({slot.result.song_id, slot.error});
    }
  }
  report.corpus.clips = static_cast<long>(report.clips.size());
  if (report.corpus.clips > 0) {
    const double inv = 1.0 / static_cast<double>(report.corpus.clips);
    report.corpus.beat_f1 *= inv;
    report.corpus.beat_precision *= inv;
    report.corpus.beat_recall *= inv;
    report.corpus.downbeat_f1 *= inv;
    report.corpus.downbeat_precision *= inv;
    report.corpus.downbeat_recall *= inv;
  }
  return report;
}

DecoderConfig TuneOnManifest(const DatasetManifest& manifest,
                             const NetworkWeights& weights,
                             const FeatureConfig& feature_config,
                             const DecoderConfig& base, const TuneGrid& grid,
                             double tolerance_window, int jobs) {
  const auto entries = manifest.EntriesForSplit(Split::kVal);
  if (entries.empty()) {
    throw BfError(ErrorKind::kEmptyInput, "no validation entries to tune on");
  }
  std::vector<std::pair<ActivationSequence, BeatAnnotation>> val_set(entries.size());
  ParallelFor(static_cast<long>(entries.size()), jobs, [&](long i) {
    const AudioClip clip =
        LoadWavFile(entries[i].audio_path, feature_config.sample_rate);
    const FeatureMatrix features = ExtractFeatures(clip, feature_config);
    val_set[i].first = Forward(features, weights);
    val_set[i].second = ReadBeatsFile(entries[i].annotation_path);
  });
  return Tune(base, grid, val_set, tolerance_window, jobs);
}

namespace {

ordered_json ScoresJson(const FMeasureResult& r) {
  return {
      {"f1", r.f1},
      {"precision", r.precision},
      {"recall", r.recall},
      {"hits", r.counts.hits},
      {"misses", r.counts.misses},
      {"false_alarms", r.counts.false_alarms},
  };
}

}  // namespace

std::string FormatReportJson(const EvalReport& report) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["model"] = report.model;
  doc["split"] = report.split;
  doc["eval"] = {
      {"tolerance_window", report.eval_config.tolerance_window},
      {"skip_intro", report.eval_config.skip_intro},
      {"aggregation", "per-clip mean"},
  };
  doc["decoder"] = {
      {"beats_per_bar", report.decoder_config.beats_per_bar},
      {"min_bpm", report.decoder_config.min_bpm},
      {"max_bpm", report.decoder_config.max_bpm},
      {"tempo_levels", report.decoder_config.tempo_levels},
      {"transition_lambda", report.decoder_config.transition_lambda},
      {"observation_weight", report.decoder_config.observation_weight},
      {"frame_rate", report.decoder_config.frame_rate},
  };
  doc["provenance"] = {
      {"combination", report.provenance.combination},
      {"split_seed", report.provenance.split_seed},
      {"absm_threshold", report.provenance.absm_threshold},
      {"osfq_energy_threshold", report.provenance.osfq_energy_threshold},
      {"osfq_min_onset_rate", report.provenance.osfq_min_onset_rate},
  };
  doc["corpus"] = {
      {"clips", report.corpus.clips},
      {"beat_f1", report.corpus.beat_f1},
      {"beat_precision", report.corpus.beat_precision},
      {"beat_recall", report.corpus.beat_recall},
      {"downbeat_f1", report.corpus.downbeat_f1},
      {"downbeat_precision", report.corpus.downbeat_precision},
      {"downbeat_recall", report.corpus.downbeat_recall},
  };
  doc["clips"] = ordered_json::array();
  for (const auto& clip : report.clips) {
    doc["clips"].push_back({
        {"song_id", clip.song_id},
        {"data_type", clip.data_type},
        {"beat", ScoresJson(clip.scores.beat)},
        {"downbeat", ScoresJson(clip.scores.downbeat)},
    });
  }
  doc["skipped"] = ordered_json::array();
  for (const auto& skip : report.skipped) {
    doc["skipped"].push_back({{"song_id", skip.song_id}, {"error", skip.error}});
  }
  return doc.dump(2) + "\n";
}

std::string FormatReportCsv(const EvalReport& report) {
  char buf[256];
  std::string out = "model,beat_f1,downbeat_f1\n";
  std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f\n", report.model.c_str(),
                report.corpus.beat_f1, report.corpus.downbeat_f1);
  out += buf;
  return out;
}

void WriteReport(const EvalReport& report, const std::string& json_path,
                 const std::string& csv_path) {
  WriteFileAtomic(json_path, FormatReportJson(report));
  if (!csv_path.empty()) {
    WriteFileAtomic(csv_path, FormatReportCsv(report));
  }
}

}  // namespace beatforge
