// beatforge/manifest.cc

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

#include "beatforge/manifest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "beatforge/common.h"
#include "beatforge/io_util.h"
#include "beatforge/rng.h"
#include "beatforge/stem_select.h"

namespace beatforge {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {
constexpr double kDurationToleranceSeconds = 0.1;
}

const char* DataTypeName(DataType type) {
  switch (type) {
    case DataType::kMix: return "mix";
    case DataType::kNonDrum: return "non_drum";
    case DataType::kOnlyDrumAbsm: return "only_drum_absm";
    case DataType::kOnlyDrumOsfq: return "only_drum_osfq";
  }
  return "unknown";
}

DataType DataTypeFromName(const std::string& name) {
  if (name == "mix") return DataType::kMix;
  if (name == "non_drum") return DataType::kNonDrum;
  if (name == "only_drum_absm") return DataType::kOnlyDrumAbsm;
  if (name == "only_drum_osfq") return DataType::kOnlyDrumOsfq;
  throw BfError(ErrorKind::kInput, "unknown data type: " + name);
}

const char* SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "unknown";
}

Split SplitFromName(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw BfError(ErrorKind::kInput, "unknown split: " + name);
}

StemSet IngestSeparation(const std::string& song_dir) {
  const fs::path dir(song_dir);
  StemSet set;
  set.song_id = dir.filename().string();
  set.mix_path = (dir / "mix.wav").string();
  set.annotation_path = (dir / "beats.txt").string();

  if (!fs::exists(set.mix_path)) {
    throw BfError(ErrorKind::kIncompleteCorpus, "missing mix.wav in " + song_dir);
  }
  if (!fs::exists(set.annotation_path)) {
    throw BfError(ErrorKind::kIncompleteCorpus, "missing beats.txt in " + song_dir);
  }
  set.mix = LoadWavFile(set.mix_path, 0);
  set.annotation = ReadBeatsFile(set.annotation_path);

  const fs::path stems_dir = dir / "stems";
  if (fs::exists(stems_dir)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(stems_dir)) {
      if (entry.path().extension() == ".wav") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      const std::string source = file.stem().string();
      set.stem_paths[source] = file.string();
      set.stems[source] = LoadWavFile(file.string(), 0);
    }
  }
  if (set.stems.find("drums") == set.stems.end()) {
    throw BfError(ErrorKind::kMissingStem,
                  "no drums stem under " + stems_dir.string());
  }

  const double mix_duration = set.mix.DurationSeconds();
  for (const auto& [source, clip] : set.stems) {
    if (std::abs(clip.DurationSeconds() - mix_duration) > kDurationToleranceSeconds) {
      throw BfError(ErrorKind::kStemMismatch,
                    "stem '" + source + "' duration differs from mix by more than " +
                        std::to_string(kDurationToleranceSeconds) + " s in " + song_dir);
    }
  }
  for (const auto& event : set.annotation.events) {
    if (event.time < 0.0 || event.time > mix_duration) {
      throw BfError(ErrorKind::kInput,
                    "annotation time outside clip in " + song_dir);
    }
  }
  return set;
}

AudioClip MakeNonDrum(const std::map<std::string, AudioClip>& stems) {
  if (stems.find("drums") == stems.end()) {
    throw BfError(ErrorKind::kMissingStem, "stem set has no drums stem");
  }
  const AudioClip* reference = nullptr;
  size_t max_len = 0;
  int sample_rate = 0;
  for (const auto& [source, clip] : stems) {
    if (source == "drums") continue;
    if (reference == nullptr) reference = &clip;
    if (sample_rate == 0) sample_rate = clip.sample_rate;
    if (clip.sample_rate != sample_rate) {
      throw BfError(ErrorKind::kStemMismatch, "stems have mixed sample rates");
    }
    max_len = std::max(max_len, clip.samples.size());
  }
  if (reference == nullptr) {
    throw BfError(ErrorKind::kMissingStem, "need at least one non-drum stem");
  }
  for (const auto& [source, clip] : stems) {
    if (source == "drums") continue;
    const double gap = static_cast<double>(max_len - clip.samples.size()) / sample_rate;
    if (gap > kDurationToleranceSeconds) {
      throw BfError(ErrorKind::kStemMismatch,
                    "stem '" + source + "' is " + std::to_string(gap) +
                        " s shorter than the longest stem");
    }
  }

  AudioClip out;
  out.sample_rate = sample_rate;
  out.source_id = "non_drum";
  out.samples.assign(max_len, 0.0f);
  for (const auto& [source, clip] : stems) {
    if (source == "drums") continue;
    for (size_t i = 0; i < clip.samples.size(); ++i) out.samples[i] += clip.samples[i];
  }
  for (float& s : out.samples) s = std::clamp(s, -1.0f, 1.0f);
  return out;
}

BeatAnnotation PropagateLabels(const BeatAnnotation& annotation) {
  return annotation;  // labels are shared verbatim across stems
}

std::map<std::string, Split> SplitCorpus(const std::vector<std::string>& song_ids,
                                         uint64_t seed) {
  std::vector<std::string> ids = song_ids;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  Rng rng(seed);
  rng.Shuffle(&ids);

  const size_t n = ids.size();
  const size_t n_train = static_cast<size_t>(0.8 * static_cast<double>(n));
  const size_t n_val = static_cast<size_t>(0.1 * static_cast<double>(n));

  std::map<std::string, Split> assignment;
  for (size_t i = 0; i < n; ++i) {
    Split split = Split::kTest;
    if (i < n_train) {
      split = Split::kTrain;
    } else if (i < n_train + n_val) {
      split = Split::kVal;
    }
    assignment[ids[i]] = split;
  }
  return assignment;
}

const std::vector<CombinationSpec>& StandardCombinations() {
  static const std::vector<CombinationSpec> combos = {
      {"Mix", {DataType::kMix}},
      {"noDrum", {DataType::kNonDrum}},
      {"onlyDrumABSM", {DataType::kOnlyDrumAbsm}},
      {"onlyDrumOSFQ", {DataType::kOnlyDrumOsfq}},
      {"mix+noDrum", {DataType::kMix, DataType::kNonDrum}},
      {"exMix_ABSM", {DataType::kNonDrum, DataType::kOnlyDrumAbsm}},
      {"exMix_OSFQ", {DataType::kNonDrum, DataType::kOnlyDrumOsfq}},
      {"combine3_ABSM",
       {DataType::kMix, DataType::kNonDrum, DataType::kOnlyDrumAbsm}},
      {"combine3_OSFQ",
       {DataType::kMix, DataType::kNonDrum, DataType::kOnlyDrumOsfq}},
  };
  return combos;
}

CombinationSpec CombinationByName(const std::string& name) {
  for (const auto& c : StandardCombinations()) {
    if (c.name == name) return c;
  }
  throw BfError(ErrorKind::kConfig, "unknown combination: " + name);
}

std::vector<ManifestEntry> DatasetManifest::EntriesForSplit(Split split) const {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries) {
    if (e.split == split) out.push_back(e);
  }
  return out;
}

void DatasetManifest::CheckNoSplitLeakage() const {
  std::map<std::string, Split> seen;
  for (const auto& e : entries) {
    auto it = seen.find(e.song_id);
    if (it == seen.end()) {
      seen[e.song_id] = e.split;
    } else if (it->second != e.split) {
      throw BfError(ErrorKind::kInput,
                    "song " + e.song_id + " appears in multiple splits");
    }
  }
}

DatasetManifest BuildCombination(const std::vector<SongRecord>& songs,
                                 const CombinationSpec& spec,
                                 const std::map<std::string, Split>& splits,
                                 const ManifestProvenance& provenance) {
  if (spec.included.empty()) {
    throw BfError(ErrorKind::kConfig, "combination includes no data types");
  }

  std::vector<SongRecord> ordered = songs;
  std::sort(ordered.begin(), ordered.end(),
            [](const SongRecord& a, const SongRecord& b) {
              return a.song_id < b.song_id;
            });

  DatasetManifest manifest;
  manifest.provenance = provenance;
  manifest.provenance.combination = spec.name;

  for (const auto& song : ordered) {
    const auto split_it = splits.find(song.song_id);
    if (split_it == splits.end()) {
      throw BfError(ErrorKind::kInput, "song " + song.song_id + " has no split");
    }
    const Split split = split_it->second;

    auto add = [&](DataType type, const std::string& audio_path) {
      ManifestEntry entry;
      entry.song_id = song.song_id;
      entry.data_type = type;
      entry.audio_path = audio_path;
      entry.annotation_path = song.annotation_path;
      entry.split = split;
      manifest.entries.push_back(entry);
    };

    if (split != Split::kTrain) {
      // The augmentation applies to the training set only; validation and
      // test are always evaluated on the original mixes.
      add(DataType::kMix, song.mix_path);
      continue;
    }

    for (const DataType type : spec.included) {
      switch (type) {
        case DataType::kMix:
          add(DataType::kMix, song.mix_path);
          break;
        case DataType::kNonDrum:
          if (song.non_drum_path.empty()) {
            throw BfError(ErrorKind::kIncompleteCorpus,
                          "no non-drum audio materialized for " + song.song_id);
          }
          add(DataType::kNonDrum, song.non_drum_path);
          break;
        case DataType::kOnlyDrumAbsm:
          if (song.has_stems && song.passed_absm) {
            add(DataType::kOnlyDrumAbsm, song.drums_path);
          }
          break;
        case DataType::kOnlyDrumOsfq:
          if (song.has_stems && song.passed_osfq) {
            add(DataType::kOnlyDrumOsfq, song.drums_path);
          }
          break;
      }
    }
  }
  manifest.CheckNoSplitLeakage();
  return manifest;
}

std::string FormatManifestJson(const DatasetManifest& manifest) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["combination"] = manifest.provenance.combination;
  doc["provenance"] = {
      {"split_seed", manifest.provenance.split_seed},
      {"absm_threshold", manifest.provenance.absm_threshold},
      {"osfq_energy_threshold", manifest.provenance.osfq_energy_threshold},
      {"osfq_min_onset_rate", manifest.provenance.osfq_min_onset_rate},
      {"onset",
       {
           {"window", manifest.provenance.onset.features.window_sizes.empty()
                          ? 0
                          : manifest.provenance.onset.features.window_sizes[0]},
           {"n_bands", manifest.provenance.onset.features.n_bands},
           {"frame_rate", manifest.provenance.onset.features.frame_rate},
           {"pre_max", manifest.provenance.onset.pre_max},
           {"post_max", manifest.provenance.onset.post_max},
           {"pre_avg", manifest.provenance.onset.pre_avg},
           {"post_avg", manifest.provenance.onset.post_avg},
           {"delta", manifest.provenance.onset.delta},
           {"wait", manifest.provenance.onset.wait},
       }},
  };
  doc["entries"] = ordered_json::array();
  for (const auto& e : manifest.entries) {
    doc["entries"].push_back({
        {"song_id", e.song_id},
        {"data_type", DataTypeName(e.data_type)},
        {"audio", e.audio_path},
        {"annotation", e.annotation_path},
        {"split", SplitName(e.split)},
    });
  }
  return doc.dump(2) + "\n";
}

DatasetManifest ParseManifestJson(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw BfError(ErrorKind::kInput, std::string("bad manifest JSON: ") + e.what());
  }
  if (!doc.contains("schema_version") || doc["schema_version"].get<int>() != 1) {
    throw BfError(ErrorKind::kInput, "unsupported manifest schema version");
  }

  DatasetManifest manifest;
  manifest.provenance.combination = doc.value("combination", "");
  if (doc.contains("provenance")) {
    const auto& p = doc["provenance"];
    manifest.provenance.split_seed = p.value("split_seed", 0ULL);
    manifest.provenance.absm_threshold = p.value("absm_threshold", 0.0);
    manifest.provenance.osfq_energy_threshold = p.value("osfq_energy_threshold", 0.0);
    manifest.provenance.osfq_min_onset_rate = p.value("osfq_min_onset_rate", 0.0);
    if (p.contains("onset")) {
      const auto& o = p["onset"];
      auto& onset = manifest.provenance.onset;
      if (o.contains("window")) onset.features.window_sizes = {o["window"].get<int>()};
      onset.features.n_bands = o.value("n_bands", onset.features.n_bands);
      onset.features.frame_rate = o.value("frame_rate", onset.features.frame_rate);
      onset.pre_max = o.value("pre_max", onset.pre_max);
      onset.post_max = o.value("post_max", onset.post_max);
      onset.pre_avg = o.value("pre_avg", onset.pre_avg);
      onset.post_avg = o.value("post_avg", onset.post_avg);
      onset.delta = o.value("delta", onset.delta);
      onset.wait = o.value("wait", onset.wait);
    }
  }
  for (const auto& row : doc["entries"]) {
    ManifestEntry entry;
    entry.song_id = row.at("song_id").get<std::string>();
    entry.data_type = DataTypeFromName(row.at("data_type").get<std::string>());
    entry.audio_path = row.at("audio").get<std::string>();
    entry.annotation_path = row.at("annotation").get<std::string>();
    entry.split = SplitFromName(row.at("split").get<std::string>());
    manifest.entries.push_back(entry);
  }
  manifest.CheckNoSplitLeakage();
  return manifest;
}

void SaveManifest(const DatasetManifest& manifest, const std::string& path) {
  WriteFileAtomic(path, FormatManifestJson(manifest));
}

DatasetManifest LoadManifest(const std::string& path) {
  return ParseManifestJson(ReadFileBytes(path));
}

}  // namespace beatforge
