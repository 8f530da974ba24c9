// beatforge/manifest.h

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

#ifndef BEATFORGE_MANIFEST_H_
#define BEATFORGE_MANIFEST_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "beatforge/annotations.h"
#include "beatforge/audio.h"
#include "beatforge/onsets.h"

namespace beatforge {

enum class DataType { kMix, kNonDrum, kOnlyDrumAbsm, kOnlyDrumOsfq };
enum class Split { kTrain, kVal, kTest };

const char* DataTypeName(DataType type);
DataType DataTypeFromName(const std::string& name);
const char* SplitName(Split split);
Split SplitFromName(const std::string& name);

// One song's separation output: the mix, per-source stems, and the shared
// beat annotation. Files live under <root>/<song_id>/{mix.wav,
// stems/<source>.wav, beats.txt}.
struct StemSet {
  std::string song_id;
  std::string mix_path;
  std::map<std::string, std::string> stem_paths;
  std::string annotation_path;

  AudioClip mix;
  std::map<std::string, AudioClip> stems;
  BeatAnnotation annotation;
};

// Reads and validates one song directory. Requires mix.wav, beats.txt and a
// stems/ directory containing drums.wav; stems must match the mix duration
// within 0.1 s and annotation times must lie within the clip.
StemSet IngestSeparation(const std::string& song_dir);

// Samplewise sum of all stems except "drums", hard-clipped to [-1, 1].
// Stems may differ in length by up to 0.1 s; shorter ones are zero-extended.
AudioClip MakeNonDrum(const std::map<std::string, AudioClip>& stems);

// Beat/downbeat labels transfer verbatim to every stem of the same song.
BeatAnnotation PropagateLabels(const BeatAnnotation& annotation);

// Randomized 80/10/10 assignment (floor/floor/remainder), keyed by song_id so
// all data types of a song land in the same split.
std::map<std::string, Split> SplitCorpus(const std::vector<std::string>& song_ids,
                                         uint64_t seed);

struct CombinationSpec {
  std::string name;
  std::vector<DataType> included;
};

// The nine standard training combinations.
const std::vector<CombinationSpec>& StandardCombinations();
CombinationSpec CombinationByName(const std::string& name);

struct ManifestEntry {
  std::string song_id;
  DataType data_type = DataType::kMix;
  std::string audio_path;
  std::string annotation_path;
  Split split = Split::kTrain;
};

struct ManifestProvenance {
  std::string combination;
  uint64_t split_seed = 0;
  double absm_threshold = 0.0;
  double osfq_energy_threshold = 0.0;
  double osfq_min_onset_rate = 0.0;
  OnsetConfig onset;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  ManifestProvenance provenance;

  std::vector<ManifestEntry> EntriesForSplit(Split split) const;
  // Throws if a song_id maps to more than one split.
  void CheckNoSplitLeakage() const;
};

// Per-song inputs to combination building; paths empty when the material
// does not exist.
struct SongRecord {
  std::string song_id;
  std::string mix_path;
  std::string annotation_path;
  std::string non_drum_path;
  std::string drums_path;
  bool has_stems = false;
  bool passed_absm = false;
  bool passed_osfq = false;
};

// Training split holds the union of the ticked data types; validation and
// test splits hold mixes only. only_drum entries appear only for songs whose
// drum stem passed the corresponding filter. A ticked non_drum type with no
// materialized audio raises IncompleteCorpus.
DatasetManifest BuildCombination(const std::vector<SongRecord>& songs,
                                 const CombinationSpec& spec,
                                 const std::map<std::string, Split>& splits,
                                 const ManifestProvenance& provenance);

std::string FormatManifestJson(const DatasetManifest& manifest);
DatasetManifest ParseManifestJson(const std::string& text);
void SaveManifest(const DatasetManifest& manifest, const std::string& path);
DatasetManifest LoadManifest(const std::string& path);

}  // namespace beatforge

#endif  // BEATFORGE_MANIFEST_H_
