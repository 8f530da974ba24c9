// beatforge/synthcorpus.h

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

#ifndef BEATFORGE_SYNTHCORPUS_H_
#define BEATFORGE_SYNTHCORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "beatforge/annotations.h"
#include "beatforge/audio.h"

namespace beatforge {

// Generator for a small labeled corpus: click-train "drum" stems, sustained
// re-attacked tones as the "non-drum" stems (bass marks downbeats, other
// marks every beat), and their mixes, with annotations by construction.
// A fraction of songs is drumless (silent drum stem). Layout matches the
// augmentation corpus contract: <root>/<song_id>/{mix.wav, stems/*.wav,
// beats.txt}.
struct SynthCorpusConfig {
  int num_songs = 60;
  double min_duration = 6.5;
  double max_duration = 8.5;
  double min_bpm = 70.0;
  double max_bpm = 180.0;
  int sample_rate = 16000;
  double drumless_fraction = 0.2;
  uint64_t seed = 7;
};

struct SynthSong {
  std::string song_id;
  bool drumless = false;
  int meter = 4;
  double bpm = 120.0;
  BeatAnnotation annotation;
};

struct SynthSongAudio {
  AudioClip drums;
  AudioClip bass;
  AudioClip other;
  AudioClip mix;
};

// Audio for one song; deterministic in (config, index).
SynthSongAudio RenderSynthSong(const SynthCorpusConfig& config,
                               const SynthSong& song, uint64_t noise_seed);

// Song metadata without touching the filesystem.
std::vector<SynthSong> PlanSynthCorpus(const SynthCorpusConfig& config);

// Plans, renders and writes the whole corpus; returns the plan.
std::vector<SynthSong> GenerateSynthCorpus(const SynthCorpusConfig& config,
                                           const std::string& root_dir);

}  // namespace beatforge

#endif  // BEATFORGE_SYNTHCORPUS_H_
