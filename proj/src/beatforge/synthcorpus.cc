// beatforge/synthcorpus.cc

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

#include "beatforge/synthcorpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "beatforge/common.h"
#include "beatforge/rng.h"

namespace beatforge {

namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Tone roots per song, picked round-robin with jitter off: "other" re-attacks
// at every beat, "bass" one octave down at downbeats.
constexpr double kOtherFreqs[] = {262.0, 294.0, 330.0, 392.0};

void AddDecayingTone(AudioClip* clip, double start, double freq, double amp,
                     double tau, double max_len) {
  const int sr = clip->sample_rate;
  const long first = static_cast<long>(std::lround(start * sr));
  const long count = static_cast<long>(std::lround(max_len * sr));
  const long end = std::min<long>(static_cast<long>(clip->samples.size()), first + count);
  for (long i = std::max<long>(first, 0); i < end; ++i) {
    const double t = static_cast<double>(i - first) / sr;
    clip->samples[i] += static_cast<float>(
        amp * std::exp(-t / tau) * std::sin(kTwoPi * freq * t));
  }
}

void AddClick(AudioClip* clip, double start, double amp, Rng* rng) {
  const int sr = clip->sample_rate;
  const double dur = 0.1;
  const double tau = 0.03;
  const long first = static_cast<long>(std::lround(start * sr));
  const long end = std::min<long>(static_cast<long>(clip->samples.size()),
                                  first + static_cast<long>(dur * sr));
  for (long i = std::max<long>(first, 0); i < end; ++i) {
    const double t = static_cast<double>(i - first) / sr;
    const double noise = rng->Uniform(-1.0, 1.0);
    clip->samples[i] += static_cast<float>(amp * std::exp(-t / tau) * noise);
  }
}

}  // namespace

std::vector<SynthSong> PlanSynthCorpus(const SynthCorpusConfig& config) {
  if (config.num_songs < 1 || config.sample_rate < 4000 ||
      config.min_bpm <= 0 || config.max_bpm < config.min_bpm ||
      config.min_duration <= 1.0 || config.max_duration < config.min_duration) {
    throw BfError(ErrorKind::kConfig, "bad synth corpus config");
  }
  Rng rng(config.seed);
  std::vector<SynthSong> songs(static_cast<size_t>(config.num_songs));
  const int num_drumless = static_cast<int>(
      std::lround(config.drumless_fraction * config.num_songs));

  for (int i = 0; i < config.num_songs; ++i) {
    SynthSong& song = songs[i];
    char buf[32];
    std::snprintf(buf, sizeof(buf), "synth%03d", i);
    song.song_id = buf;
    song.meter = i % 2 == 0 ? 4 : 3;
    song.bpm = rng.Uniform(config.min_bpm, config.max_bpm);
    // Spread drumless songs evenly so every split sees some.
    song.drumless =
        num_drumless > 0 && i % std::max(1, config.num_songs / num_drumless) == 0;

    const double duration = rng.Uniform(config.min_duration, config.max_duration);
    const double period = 60.0 / song.bpm;
    const double offset = rng.Uniform(0.15, 0.4);
    int position = 1;
    for (double t = offset; t < duration - 0.2; t += period) {
      song.annotation.events.push_back({t, position});
      position = position % song.meter + 1;
    }
  }
  return songs;
}

SynthSongAudio RenderSynthSong(const SynthCorpusConfig& config,
                               const SynthSong& song, uint64_t noise_seed) {
  const double last_beat = song.annotation.events.back().time;
  const double duration = last_beat + 0.2;
  const long samples = static_cast<long>(std::lround(duration * config.sample_rate));

  SynthSongAudio audio;
  for (AudioClip* clip : {&audio.drums, &audio.bass, &audio.other, &audio.mix}) {
    clip->sample_rate = config.sample_rate;
    clip->samples.assign(static_cast<size_t>(samples), 0.0f);
  }
  audio.drums.source_id = song.song_id + "/drums";
  audio.bass.source_id = song.song_id + "/bass";
  audio.other.source_id = song.song_id + "/other";
  audio.mix.source_id = song.song_id + "/mix";

  Rng noise(noise_seed);
  const double period = 60.0 / song.bpm;
  const double other_freq = kOtherFreqs[(song.song_id.size() + song.meter +
                                         static_cast<size_t>(song.bpm)) %
                                        4];
  const double bass_freq = other_freq / 2.0;

  for (const auto& event : song.annotation.events) {
    const bool downbeat = event.bar_position == 1;
    if (!song.drumless) {
      AddClick(&audio.drums, event.time, downbeat ? 1.0 : 0.9, &noise);
      if (downbeat) {
        AddDecayingTone(&audio.drums, event.time, 60.0, 0.7, 0.03, 0.1);
      }
    }
    AddDecayingTone(&audio.other, event.time, other_freq, 0.45, period * 0.5,
                    period * 1.5);
    if (downbeat) {
      AddDecayingTone(&audio.bass, event.time, bass_freq, 0.5,
                      period * song.meter * 0.6, period * song.meter);
    }
  }

  for (long i = 0; i < samples; ++i) {
    const float sum = audio.drums.samples[i] + audio.bass.samples[i] +
                      audio.other.samples[i];
    audio.mix.samples[i] = std::clamp(0.5f * sum, -1.0f, 1.0f);
  }
  for (AudioClip* clip : {&audio.drums, &audio.bass, &audio.other}) {
    for (float& s : clip->samples) s = std::clamp(s, -1.0f, 1.0f);
  }
  return audio;
}

std::vector<SynthSong> GenerateSynthCorpus(const SynthCorpusConfig& config,
                                           const std::string& root_dir) {
  const std::vector<SynthSong> songs = PlanSynthCorpus(config);
  for (size_t i = 0; i < songs.size(); ++i) {
    const SynthSong& song = songs[i];
    const fs::path dir = fs::path(root_dir) / song.song_id;
    fs::create_directories(dir / "stems");
    const SynthSongAudio audio =
        RenderSynthSong(config, song, config.seed * 7919 + i);
    WriteWavFile((dir / "mix.wav").string(), audio.mix, WavSampleFormat::kInt16);
    WriteWavFile((dir / "stems" / "drums.wav").string(), audio.drums,
                 WavSampleFormat::kInt16);
    WriteWavFile((dir / "stems" / "bass.wav").string(), audio.bass,
                 WavSampleFormat::kInt16);
    WriteWavFile((dir / "stems" / "other.wav").string(), audio.other,
                 WavSampleFormat::kInt16);
    WriteBeatsFile(song.annotation.events, (dir / "beats.txt").string());
  }
  return songs;
}

}  // namespace beatforge
