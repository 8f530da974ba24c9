// beatforge/audio.h

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

#ifndef BEATFORGE_AUDIO_H_
#define BEATFORGE_AUDIO_H_

#include <string>
#include <vector>

namespace beatforge {

// Mono PCM in [-1, 1]. The unit of all signal processing.
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = 0;
  std::string source_id;

  double DurationSeconds() const {
    return sample_rate > 0
               ? static_cast<double>(samples.size()) / sample_rate
               : 0.0;
  }
};

// Scales by 1 / max(1, max|sample|). Peaks inside full scale are left alone;
// out-of-range material (e.g. float WAVs, stem sums) is pulled back into
// [-1, 1].
void NormalizeAmplitude(AudioClip* clip);

// Windowed-sinc resampler (Hann window, 16 taps per side). Returns the input
// unchanged when rates already match.
AudioClip Resample(const AudioClip& clip, int target_rate);

// Decodes a PCM WAV (8/16/24-bit integer or 32-bit float), averages channels
// to mono, resamples to target_rate when positive, and normalizes amplitude.
// source_id is set to the path.
AudioClip LoadWavFile(const std::string& path, int target_rate);

enum class WavSampleFormat { kInt16, kFloat32 };

void WriteWavFile(const std::string& path, const AudioClip& clip,
                  WavSampleFormat format);

}  // namespace beatforge

#endif  // BEATFORGE_AUDIO_H_
