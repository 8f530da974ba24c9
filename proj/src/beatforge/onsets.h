// beatforge/onsets.h

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

#ifndef BEATFORGE_ONSETS_H_
#define BEATFORGE_ONSETS_H_

#include <vector>

#include "beatforge/audio.h"
#include "beatforge/filterbank.h"

namespace beatforge {

// Spectral-flux onset detector: rectified band-wise log-magnitude increase
// summed per frame, then local-maximum peak picking. A frame t is an onset
// iff flux[t] is the max over [t-pre_max, t+post_max], exceeds the mean over
// [t-pre_avg, t+post_avg] by at least delta, and lies >= wait frames after
// the previous onset.
struct OnsetConfig {
  FeatureConfig features;  // single STFT resolution for the flux
  int pre_max = 3;
  int post_max = 3;
  int pre_avg = 10;
  int post_avg = 10;
  double delta = 0.07;
  int wait = 3;

  OnsetConfig() { features.window_sizes = {2048}; }
  void Validate() const;
};

std::vector<double> SpectralFlux(const AudioClip& clip, const OnsetConfig& config);

// Onset times in seconds, strictly increasing.
std::vector<double> DetectOnsets(const AudioClip& clip, const OnsetConfig& config);

}  // namespace beatforge

#endif  // BEATFORGE_ONSETS_H_
