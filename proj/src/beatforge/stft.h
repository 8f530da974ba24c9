// beatforge/stft.h

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

#ifndef BEATFORGE_STFT_H_
#define BEATFORGE_STFT_H_

#include <vector>

#include "beatforge/audio.h"

namespace beatforge {

enum class WindowType { kHann, kRectangular };

// Row-major frames x dims buffer shared by the spectrogram and feature code.
struct RealMatrix {
  std::vector<float> values;
  long frames = 0;
  int dims = 0;

  float* Row(long t) { return values.data() + static_cast<size_t>(t) * dims; }
  const float* Row(long t) const {
    return values.data() + static_cast<size_t>(t) * dims;
  }
  float At(long t, int d) const { return values[static_cast<size_t>(t) * dims + d]; }
};

// Magnitude STFT with frames centered at t*hop. The signal is reflect-padded
// by window/2 samples at both ends; frame count is ceil(len/hop). Output has
// window/2+1 bins per frame.
RealMatrix StftMagnitude(const AudioClip& clip, int window, int hop,
                         WindowType window_type = WindowType::kHann);

}  // namespace beatforge

#endif  // BEATFORGE_STFT_H_
