// beatforge/filterbank.h

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

#ifndef BEATFORGE_FILTERBANK_H_
#define BEATFORGE_FILTERBANK_H_

#include <string>
#include <vector>

#include "beatforge/audio.h"
#include "beatforge/stft.h"

namespace beatforge {

// Frame-level feature parameters. The defaults give 100 fps features at
// 44.1 kHz from three STFT resolutions, each reduced to n_bands log-spaced
// triangular filters (about 12 per octave over 30 Hz..17 kHz), stacked as
// log magnitudes plus their rectified first-order differences.
struct FeatureConfig {
  int sample_rate = 44100;
  int frame_rate = 100;
  std::vector<int> window_sizes = {1024, 2048, 4096};
  int n_bands = 110;
  double fmin = 30.0;
  double fmax = 17000.0;
  double log_offset = 1.0;

  int Hop() const { return sample_rate / frame_rate; }
  int Dims() const { return static_cast<int>(window_sizes.size()) * 2 * n_bands; }
  void Validate() const;
};

struct FeatureMatrix {
  RealMatrix data;
  int frame_rate = 0;
};

// Triangular filters equally spaced on a log-frequency axis, each normalized
// to unit weight sum. A filter owns the bins between its neighbors' centers;
// filters narrower than one bin collapse onto their center bin.
class TriangularFilterbank {
 public:
  TriangularFilterbank(int n_bands, double fmin, double fmax, int window,
                       int sample_rate);

  int n_bands() const { return n_bands_; }

  // out[b] = sum_k weight[b][k] * spectrum[k]
  void Apply(const float* spectrum, float* out) const;

  // Dense weight row for one band (test access).
  std::vector<float> BandWeights(int band, int bins) const;

 private:
  struct Filter {
    int first_bin;
    std::vector<float> weights;
  };
  int n_bands_;
  std::vector<Filter> filters_;
};

// log(filterbank . magnitude_row + log_offset), per frame.
RealMatrix LogFilterbank(const RealMatrix& spectrogram,
                         const TriangularFilterbank& bank, double log_offset);

// Half-wave rectified temporal difference; row 0 is zero.
RealMatrix FirstOrderDiff(const RealMatrix& features);

// Full feature stack: per window size, log filterbank ++ its diff.
FeatureMatrix ExtractFeatures(const AudioClip& clip, const FeatureConfig& config);

// Binary cache format: magic "BFFEAT01", u32 frame_rate, u32 dims,
// u64 frames, float32 row-major (little-endian).
void SaveFeatures(const FeatureMatrix& features, const std::string& path);
FeatureMatrix LoadFeatures(const std::string& path);

}  // namespace beatforge

#endif  // BEATFORGE_FILTERBANK_H_
