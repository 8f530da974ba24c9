// beatforge/onsets.cc

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

#include "beatforge/onsets.h"

#include <algorithm>

#include "beatforge/common.h"

namespace beatforge {

void OnsetConfig::Validate() const {
  features.Validate();
  if (features.window_sizes.size() != 1) {
    throw BfError(ErrorKind::kConfig, "onset flux uses a single window size");
  }
  if (pre_max < 0 || post_max < 0 || pre_avg < 0 || post_avg < 0 || wait < 0) {
    throw BfError(ErrorKind::kConfig, "peak-picking windows must be >= 0");
  }
  if (delta < 0.0) {
    throw BfError(ErrorKind::kConfig, "delta must be >= 0");
  }
}

std::vector<double> SpectralFlux(const AudioClip& clip, const OnsetConfig& config) {
  config.Validate();
  if (clip.samples.empty()) {
    throw BfError(ErrorKind::kEmptyInput, "empty clip: " + clip.source_id);
  }
  const AudioClip* input = &clip;
  AudioClip resampled;
  if (clip.sample_rate != config.features.sample_rate) {
    resampled = Resample(clip, config.features.sample_rate);
    input = &resampled;
  }
  const int window = config.features.window_sizes[0];
  const RealMatrix spec =
      StftMagnitude(*input, window, config.features.Hop(), WindowType::kHann);
  const TriangularFilterbank bank(config.features.n_bands, config.features.fmin,
                                  config.features.fmax, window,
                                  config.features.sample_rate);
  const RealMatrix logbank = LogFilterbank(spec, bank, config.features.log_offset);
  const RealMatrix diff = FirstOrderDiff(logbank);

  std::vector<double> flux(static_cast<size_t>(diff.frames), 0.0);
  for (long t = 0; t < diff.frames; ++t) {
    const float* row = diff.Row(t);
    double sum = 0.0;
    for (int d = 0; d < diff.dims; ++d) sum += row[d];
    flux[t] = sum;
  }
  return flux;
}

std::vector<double> DetectOnsets(const AudioClip& clip, const OnsetConfig& config) {
  const std::vector<double> flux = SpectralFlux(clip, config);
  const long frames = static_cast<long>(flux.size());
  const int fps = config.features.frame_rate;

  // Frames whose window reaches past the signal end see only reflected
  // samples; any flux there is a padding artifact, not an onset.
  const int hop = config.features.Hop();
  const long tail_guard =
      (config.features.window_sizes[0] / 2 + hop - 1) / hop;
  const long limit = std::max<long>(0, frames - tail_guard);

  std::vector<double> onsets;
  long last = -(static_cast<long>(config.wait) + 1);
  for (long t = 0; t < limit; ++t) {
    const long lo_max = std::max<long>(0, t - config.pre_max);
    const long hi_max = std::min<long>(frames - 1, t + config.post_max);
    double local_max = flux[lo_max];
    for (long k = lo_max + 1; k <= hi_max; ++k) local_max = std::max(local_max, flux[k]);
    if (flux[t] != local_max) continue;

    const long lo_avg = std::max<long>(0, t - config.pre_avg);
    const long hi_avg = std::min<long>(frames - 1, t + config.post_avg);
    double mean = 0.0;
    for (long k = lo_avg; k <= hi_avg; ++k) mean += flux[k];
    mean /= static_cast<double>(hi_avg - lo_avg + 1);
    if (flux[t] < mean + config.delta) continue;

    if (t - last < config.wait) continue;
    onsets.push_back(static_cast<double>(t) / fps);
    last = t;
  }
  return onsets;
}

}  // namespace beatforge
