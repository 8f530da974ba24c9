// beatforge/filterbank.cc

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

#include "beatforge/filterbank.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "beatforge/common.h"
#include "beatforge/io_util.h"

namespace beatforge {

namespace {
constexpr char kFeatureMagic[] = "BFFEAT01";
}

void FeatureConfig::Validate() const {
  if (sample_rate <= 0 || frame_rate <= 0) {
    throw BfError(ErrorKind::kConfig, "sample_rate and frame_rate must be positive");
  }
  if (sample_rate % frame_rate != 0) {
    throw BfError(ErrorKind::kConfig,
                  "frame_rate must divide sample_rate (hop * frame_rate == sample_rate)");
  }
  if (window_sizes.empty()) {
    throw BfError(ErrorKind::kConfig, "need at least one window size");
  }
  for (int w : window_sizes) {
    if (w < Hop()) {
      throw BfError(ErrorKind::kConfig, "window smaller than hop");
    }
  }
  if (n_bands < 1) throw BfError(ErrorKind::kConfig, "n_bands must be >= 1");
  if (log_offset <= 0.0) throw BfError(ErrorKind::kConfig, "log_offset must be > 0");
  if (fmin <= 0.0 || fmax <= fmin) {
    throw BfError(ErrorKind::kConfig, "need 0 < fmin < fmax");
  }
}

TriangularFilterbank::TriangularFilterbank(int n_bands, double fmin, double fmax,
                                           int window, int sample_rate)
    : n_bands_(n_bands) {
  const int bins = window / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate) / window;

  // Geometrically spaced centers, one virtual neighbor beyond each end.
  std::vector<double> centers(n_bands + 2);
  const double ratio =
      n_bands > 1 ? std::pow(fmax / fmin, 1.0 / (n_bands - 1)) : 2.0;
  for (int j = 0; j < n_bands + 2; ++j) {
    centers[j] = fmin * std::pow(ratio, j - 1);
  }

  filters_.resize(n_bands);
  for (int j = 0; j < n_bands; ++j) {
    const double left = centers[j];
    const double center = centers[j + 1];
    const double right = centers[j + 2];
    int lo = static_cast<int>(std::ceil(left / bin_hz));
    int hi = static_cast<int>(std::floor(right / bin_hz));
    int center_bin = static_cast<int>(std::lround(center / bin_hz));
    center_bin = std::clamp(center_bin, 0, bins - 1);
    lo = std::clamp(lo, 0, bins - 1);
    hi = std::clamp(hi, 0, bins - 1);
    if (hi < lo) {
      lo = hi = center_bin;
    }

    Filter f;
    f.first_bin = lo;
    f.weights.assign(static_cast<size_t>(hi - lo + 1), 0.0f);
    double sum = 0.0;
    for (int b = lo; b <= hi; ++b) {
      const double freq = b * bin_hz;
      double w = 0.0;
      if (freq <= center) {
        w = center > left ? (freq - left) / (center - left) : 1.0;
      } else {
        w = right > center ? (right - freq) / (right - center) : 1.0;
      }
      w = std::max(0.0, w);
      f.weights[b - lo] = static_cast<float>(w);
      sum += w;
    }
    if (sum <= 0.0) {
      // Degenerate filter (narrower than a bin): single-bin indicator.
      f.first_bin = center_bin;
      f.weights.assign(1, 1.0f);
      sum = 1.0;
    }
    for (float& w : f.weights) w = static_cast<float>(w / sum);
    filters_[j] = std::move(f);
  }
}

void TriangularFilterbank::Apply(const float* spectrum, float* out) const {
  for (int j = 0; j < n_bands_; ++j) {
    const Filter& f = filters_[j];
    float acc = 0.0f;
    for (size_t k = 0; k < f.weights.size(); ++k) {
      acc += f.weights[k] * spectrum[f.first_bin + k];
    }
    out[j] = acc;
  }
}

std::vector<float> TriangularFilterbank::BandWeights(int band, int bins) const {
  std::vector<float> row(static_cast<size_t>(bins), 0.0f);
  const Filter& f = filters_[band];
  for (size_t k = 0; k < f.weights.size(); ++k) {
    if (f.first_bin + static_cast<int>(k) < bins) {
      row[f.first_bin + k] = f.weights[k];
    }
  }
  return row;
}

RealMatrix LogFilterbank(const RealMatrix& spectrogram,
                         const TriangularFilterbank& bank, double log_offset) {
  RealMatrix out;
  out.frames = spectrogram.frames;
  out.dims = bank.n_bands();
  out.values.resize(static_cast<size_t>(out.frames) * out.dims);
  for (long t = 0; t < spectrogram.frames; ++t) {
    float* row = out.Row(t);
    bank.Apply(spectrogram.Row(t), row);
    for (int j = 0; j < out.dims; ++j) {
      row[j] = std::log(row[j] + static_cast<float>(log_offset));
    }
  }
  return out;
}

RealMatrix FirstOrderDiff(const RealMatrix& features) {
  if (features.frames < 1) {
    throw BfError(ErrorKind::kEmptyInput, "diff needs at least one frame");
  }
  RealMatrix out;
  out.frames = features.frames;
  out.dims = features.dims;
  out.values.assign(static_cast<size_t>(out.frames) * out.dims, 0.0f);
  for (long t = 1; t < features.frames; ++t) {
    const float* prev = features.Row(t - 1);
    const float* cur = features.Row(t);
    float* row = out.Row(t);
    for (int d = 0; d < out.dims; ++d) {
      row[d] = std::max(0.0f, cur[d] - prev[d]);
    }
  }
  return out;
}

FeatureMatrix ExtractFeatures(const AudioClip& clip, const FeatureConfig& config) {
  config.Validate();
  if (clip.samples.empty()) {
    throw BfError(ErrorKind::kEmptyInput, "empty clip: " + clip.source_id);
  }
  const AudioClip* input = &clip;
  AudioClip resampled;
  if (clip.sample_rate != config.sample_rate) {
    resampled = Resample(clip, config.sample_rate);
    input = &resampled;
  }

  const int hop = config.Hop();
  FeatureMatrix out;
  out.frame_rate = config.frame_rate;
  out.data.dims = config.Dims();

  int col = 0;
  for (int window : config.window_sizes) {
    const RealMatrix spec = StftMagnitude(*input, window, hop, WindowType::kHann);
    TriangularFilterbank bank(config.n_bands, config.fmin, config.fmax, window,
                              config.sample_rate);
    const RealMatrix logbank = LogFilterbank(spec, bank, config.log_offset);
    const RealMatrix diff = FirstOrderDiff(logbank);

    if (out.data.frames == 0) {
      out.data.frames = logbank.frames;
      out.data.values.assign(
          static_cast<size_t>(out.data.frames) * out.data.dims, 0.0f);
    }
    for (long t = 0; t < out.data.frames; ++t) {
      float* row = out.data.Row(t);
      std::memcpy(row + col, logbank.Row(t), sizeof(float) * config.n_bands);
      std::memcpy(row + col + config.n_bands, diff.Row(t),
                  sizeof(float) * config.n_bands);
    }
    col += 2 * config.n_bands;
  }
  return out;
}

void SaveFeatures(const FeatureMatrix& features, const std::string& path) {
  std::string out;
  out.append(kFeatureMagic, 8);
  AppendU32(&out, static_cast<uint32_t>(features.frame_rate));
  AppendU32(&out, static_cast<uint32_t>(features.data.dims));
  AppendU64(&out, static_cast<uint64_t>(features.data.frames));
  AppendF32Array(&out, features.data.values.data(), features.data.values.size());
  WriteFileAtomic(path, out);
}

FeatureMatrix LoadFeatures(const std::string& path) {
  const std::string bytes = ReadFileBytes(path);
  ByteReader reader(bytes, "feature file " + path);
  char magic[8];
  reader.ReadBytes(magic, 8);
  if (std::memcmp(magic, kFeatureMagic, 8) != 0) {
    throw BfError(ErrorKind::kDecode, "bad feature file magic: " + path);
  }
  FeatureMatrix features;
  features.frame_rate = static_cast<int>(reader.ReadU32());
  features.data.dims = static_cast<int>(reader.ReadU32());
  features.data.frames = static_cast<long>(reader.ReadU64());
  features.data.values.resize(static_cast<size_t>(features.data.frames) *
                              features.data.dims);
  reader.ReadF32Array(features.data.values.data(), features.data.values.size());
  return features;
}

}  // namespace beatforge
