// beatforge/stft.cc

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

#include "beatforge/stft.h"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "beatforge/common.h"

namespace beatforge {

namespace {

constexpr double kPi = 3.14159265358979323846;

// FFTW plan creation/destruction is not thread-safe; execution on a plan's
// own buffers is fine.
std::mutex& PlanMutex() {
  static std::mutex m;
  return m;
}

class RealFft {
 public:
  explicit RealFft(int n) : n_(n) {
    in_ = fftwf_alloc_real(static_cast<size_t>(n));
    out_ = fftwf_alloc_complex(static_cast<size_t>(n / 2 + 1));
    std::lock_guard<std::mutex> lock(PlanMutex());
    plan_ = fftwf_plan_dft_r2c_1d(n, in_, out_, FFTW_ESTIMATE);
  }

  ~RealFft() {
    {
      std::lock_guard<std::mutex> lock(PlanMutex());
      fftwf_destroy_plan(plan_);
    }
    fftwf_free(in_);
    fftwf_free(out_);
  }

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  float* input() { return in_; }

  void Execute(float* magnitudes) {
    fftwf_execute(plan_);
    const int bins = n_ / 2 + 1;
    for (int b = 0; b < bins; ++b) {
      magnitudes[b] = std::hypot(out_[b][0], out_[b][1]);
    }
  }

 private:
  int n_;
  float* in_;
  fftwf_complex* out_;
  fftwf_plan plan_;
};

// Mirror index into [0, n-1] without repeating the edge sample.
long ReflectIndex(long i, long n) {
  if (n == 1) return 0;
  const long period = 2 * (n - 1);
  long m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - m;
}

}  // namespace

RealMatrix StftMagnitude(const AudioClip& clip, int window, int hop,
                         WindowType window_type) {
  if (clip.samples.empty()) {
    throw BfError(ErrorKind::kEmptyInput, "empty clip: " + clip.source_id);
  }
  if (hop < 1 || window < hop) {
    throw BfError(ErrorKind::kInvalidArgument,
                  "require window >= hop >= 1");
  }

  const long n = static_cast<long>(clip.samples.size());
  const long frames = (n + hop - 1) / hop;
  const int bins = window / 2 + 1;
  const int half = window / 2;

  std::vector<float> win(window, 1.0f);
  if (window_type == WindowType::kHann) {
    for (int i = 0; i < window; ++i) {
      win[i] = static_cast<float>(
          0.5 - 0.5 * std::cos(2.0 * kPi * i / (window - 1)));
    }
  }

  RealMatrix out;
  out.frames = frames;
  out.dims = bins;
  out.values.resize(static_cast<size_t>(frames) * bins);

  RealFft fft(window);
  for (long t = 0; t < frames; ++t) {
    const long start = t * static_cast<long>(hop) - half;
    float* in = fft.input();
    for (int i = 0; i < window; ++i) {
      in[i] = clip.samples[ReflectIndex(start + i, n)] * win[i];
    }
    fft.Execute(out.Row(t));
  }
  return out;
}

}  // namespace beatforge
