// tests/support/fixtures.h

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

#ifndef BEATFORGE_TESTS_SUPPORT_FIXTURES_H_
#define BEATFORGE_TESTS_SUPPORT_FIXTURES_H_

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "beatforge/audio.h"
#include "beatforge/rng.h"

namespace beatforge::testing {

inline AudioClip SineClip(double freq, double amp, double seconds, int rate,
                          const std::string& id = "sine") {
  AudioClip clip;
  clip.sample_rate = rate;
  clip.source_id = id;
  const long n = static_cast<long>(std::lround(seconds * rate));
  clip.samples.resize(n);
  for (long i = 0; i < n; ++i) {
    clip.samples[i] = static_cast<float>(
        amp * std::sin(2.0 * M_PI * freq * static_cast<double>(i) / rate));
  }
  return clip;
}

inline AudioClip ConstantClip(float value, double seconds, int rate,
                              const std::string& id = "const") {
  AudioClip clip;
  clip.sample_rate = rate;
  clip.source_id = id;
  clip.samples.assign(static_cast<size_t>(std::lround(seconds * rate)), value);
  return clip;
}

// Noise-burst clicks at the given rate, starting at `offset` seconds.
inline AudioClip ClickTrainClip(double clicks_per_second, double seconds,
                                int rate, uint64_t seed = 11,
                                double offset = 0.25, double amp = 0.8) {
  AudioClip clip;
  clip.sample_rate = rate;
  clip.source_id = "clicks";
  clip.samples.assign(static_cast<size_t>(std::lround(seconds * rate)), 0.0f);
  Rng rng(seed);
  const double period = 1.0 / clicks_per_second;
  for (double t = offset; t < seconds - 0.05; t += period) {
    const long first = static_cast<long>(std::lround(t * rate));
    const long end = std::min<long>(static_cast<long>(clip.samples.size()),
                                    first + static_cast<long>(0.02 * rate));
    for (long i = first; i < end; ++i) {
      const double dt = static_cast<double>(i - first) / rate;
      clip.samples[i] += static_cast<float>(amp * std::exp(-dt / 0.005) *
                                            rng.Uniform(-1.0, 1.0));
    }
  }
  return clip;
}

// Unique scratch directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    namespace fs = std::filesystem;
    const auto base = fs::temp_directory_path() / ("beatforge_" + tag);
    fs::remove_all(base);
    fs::create_directories(base);
    path_ = base.string();
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::string& path() const { return path_; }
  std::string File(const std::string& name) const {
    return (std::filesystem::path(path_) / name).string();
  }

 private:
  std::string path_;
};

}  // namespace beatforge::testing

#endif  // BEATFORGE_TESTS_SUPPORT_FIXTURES_H_
