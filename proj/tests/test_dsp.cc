// tests/test_dsp.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "beatforge/audio.h"
#include "beatforge/common.h"
#include "beatforge/filterbank.h"
#include "beatforge/io_util.h"
#include "beatforge/stft.h"
#include "support/fixtures.h"
#include "support/oracles.h"

using namespace beatforge;
using namespace beatforge::testing;

namespace {

FeatureConfig SmallFeatureConfig() {
  FeatureConfig config;
  config.sample_rate = 16000;
  config.frame_rate = 100;
  config.window_sizes = {512, 1024};
  config.n_bands = 24;
  config.fmin = 60.0;
  config.fmax = 7000.0;
  return config;
}

}  // namespace

TEST_CASE("stft of silence is all zero") {
  const AudioClip clip = ConstantClip(0.0f, 0.5, 16000);
  const RealMatrix spec = StftMagnitude(clip, 512, 160);
  REQUIRE(spec.frames == 50);
  REQUIRE(spec.dims == 257);
  for (const float v : spec.values) CHECK(v == 0.0f);
}

TEST_CASE("stft of a bin-centered sine matches a direct DFT of the frame") {
  const int rate = 44100;
  const int window = 1024;
  const int hop = 441;
  const int bin = 64;
  const double freq = static_cast<double>(bin) * rate / window;
  const AudioClip clip = SineClip(freq, 0.5, 0.2, rate);

  const RealMatrix spec =
      StftMagnitude(clip, window, hop, WindowType::kRectangular);

  // Pick an interior frame whose window sits fully inside the signal.
  const long t = 3;
  const long start = t * hop - window / 2;
  REQUIRE(start >= 0);
  REQUIRE(start + window <= static_cast<long>(clip.samples.size()));
  std::vector<double> frame(window);
  for (int i = 0; i < window; ++i) frame[i] = clip.samples[start + i];

  const std::vector<double> oracle = BruteForceDftMagnitude(frame);
  long argmax = 0;
  for (int b = 0; b < spec.dims; ++b) {
    if (spec.At(t, b) > spec.At(t, argmax)) argmax = b;
    CHECK(spec.At(t, b) ==
          doctest::Approx(oracle[b]).epsilon(1e-3).scale(oracle[bin]));
  }
  CHECK(argmax == bin);
  // Energy concentrated at the center bin.
  CHECK(spec.At(t, bin) > 100.0f * spec.At(t, bin + 2));
}

TEST_CASE("stft frame count and boundary cases") {
  const AudioClip clip = ConstantClip(0.1f, 160.0 / 16000.0, 16000);
  REQUIRE(clip.samples.size() == 160);
  const RealMatrix spec = StftMagnitude(clip, 512, 160);
  CHECK(spec.frames == 1);  // ceil(160/160)

  // Window longer than the clip pads, no error.
  const RealMatrix padded = StftMagnitude(clip, 2048, 160);
  CHECK(padded.frames == 1);

  AudioClip empty;
  empty.sample_rate = 16000;
  CHECK_THROWS_AS(StftMagnitude(empty, 512, 160), BfError);
}

TEST_CASE("log filterbank of zero spectrogram is log(offset)") {
  RealMatrix spec;
  spec.frames = 4;
  spec.dims = 257;
  spec.values.assign(4 * 257, 0.0f);
  const TriangularFilterbank bank(24, 60.0, 7000.0, 512, 16000);
  const RealMatrix out = LogFilterbank(spec, bank, 1.0);
  REQUIRE(out.dims == 24);
  for (const float v : out.values) CHECK(v == doctest::Approx(std::log(1.0)));

  const RealMatrix out2 = LogFilterbank(spec, bank, 0.5);
  for (const float v : out2.values) CHECK(v == doctest::Approx(std::log(0.5)));
}

TEST_CASE("log filterbank is monotone in the input") {
  RealMatrix spec;
  spec.frames = 1;
  spec.dims = 257;
  spec.values.assign(257, 0.0f);
  for (int b = 0; b < 257; ++b) spec.values[b] = 0.1f + 0.01f * b;
  RealMatrix doubled = spec;
  for (float& v : doubled.values) v *= 2.0f;

  const TriangularFilterbank bank(24, 60.0, 7000.0, 512, 16000);
  const RealMatrix lo = LogFilterbank(spec, bank, 1.0);
  const RealMatrix hi = LogFilterbank(doubled, bank, 1.0);
  for (size_t i = 0; i < lo.values.size(); ++i) CHECK(hi.values[i] > lo.values[i]);
}

TEST_CASE("log filterbank row equals direct summation over band weights") {
  const int bins = 1024 / 2 + 1;
  RealMatrix spec;
  spec.frames = 1;
  spec.dims = bins;
  spec.values.assign(bins, 1.0f);

  const TriangularFilterbank bank(24, 60.0, 7000.0, 1024, 16000);
  const RealMatrix out = LogFilterbank(spec, bank, 1.0);
  for (int band = 0; band < 24; ++band) {
    const std::vector<float> weights = bank.BandWeights(band, bins);
    double sum = 0.0;
    for (const float w : weights) sum += w;
    CHECK(out.At(0, band) == doctest::Approx(std::log(sum + 1.0)).epsilon(1e-6));
  }
}

TEST_CASE("first order diff rectifies and zeroes the first row") {
  RealMatrix m;
  m.frames = 3;
  m.dims = 1;
  m.values = {1.0f, 3.0f, 2.0f};
  const RealMatrix d = FirstOrderDiff(m);
  CHECK(d.values[0] == 0.0f);
  CHECK(d.values[1] == 2.0f);
  CHECK(d.values[2] == 0.0f);

  RealMatrix constant;
  constant.frames = 5;
  constant.dims = 3;
  constant.values.assign(15, 0.7f);
  for (const float v : FirstOrderDiff(constant).values) CHECK(v == 0.0f);

  RealMatrix decreasing;
  decreasing.frames = 4;
  decreasing.dims = 1;
  decreasing.values = {4.0f, 3.0f, 2.0f, 1.0f};
  for (const float v : FirstOrderDiff(decreasing).values) CHECK(v == 0.0f);
}

TEST_CASE("extract_features shape contract and zero-clip behavior") {
  const FeatureConfig config = SmallFeatureConfig();
  const AudioClip clip = ConstantClip(0.0f, 1.0, 16000);
  const FeatureMatrix features = ExtractFeatures(clip, config);

  CHECK(features.data.dims == 2 * 2 * 24);
  CHECK(features.data.frames == 100);
  CHECK(features.frame_rate == 100);

  // Log part constant, diff part zero.
  for (long t = 0; t < features.data.frames; ++t) {
    for (int w = 0; w < 2; ++w) {
      const int base = w * 2 * 24;
      for (int b = 0; b < 24; ++b) {
        CHECK(features.data.At(t, base + b) == doctest::Approx(0.0));      // log(1)
        CHECK(features.data.At(t, base + 24 + b) == 0.0f);                  // diff
      }
    }
  }
}

TEST_CASE("extract_features frame count tracks duration") {
  FeatureConfig config = SmallFeatureConfig();
  const AudioClip clip = SineClip(440.0, 0.3, 10.0, 16000);
  const FeatureMatrix features = ExtractFeatures(clip, config);
  CHECK(std::abs(features.data.frames - 1000) <= 1);
}

TEST_CASE("time-shift covariance: shifting by k hops shifts frames by k") {
  FeatureConfig config = SmallFeatureConfig();
  const int hop = config.Hop();
  const int k = 3;

  AudioClip clip = ClickTrainClip(2.0, 2.0, 16000, 5);
  AudioClip shifted = clip;
  shifted.samples.erase(shifted.samples.begin(), shifted.samples.begin() + k * hop);

  const FeatureMatrix full = ExtractFeatures(clip, config);
  const FeatureMatrix cut = ExtractFeatures(shifted, config);

  const long margin = 1024 / (2 * hop) + 2;  // largest window half, in frames
  for (long t = margin; t + k < full.data.frames - margin && t < cut.data.frames;
       ++t) {
    for (int d = 0; d < full.data.dims; ++d) {
      const float a = cut.data.At(t, d);
      const float b = full.data.At(t + k, d);
      CHECK(a == doctest::Approx(b).epsilon(1e-6));
    }
  }
}

TEST_CASE("extract_features is deterministic") {
  const FeatureConfig config = SmallFeatureConfig();
  const AudioClip clip = ClickTrainClip(3.0, 1.5, 16000, 9);
  const FeatureMatrix a = ExtractFeatures(clip, config);
  const FeatureMatrix b = ExtractFeatures(clip, config);
  REQUIRE(a.data.values.size() == b.data.values.size());
  CHECK(std::memcmp(a.data.values.data(), b.data.values.data(),
                    a.data.values.size() * sizeof(float)) == 0);
}

TEST_CASE("feature file round trip is bit exact") {
  const ScratchDir dir("dsp_features");
  const FeatureConfig config = SmallFeatureConfig();
  const FeatureMatrix features =
      ExtractFeatures(SineClip(500.0, 0.4, 0.7, 16000), config);
  SaveFeatures(features, dir.File("f.bff"));
  const FeatureMatrix loaded = LoadFeatures(dir.File("f.bff"));
  CHECK(loaded.frame_rate == features.frame_rate);
  CHECK(loaded.data.frames == features.data.frames);
  CHECK(loaded.data.dims == features.data.dims);
  CHECK(std::memcmp(loaded.data.values.data(), features.data.values.data(),
                    features.data.values.size() * sizeof(float)) == 0);
}

TEST_CASE("wav round trip int16 and float32") {
  const ScratchDir dir("dsp_wav");
  const AudioClip clip = SineClip(440.0, 0.5, 0.25, 16000);

  WriteWavFile(dir.File("a.wav"), clip, WavSampleFormat::kInt16);
  const AudioClip a = LoadWavFile(dir.File("a.wav"), 0);
  REQUIRE(a.samples.size() == clip.samples.size());
  CHECK(a.sample_rate == 16000);
  for (size_t i = 0; i < clip.samples.size(); ++i) {
    CHECK(a.samples[i] == doctest::Approx(clip.samples[i]).scale(1.0).epsilon(1e-4));
  }

  WriteWavFile(dir.File("b.wav"), clip, WavSampleFormat::kFloat32);
  const AudioClip b = LoadWavFile(dir.File("b.wav"), 0);
  REQUIRE(b.samples.size() == clip.samples.size());
  for (size_t i = 0; i < clip.samples.size(); ++i) {
    CHECK(b.samples[i] == clip.samples[i]);
  }
}

TEST_CASE("wav loading averages stereo and scales 8/24-bit correctly") {
  const ScratchDir dir("dsp_wavdepth");

  // Hand-built stereo 16-bit WAV: L = 16384, R = -16384 -> mono 0;
  // second frame L = R = 8192 -> 0.25.
  std::string bytes;
  bytes.append("RIFF");
  AppendU32(&bytes, 36 + 8);
  bytes.append("WAVE");
  bytes.append("fmt ");
  AppendU32(&bytes, 16);
  const unsigned char fmt[] = {1, 0, 2, 0};
  bytes.append(reinterpret_cast<const char*>(fmt), 4);
  AppendU32(&bytes, 8000);
  AppendU32(&bytes, 8000 * 4);
  const unsigned char align[] = {4, 0, 16, 0};
  bytes.append(reinterpret_cast<const char*>(align), 4);
  bytes.append("data");
  AppendU32(&bytes, 8);
  const int16_t frames[4] = {16384, -16384, 8192, 8192};
  bytes.append(reinterpret_cast<const char*>(frames), 8);
  WriteFileAtomic(dir.File("stereo.wav"), bytes);

  const AudioClip stereo = LoadWavFile(dir.File("stereo.wav"), 0);
  REQUIRE(stereo.samples.size() == 2);
  CHECK(stereo.samples[0] == doctest::Approx(0.0));
  CHECK(stereo.samples[1] == doctest::Approx(0.25));

  // 8-bit unsigned mono: 128 -> 0, 255 -> ~1, 0 -> -1.
  std::string b8;
  b8.append("RIFF");
  AppendU32(&b8, 36 + 3);
  b8.append("WAVE");
  b8.append("fmt ");
  AppendU32(&b8, 16);
  const unsigned char fmt8[] = {1, 0, 1, 0};
  b8.append(reinterpret_cast<const char*>(fmt8), 4);
  AppendU32(&b8, 8000);
  AppendU32(&b8, 8000);
  const unsigned char align8[] = {1, 0, 8, 0};
  b8.append(reinterpret_cast<const char*>(align8), 4);
  b8.append("data");
  AppendU32(&b8, 3);
  const unsigned char samples8[3] = {128, 255, 0};
  b8.append(reinterpret_cast<const char*>(samples8), 3);
  WriteFileAtomic(dir.File("m8.wav"), b8);

  const AudioClip m8 = LoadWavFile(dir.File("m8.wav"), 0);
  REQUIRE(m8.samples.size() == 3);
  CHECK(m8.samples[0] == doctest::Approx(0.0));
  CHECK(m8.samples[1] == doctest::Approx(127.0 / 128.0));
  CHECK(m8.samples[2] == doctest::Approx(-1.0));

  // 24-bit mono: 0x400000 -> 0.5, 0xC00000 (negative) -> -0.5.
  std::string b24;
  b24.append("RIFF");
  AppendU32(&b24, 36 + 6);
  b24.append("WAVE");
  b24.append("fmt ");
  AppendU32(&b24, 16);
  const unsigned char fmt24[] = {1, 0, 1, 0};
  b24.append(reinterpret_cast<const char*>(fmt24), 4);
  AppendU32(&b24, 8000);
  AppendU32(&b24, 8000 * 3);
  const unsigned char align24[] = {3, 0, 24, 0};
  b24.append(reinterpret_cast<const char*>(align24), 4);
  b24.append("data");
  AppendU32(&b24, 6);
  const unsigned char samples24[6] = {0x00, 0x00, 0x40, 0x00, 0x00, 0xC0};
  b24.append(reinterpret_cast<const char*>(samples24), 6);
  WriteFileAtomic(dir.File("m24.wav"), b24);

  const AudioClip m24 = LoadWavFile(dir.File("m24.wav"), 0);
  REQUIRE(m24.samples.size() == 2);
  CHECK(m24.samples[0] == doctest::Approx(0.5));
  CHECK(m24.samples[1] == doctest::Approx(-0.5));
}

TEST_CASE("amplitude normalization only scales down out-of-range audio") {
  const ScratchDir dir("dsp_norm");
  AudioClip hot = SineClip(200.0, 2.0, 0.1, 16000);
  WriteWavFile(dir.File("hot.wav"), hot, WavSampleFormat::kFloat32);
  const AudioClip loaded = LoadWavFile(dir.File("hot.wav"), 0);
  float peak = 0.0f;
  for (float s : loaded.samples) peak = std::max(peak, std::abs(s));
  CHECK(peak == doctest::Approx(1.0));

  // Quiet audio is left alone.
  AudioClip quiet = ConstantClip(0.005f, 0.1, 16000);
  WriteWavFile(dir.File("quiet.wav"), quiet, WavSampleFormat::kFloat32);
  const AudioClip q = LoadWavFile(dir.File("quiet.wav"), 0);
  CHECK(q.samples[100] == doctest::Approx(0.005));
}

TEST_CASE("resampling preserves duration and tone frequency") {
  const AudioClip clip = SineClip(440.0, 0.5, 0.5, 44100);
  const AudioClip down = Resample(clip, 16000);
  CHECK(down.sample_rate == 16000);
  CHECK(std::abs(static_cast<long>(down.samples.size()) - 8000) <= 1);

  // Count zero crossings: ~2 per cycle over the interior.
  long crossings = 0;
  for (size_t i = 1600; i + 1600 < down.samples.size(); ++i) {
    if ((down.samples[i] >= 0) != (down.samples[i + 1] >= 0)) ++crossings;
  }
  const double seconds =
      static_cast<double>(down.samples.size() - 3200) / down.sample_rate;
  const double freq = static_cast<double>(crossings) / (2.0 * seconds);
  CHECK(freq == doctest::Approx(440.0).epsilon(0.02));
}
