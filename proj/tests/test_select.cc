// tests/test_select.cc

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

#include <nlohmann/json.hpp>

#include "beatforge/common.h"
#include "beatforge/stem_select.h"
#include "support/fixtures.h"

using namespace beatforge;
using namespace beatforge::testing;

namespace {

OnsetConfig Onset16k() {
  OnsetConfig config;
  config.features.sample_rate = 16000;
  config.features.window_sizes = {1024};
  config.features.n_bands = 40;
  config.features.fmin = 60.0;
  config.features.fmax = 7000.0;
  return config;
}

}  // namespace

TEST_CASE("mean absolute magnitude closed forms") {
  CHECK(MeanAbsMagnitude(ConstantClip(0.0f, 1.0, 16000)) == 0.0);
  CHECK(MeanAbsMagnitude(ConstantClip(0.02f, 1.0, 16000)) ==
        doctest::Approx(0.02).epsilon(1e-6));

  // Full-scale sine: 2/pi, checked against dense numerical integration.
  const int rate = 44100;
  const AudioClip sine = SineClip(441.0, 1.0, 1.0, rate);  // whole periods
  const double measured = MeanAbsMagnitude(sine);
  CHECK(measured == doctest::Approx(2.0 / M_PI).epsilon(1e-3));

  double integral = 0.0;
  const int n = 2000000;
  for (int i = 0; i < n; ++i) {
    integral += std::abs(std::sin(2.0 * M_PI * static_cast<double>(i) / n));
  }
  integral /= n;
  CHECK(measured == doctest::Approx(integral).epsilon(1e-3));

  AudioClip empty;
  empty.sample_rate = 16000;
  CHECK_THROWS_AS(MeanAbsMagnitude(empty), BfError);
}

TEST_CASE("mean abs magnitude is positively homogeneous") {
  const AudioClip base = ClickTrainClip(2.0, 3.0, 16000, 3);
  const double m1 = MeanAbsMagnitude(base);
  for (const double alpha : {0.1, 0.25, 0.5, 0.9, 1.0}) {
    AudioClip scaled = base;
    for (float& s : scaled.samples) s *= static_cast<float>(alpha);
    CHECK(MeanAbsMagnitude(scaled) == doctest::Approx(alpha * m1).epsilon(1e-5));
  }
}

TEST_CASE("absm filter thresholds at 0.01") {
  CHECK(AbsmFilter(ConstantClip(0.02f, 1.0, 16000)));
  CHECK_FALSE(AbsmFilter(ConstantClip(0.005f, 1.0, 16000)));
  CHECK_FALSE(AbsmFilter(ConstantClip(0.0f, 1.0, 16000)));
  // The keep/exclude decision flips at the threshold.
  CHECK(kAbsmThreshold == 0.01);
  CHECK(AbsmFilter(ConstantClip(0.010001f, 1.0, 16000)));
  CHECK_FALSE(AbsmFilter(ConstantClip(0.009999f, 1.0, 16000)));
}

TEST_CASE("absm is monotone in gain") {
  const AudioClip base = ClickTrainClip(8.0, 3.0, 16000, 5, 0.25, 0.9);
  REQUIRE(AbsmFilter(base));
  AudioClip louder = base;
  for (float& s : louder.samples) s = std::clamp(s * 1.8f, -1.0f, 1.0f);
  CHECK(AbsmFilter(louder));
}

TEST_CASE("onset detection on silence, clicks, and a steady sine") {
  const OnsetConfig config = Onset16k();

  SUBCASE("silence has no onsets") {
    CHECK(DetectOnsets(ConstantClip(0.0f, 2.0, 16000), config).empty());
  }

  SUBCASE("empty clip throws") {
    AudioClip empty;
    empty.sample_rate = 16000;
    CHECK_THROWS_AS(DetectOnsets(empty, config), BfError);
  }

  SUBCASE("click train at 2 clicks per second gives one onset per click") {
    const AudioClip clicks = ClickTrainClip(2.0, 5.0, 16000, 17);
    const auto onsets = DetectOnsets(clicks, config);
    REQUIRE(onsets.size() == 10);
    for (size_t i = 0; i < onsets.size(); ++i) {
      const double expected = 0.25 + 0.5 * static_cast<double>(i);
      CHECK(std::abs(onsets[i] - expected) <= 0.02);
    }
    for (size_t i = 1; i < onsets.size(); ++i) CHECK(onsets[i] > onsets[i - 1]);
  }

  SUBCASE("steady sine yields at most one onset") {
    const AudioClip sine = SineClip(440.0, 0.5, 3.0, 16000);
    CHECK(DetectOnsets(sine, config).size() <= 1);
  }

  SUBCASE("onset count is gain invariant for clear clicks") {
    const AudioClip clicks = ClickTrainClip(2.0, 4.0, 16000, 23);
    const size_t base_count = DetectOnsets(clicks, config).size();
    for (const double alpha : {0.5, 0.7, 1.0}) {
      AudioClip scaled = clicks;
      for (float& s : scaled.samples) s *= static_cast<float>(alpha);
      CHECK(DetectOnsets(scaled, config).size() == base_count);
    }
  }
}

TEST_CASE("osfq filter combines the energy and onset-rate clauses") {
  const OnsetConfig config = Onset16k();

  SUBCASE("quiet but rhythmic stem passes OSFQ while failing ABSM") {
    // Constant 0.005 with a 4 Hz click overlay: mean abs ~0.005 (>= 0.001,
    // < 0.01) and 4 onsets/s.
    AudioClip clip = ClickTrainClip(4.0, 5.0, 16000, 29, 0.2, 0.5);
    for (float& s : clip.samples) s += 0.005f;
    CHECK_FALSE(AbsmFilter(clip));
    CHECK(OsfqFilter(clip, config));
  }

  SUBCASE("loud stem with one onset in ten seconds is ABSM-kept, OSFQ-excluded") {
    AudioClip clip = ConstantClip(0.02f, 10.0, 16000);
    // One click at five seconds.
    const long first = 5 * 16000;
    Rng rng(31);
    for (long i = first; i < first + 320; ++i) {
      clip.samples[i] += static_cast<float>(
          0.8 * std::exp(-static_cast<double>(i - first) / 16000.0 / 0.005) *
          rng.Uniform(-1.0, 1.0));
    }
    CHECK(AbsmFilter(clip));
    const auto onsets = DetectOnsets(clip, config);
    CHECK(onsets.size() == 1);
    CHECK_FALSE(OsfqFilter(clip, config));
  }

  SUBCASE("silence is excluded") {
    CHECK_FALSE(OsfqFilter(ConstantClip(0.0f, 2.0, 16000), config));
  }

  SUBCASE("energy clause flips at 0.001") {
    // Plenty of onsets either way; only the energy clause varies.
    AudioClip quiet = ClickTrainClip(4.0, 5.0, 16000, 37, 0.2, 0.02);
    const double gain = 0.0009 / MeanAbsMagnitude(quiet);
    AudioClip below = quiet;
    for (float& s : below.samples) s *= static_cast<float>(gain);
    CHECK(MeanAbsMagnitude(below) < kOsfqEnergyThreshold);
    CHECK_FALSE(OsfqFilter(below, config));

    AudioClip above = quiet;
    const double gain2 = 0.002 / MeanAbsMagnitude(quiet);
    for (float& s : above.samples) s *= static_cast<float>(gain2);
    CHECK(MeanAbsMagnitude(above) >= kOsfqEnergyThreshold);
    CHECK(OsfqFilter(above, config));
  }

  SUBCASE("anything excluded by the OSFQ energy clause fails ABSM too") {
    for (const float level : {0.0f, 0.0005f, 0.0009f}) {
      const AudioClip clip = ConstantClip(level, 1.0, 16000);
      const double mean = MeanAbsMagnitude(clip);
      if (mean < kOsfqEnergyThreshold) {
        CHECK_FALSE(AbsmFilter(clip));
      }
    }
  }
}

TEST_CASE("stem decisions are deterministic and serialize with provenance") {
  const OnsetConfig config = Onset16k();
  const AudioClip clip = ClickTrainClip(8.0, 4.0, 16000, 41, 0.25, 0.9);

  const StemDecision a = EvaluateStem(clip, config, "drums");
  const StemDecision b = EvaluateStem(clip, config, "drums");
  CHECK(a.mean_abs == b.mean_abs);
  CHECK(a.onset_rate == b.onset_rate);
  CHECK(a.passed_absm == b.passed_absm);
  CHECK(a.passed_osfq == b.passed_osfq);
  CHECK(a.passed_absm);
  CHECK(a.passed_osfq);

  const std::string json = FormatDecisionsJson({a}, "osfq", config);
  const auto doc = nlohmann::json::parse(json);
  CHECK(doc["rule"] == "osfq");
  CHECK(doc["thresholds"]["absm_mean_abs"] == 0.01);
  CHECK(doc["thresholds"]["osfq_mean_abs"] == 0.001);
  CHECK(doc["thresholds"]["osfq_min_onset_rate"] == 1.0);
  CHECK(doc["onset"]["delta"] == config.delta);
  REQUIRE(doc["stems"].size() == 1);
  CHECK(doc["stems"][0]["stem_id"] == "drums");
  CHECK(doc["stems"][0]["kept"] == true);
}
