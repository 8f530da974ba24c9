// tests/test_eval.cc

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

#include <algorithm>

#include "beatforge/evaluate.h"
#include "beatforge/hmm.h"
#include "beatforge/rng.h"
#include "support/oracles.h"

using namespace beatforge;
using namespace beatforge::testing;

TEST_CASE("f_measure identity and closed-form cases") {
  const EvalConfig config;  // 70 ms

  SUBCASE("identical lists score 1") {
    const std::vector<double> x = {0.5, 1.0, 2.25, 7.5};
    const FMeasureResult r = FMeasure(x, x, config);
    CHECK(r.f1 == 1.0);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
    CHECK(r.counts.hits == 4);
    CHECK(r.counts.misses == 0);
    CHECK(r.counts.false_alarms == 0);
  }

  SUBCASE("three of four references matched") {
    const std::vector<double> est = {0.5, 1.5, 2.5};
    const std::vector<double> ref = {0.5, 1.5, 2.5, 3.5};
    const FMeasureResult r = FMeasure(est, ref, config);
    CHECK(r.precision == doctest::Approx(1.0));
    CHECK(r.recall == doctest::Approx(0.75));
    CHECK(r.f1 == doctest::Approx(6.0 / 7.0));
    CHECK(r.counts.hits == 3);
    CHECK(r.counts.misses == 1);
    CHECK(r.counts.false_alarms == 0);
  }

  SUBCASE("shift just outside the window scores 0") {
    const std::vector<double> ref = {1.0, 2.0, 3.0};
    std::vector<double> est;
    for (const double t : ref) est.push_back(t + 0.071);
    const FMeasureResult r = FMeasure(est, ref, config);
    CHECK(r.f1 == 0.0);
    CHECK(r.counts.hits == 0);

    std::vector<double> inside;
    for (const double t : ref) inside.push_back(t + 0.069);
    CHECK(FMeasure(inside, ref, config).f1 == 1.0);
  }

  SUBCASE("empty cases") {
    const std::vector<double> none;
    const std::vector<double> some = {1.0};
    CHECK(FMeasure(none, none, config).f1 == 1.0);
    CHECK(FMeasure(none, some, config).f1 == 0.0);
    CHECK(FMeasure(some, none, config).f1 == 0.0);
  }

  SUBCASE("unsorted input raises InputError") {
    const std::vector<double> bad = {2.0, 1.0};
    const std::vector<double> ok = {1.0};
    CHECK_THROWS_AS(FMeasure(bad, ok, config), BfError);
    CHECK_THROWS_AS(FMeasure(ok, bad, config), BfError);
  }
}

TEST_CASE("greedy matching equals optimal bipartite matching on random pairs") {
  Rng rng(77);
  EvalConfig config;
  for (int trial = 0; trial < 300; ++trial) {
    config.tolerance_window = 0.02 + rng.Uniform() * 0.2;
    std::vector<double> est, ref;
    const int n_est = static_cast<int>(rng.UniformInt(25));
    const int n_ref = static_cast<int>(rng.UniformInt(25));
    for (int i = 0; i < n_est; ++i) est.push_back(rng.Uniform() * 10.0);
    for (int i = 0; i < n_ref; ++i) ref.push_back(rng.Uniform() * 10.0);
    std::sort(est.begin(), est.end());
    std::sort(ref.begin(), ref.end());

    const FMeasureResult greedy = FMeasure(est, ref, config);
    const long optimal = OptimalMatchingSize(est, ref, config.tolerance_window);
    CHECK(greedy.counts.hits == optimal);
    CHECK(greedy.counts.hits <=
          std::min(static_cast<long>(est.size()), static_cast<long>(ref.size())));
  }
}

TEST_CASE("f1 is monotone in the tolerance window") {
  Rng rng(78);
  std::vector<double> est, ref;
  for (int i = 0; i < 20; ++i) est.push_back(rng.Uniform() * 10.0);
  for (int i = 0; i < 18; ++i) ref.push_back(rng.Uniform() * 10.0);
  std::sort(est.begin(), est.end());
  std::sort(ref.begin(), ref.end());

  EvalConfig config;
  double previous = -1.0;
  for (const double tol : {0.01, 0.03, 0.07, 0.15, 0.3, 1.0}) {
    config.tolerance_window = tol;
    const double f1 = FMeasure(est, ref, config).f1;
    CHECK(f1 >= previous);
    previous = f1;
  }
}

TEST_CASE("removing a matched estimate never increases f1") {
  Rng rng(79);
  EvalConfig config;
  std::vector<double> ref;
  for (int i = 0; i < 15; ++i) ref.push_back(rng.Uniform() * 8.0);
  std::sort(ref.begin(), ref.end());
  std::vector<double> est = ref;  // all matched

  double previous = FMeasure(est, ref, config).f1;
  while (est.size() > 1) {
    est.erase(est.begin() + static_cast<long>(rng.UniformInt(est.size())));
    const double f1 = FMeasure(est, ref, config).f1;
    CHECK(f1 <= previous + 1e-12);
    previous = f1;
  }
}

TEST_CASE("skip_intro drops early events from both sides") {
  EvalConfig config;
  config.skip_intro = 5.0;
  const std::vector<double> est = {1.0, 6.0, 7.0};
  const std::vector<double> ref = {2.0, 6.0, 7.0};
  const FMeasureResult r = FMeasure(est, ref, config);
  CHECK(r.counts.hits == 2);
  CHECK(r.f1 == 1.0);
}

TEST_CASE("evaluate_clip separates beat and downbeat scoring") {
  BeatAnnotation annotation;
  annotation.events = {{0.5, 1}, {1.0, 2}, {1.5, 3}, {2.0, 1}, {2.5, 2}, {3.0, 3}};

  SUBCASE("perfect estimate scores 1 on both") {
    BeatSequence estimate;
    estimate.meter = 3;
    estimate.events = annotation.events;
    const ClipScores scores = EvaluateClip(estimate, annotation, EvalConfig{});
    CHECK(scores.beat.f1 == 1.0);
    CHECK(scores.downbeat.f1 == 1.0);
    // Downbeats scored are exactly the bar_position-1 subset.
    CHECK(scores.downbeat.counts.hits == 2);
  }

  SUBCASE("rotated bar positions keep beat f1 but lose downbeat f1") {
    BeatSequence estimate;
    estimate.meter = 3;
    estimate.events = annotation.events;
    for (auto& e : estimate.events) {
      e.bar_position = e.bar_position % 3 + 1;  // rotate 1->2->3->1
    }
    const ClipScores scores = EvaluateClip(estimate, annotation, EvalConfig{});
    CHECK(scores.beat.f1 == 1.0);
    CHECK(scores.downbeat.f1 < 1.0);
  }

  SUBCASE("empty estimate scores 0 against a non-empty annotation") {
    BeatSequence estimate;
    const ClipScores scores = EvaluateClip(estimate, annotation, EvalConfig{});
    CHECK(scores.beat.f1 == 0.0);
    CHECK(scores.downbeat.f1 == 0.0);
  }
}
