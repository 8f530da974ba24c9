// beatforge/evaluate.cc

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

#include "beatforge/evaluate.h"

#include <algorithm>

#include "beatforge/common.h"
#include "beatforge/hmm.h"

namespace beatforge {

namespace {

std::vector<double> DropIntro(const std::vector<double>& times, double skip) {
  if (skip <= 0.0) return times;
  std::vector<double> out;
  for (double t : times) {
    if (t >= skip) out.push_back(t);
  }
  return out;
}

void CheckSorted(const std::vector<double>& times, const char* what) {
  for (size_t i = 1; i < times.size(); ++i) {
    if (times[i] < times[i - 1]) {
      throw BfError(ErrorKind::kInput,
                    std::string(what) + " must be sorted ascending");
    }
  }
}

}  // namespace

FMeasureResult FMeasure(const std::vector<double>& estimates,
                        const std::vector<double>& references,
                        const EvalConfig& config) {
  if (config.tolerance_window <= 0.0) {
    throw BfError(ErrorKind::kConfig, "tolerance_window must be > 0");
  }
  CheckSorted(estimates, "estimates");
  CheckSorted(references, "references");
  const std::vector<double> est = DropIntro(estimates, config.skip_intro);
  const std::vector<double> ref = DropIntro(references, config.skip_intro);

  // Sorted lists with a fixed window: matching each reference to the
  // earliest unmatched estimate in range is an optimal one-to-one matching.
  long hits = 0;
  size_t i = 0;
  for (const double r : ref) {
    while (i < est.size() && est[i] < r - config.tolerance_window) ++i;
    if (i < est.size() && est[i] <= r + config.tolerance_window) {
      ++hits;
      ++i;
    }
  }

  FMeasureResult result;
  result.counts.hits = hits;
  result.counts.misses = static_cast<long>(ref.size()) - hits;
  result.counts.false_alarms = static_cast<long>(est.size()) - hits;

  if (est.empty() && ref.empty()) {
    result.precision = result.recall = result.f1 = 1.0;
    return result;
  }
  result.precision =
      est.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(est.size());
  result.recall =
      ref.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(ref.size());
  const double pr = result.precision + result.recall;
  result.f1 = pr > 0.0 ? 2.0 * result.precision * result.recall / pr : 0.0;
  return result;
}

ClipScores EvaluateClip(const BeatSequence& estimate,
                        const BeatAnnotation& annotation,
                        const EvalConfig& config) {
  std::vector<double> est_beats;
  std::vector<double> est_downbeats;
  for (const auto& e : estimate.events) {
    est_beats.push_back(e.time);
    if (e.bar_position == 1) est_downbeats.push_back(e.time);
  }
  ClipScores scores;
  scores.beat = FMeasure(est_beats, annotation.BeatTimes(), config);
  scores.downbeat = FMeasure(est_downbeats, annotation.DownbeatTimes(), config);
  return scores;
}

}  // namespace beatforge
