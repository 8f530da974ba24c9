// beatforge/evaluate.h

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

#ifndef BEATFORGE_EVALUATE_H_
#define BEATFORGE_EVALUATE_H_

#include <string>
#include <vector>

#include "beatforge/annotations.h"

namespace beatforge {

struct BeatSequence;  // hmm.h

struct EvalConfig {
  // Events match when |estimate - reference| <= tolerance_window seconds.
  double tolerance_window = 0.070;
  // Events earlier than this are dropped from both sides before matching.
  double skip_intro = 0.0;
};

struct MatchCounts {
  long hits = 0;
  long misses = 0;
  long false_alarms = 0;
};

struct FMeasureResult {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  MatchCounts counts;
};

// Greedy earliest-first one-to-one matching within the tolerance window.
// Both lists must be sorted ascending. Empty vs empty scores 1, empty vs
// non-empty scores 0.
FMeasureResult FMeasure(const std::vector<double>& estimates,
                        const std::vector<double>& references,
                        const EvalConfig& config);

struct ClipScores {
  FMeasureResult beat;      // over all events
  FMeasureResult downbeat;  // over bar_position-1 events only
};

ClipScores EvaluateClip(const BeatSequence& estimate,
                        const BeatAnnotation& annotation,
                        const EvalConfig& config);

}  // namespace beatforge

#endif  // BEATFORGE_EVALUATE_H_
