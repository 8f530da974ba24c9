// beatforge/stem_select.h

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

#ifndef BEATFORGE_STEM_SELECT_H_
#define BEATFORGE_STEM_SELECT_H_

#include <string>
#include <vector>

#include "beatforge/audio.h"
#include "beatforge/onsets.h"

namespace beatforge {

// Drum-stem admission thresholds. Magnitudes are on the normalized [-1, 1]
// scale applied at load time.
constexpr double kAbsmThreshold = 0.01;
constexpr double kOsfqEnergyThreshold = 0.001;
constexpr double kOsfqMinOnsetRate = 1.0;  // prominent onsets per second

// (1/N) * sum|sample|, in [0, 1].
double MeanAbsMagnitude(const AudioClip& clip);

// Keep iff the mean absolute magnitude is >= 0.01.
bool AbsmFilter(const AudioClip& clip);

// Exclude iff the mean absolute magnitude is < 0.001 (looser than ABSM) or
// the stem has fewer than one prominent onset per second.
bool OsfqFilter(const AudioClip& clip, const OnsetConfig& onset_config);

struct StemDecision {
  std::string stem_id;
  double mean_abs = 0.0;
  double onset_rate = 0.0;
  bool passed_absm = false;
  bool passed_osfq = false;
};

StemDecision EvaluateStem(const AudioClip& clip, const OnsetConfig& onset_config,
                          const std::string& stem_id);

// decisions.json payload: the per-stem records plus the thresholds and onset
// parameters they were computed with.
std::string FormatDecisionsJson(const std::vector<StemDecision>& decisions,
                                const std::string& rule,
                                const OnsetConfig& onset_config);

}  // namespace beatforge

#endif  // BEATFORGE_STEM_SELECT_H_
