// beatforge/stem_select.cc

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

#include "beatforge/stem_select.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "beatforge/common.h"

namespace beatforge {

using ordered_json = nlohmann::ordered_json;

double MeanAbsMagnitude(const AudioClip& clip) {
  if (clip.samples.empty()) {
    throw BfError(ErrorKind::kEmptyInput, "empty clip: " + clip.source_id);
  }
  double sum = 0.0;
  for (float s : clip.samples) sum += std::abs(static_cast<double>(s));
  return sum / static_cast<double>(clip.samples.size());
}

bool AbsmFilter(const AudioClip& clip) {
  return MeanAbsMagnitude(clip) >= kAbsmThreshold;
}

bool OsfqFilter(const AudioClip& clip, const OnsetConfig& onset_config) {
  const double mean_abs = MeanAbsMagnitude(clip);
  if (mean_abs < kOsfqEnergyThreshold) return false;
  const double duration = clip.DurationSeconds();
  if (duration <= 0.0) return false;
  const auto onsets = DetectOnsets(clip, onset_config);
  const double rate = static_cast<double>(onsets.size()) / duration;
  return rate >= kOsfqMinOnsetRate;
}

StemDecision EvaluateStem(const AudioClip& clip, const OnsetConfig& onset_config,
                          const std::string& stem_id) {
  StemDecision d;
  d.stem_id = stem_id;
  d.mean_abs = MeanAbsMagnitude(clip);
  const double duration = clip.DurationSeconds();
  const auto onsets = DetectOnsets(clip, onset_config);
  d.onset_rate =
      duration > 0.0 ? static_cast<double>(onsets.size()) / duration : 0.0;
  d.passed_absm = d.mean_abs >= kAbsmThreshold;
  d.passed_osfq =
      d.mean_abs >= kOsfqEnergyThreshold && d.onset_rate >= kOsfqMinOnsetRate;
  return d;
}

std::string FormatDecisionsJson(const std::vector<StemDecision>& decisions,
                                const std::string& rule,
                                const OnsetConfig& onset_config) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["rule"] = rule;
  doc["thresholds"] = {
      {"absm_mean_abs", kAbsmThreshold},
      {"osfq_mean_abs", kOsfqEnergyThreshold},
      {"osfq_min_onset_rate", kOsfqMinOnsetRate},
  };
  doc["onset"] = {
      {"window", onset_config.features.window_sizes[0]},
      {"n_bands", onset_config.features.n_bands},
      {"frame_rate", onset_config.features.frame_rate},
      {"pre_max", onset_config.pre_max},
      {"post_max", onset_config.post_max},
      {"pre_avg", onset_config.pre_avg},
      {"post_avg", onset_config.post_avg},
      {"delta", onset_config.delta},
      {"wait", onset_config.wait},
  };
  doc["stems"] = ordered_json::array();
  for (const auto& d : decisions) {
    ordered_json row;
    row["stem_id"] = d.stem_id;
    row["mean_abs"] = d.mean_abs;
    row["onset_rate"] = d.onset_rate;
    row["passed_absm"] = d.passed_absm;
    row["passed_osfq"] = d.passed_osfq;
    row["kept"] = rule == "osfq" ? d.passed_osfq : d.passed_absm;
    doc["stems"].push_back(row);
  }
  return doc.dump(2) + "\n";
}

}  // namespace beatforge
