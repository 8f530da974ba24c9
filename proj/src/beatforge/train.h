// beatforge/train.h

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

#ifndef BEATFORGE_TRAIN_H_
#define BEATFORGE_TRAIN_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "beatforge/annotations.h"
#include "beatforge/lstm.h"

namespace beatforge {

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 8;
  int max_epochs = 50;
  int patience = 10;
  double gradient_clip_norm = 5.0;
  uint64_t seed = 42;
  int target_widen_frames = 1;
  double widen_weight = 0.5;
  // Per-class loss re-weighting; {1,1,1} leaves the loss untouched.
  std::array<double, kNumClasses> class_weights = {1.0, 1.0, 1.0};
  int jobs = 1;

  void Validate() const;
};

struct TrainSequence {
  FeatureMatrix features;
  TargetSequence targets;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainLog {
  double initial_val_loss = 0.0;
  std::vector<EpochStats> epochs;
  int best_epoch = 0;
  double best_val_loss = 0.0;
};

struct TrainResult {
  NetworkWeights weights;
  TrainLog log;
};

// Frame labels from annotated events at the given frame rate. The exact
// event frame gets the positive class with weight 1; frames within
// +-widen_frames get the same class with widen_weight. Exact frames win over
// widened neighbors.
TargetSequence MakeTargets(const BeatAnnotation& annotation, long frames,
                           int frame_rate, int widen_frames, double widen_weight);

// Adam with global gradient-norm clipping and early stopping on validation
// loss. Returns the weights with the lowest validation loss seen.
TrainResult Train(const std::vector<TrainSequence>& train_set,
                  const std::vector<TrainSequence>& val_set,
                  const TrainConfig& config);

// CSV: header "epoch,train_loss,val_loss", one row per epoch.
std::string FormatTrainLogCsv(const TrainLog& log);
void WriteTrainLogCsv(const TrainLog& log, const std::string& path);

}  // namespace beatforge

#endif  // BEATFORGE_TRAIN_H_
