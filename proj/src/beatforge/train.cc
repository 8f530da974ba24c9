// beatforge/train.cc

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

#include "beatforge/train.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "beatforge/io_util.h"
#include "beatforge/parallel.h"
#include "beatforge/rng.h"

namespace beatforge {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 0;
};

void AdamStep(std::vector<float>* params, const std::vector<float>& grads,
              double learning_rate, double clip_norm, AdamState* state) {
  const size_t n = params->size();
  if (state->m.empty()) {
    state->m.assign(n, 0.0);
    state->v.assign(n, 0.0);
  }

  double norm_sq = 0.0;
  for (float g : grads) norm_sq += static_cast<double>(g) * g;
  const double norm = std::sqrt(norm_sq);
  const double scale = (clip_norm > 0.0 && norm > clip_norm) ? clip_norm / norm : 1.0;

  state->step += 1;
  const double bias1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state->step));
  const double bias2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state->step));
  for (size_t i = 0; i < n; ++i) {
    const double g = grads[i] * scale;
    state->m[i] = kAdamBeta1 * state->m[i] + (1.0 - kAdamBeta1) * g;
    state->v[i] = kAdamBeta2 * state->v[i] + (1.0 - kAdamBeta2) * g * g;
    const double m_hat = state->m[i] / bias1;
    const double v_hat = state->v[i] / bias2;
    (*params)[i] -= static_cast<float>(learning_rate * m_hat /
                                       (std::sqrt(v_hat) + kAdamEpsilon));
  }
}

double ValidationLoss(const std::vector<TrainSequence>& val_set,
                      const NetworkWeights& weights, const TrainConfig& config) {
  std::vector<double> losses(val_set.size(), 0.0);
  ParallelFor(static_cast<long>(val_set.size()), config.jobs, [&](long i) {
    const MatX<float> input = InputFromFeatures<float>(val_set[i].features);
    const MatX<float> probs = ForwardNetwork<float>(input, weights, nullptr);
    losses[i] = static_cast<double>(
        LossFromProbs<float>(probs, val_set[i].targets, config.class_weights));
  });
  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(losses.size());
}

}  // namespace

void TrainConfig::Validate() const {
  if (learning_rate <= 0.0 || batch_size < 1 || max_epochs < 1 || patience < 1 ||
      gradient_clip_norm <= 0.0 || target_widen_frames < 0 || jobs < 1) {
    throw BfError(ErrorKind::kConfig, "train config fields must be positive");
  }
  if (patience > max_epochs) {
    throw BfError(ErrorKind::kConfig, "patience must be <= max_epochs");
  }
  for (double w : class_weights) {
    if (w <= 0.0) throw BfError(ErrorKind::kConfig, "class weights must be > 0");
  }
}

TargetSequence MakeTargets(const BeatAnnotation& annotation, long frames,
                           int frame_rate, int widen_frames, double widen_weight) {
  TargetSequence targets;
  targets.labels.assign(static_cast<size_t>(frames), 2);  // non-beat
  targets.weights.assign(static_cast<size_t>(frames), 1.0f);
  std::vector<bool> exact(static_cast<size_t>(frames), false);

  for (const auto& event : annotation.events) {
    const long frame = std::lround(event.time * frame_rate);
    if (frame < 0 || frame >= frames) continue;
    const uint8_t label = event.bar_position == 1 ? 1 : 0;
    targets.labels[frame] = label;
    targets.weights[frame] = 1.0f;
    exact[frame] = true;
    for (int d = 1; d <= widen_frames; ++d) {
      for (const long n : {frame - d, frame + d}) {
        if (n < 0 || n >= frames || exact[n]) continue;
        targets.labels[n] = label;
        targets.weights[n] = static_cast<float>(widen_weight);
      }
    }
  }
  return targets;
}

TrainResult Train(const std::vector<TrainSequence>& train_set,
                  const std::vector<TrainSequence>& val_set,
                  const TrainConfig& config) {
  config.Validate();
  if (train_set.empty() || val_set.empty()) {
    throw BfError(ErrorKind::kEmptyInput, "train and validation sets must be non-empty");
  }
  const int input_dim = train_set.front().features.data.dims;
  for (const auto* set : {&train_set, &val_set}) {
    for (const auto& seq : *set) {
      if (seq.features.data.dims != input_dim) {
        throw BfError(ErrorKind::kShape, "inconsistent feature dims across sequences");
      }
      if (static_cast<long>(seq.targets.labels.size()) != seq.features.data.frames) {
        throw BfError(ErrorKind::kShape, "targets do not match frame counts");
      }
    }
  }

  Rng rng(config.seed);
  NetworkWeights weights = InitializeWeights(input_dim, rng.NextU64());

  TrainResult result;
  result.log.initial_val_loss = ValidationLoss(val_set, weights, config);
  result.log.best_val_loss = result.log.initial_val_loss;
  result.log.best_epoch = 0;
  result.weights = weights;

  std::vector<float> param_vec;
  FlattenParams(weights, &param_vec);
  AdamState adam;

  std::vector<size_t> order(train_set.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  int epochs_without_improvement = 0;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.Shuffle(&order);

    double epoch_loss = 0.0;
    long sequences_seen = 0;
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(config.batch_size)) {
      const size_t end =
          std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      const long batch = static_cast<long>(end - start);

      std::vector<std::vector<float>> grads(batch);
      std::vector<double> losses(batch, 0.0);
      ParallelFor(batch, config.jobs, [&](long b) {
        const TrainSequence& seq = train_set[order[start + b]];
        const MatX<float> input = InputFromFeatures<float>(seq.features);
        NetworkParams<float> grad;
        losses[b] = static_cast<double>(BackwardNetwork<float>(
            input, weights, seq.targets, config.class_weights, &grad));
        FlattenParams(grad, &grads[b]);
      });

      // Fixed-order reduction keeps float sums reproducible.
      std::vector<float> grad_sum(param_vec.size(), 0.0f);
      double batch_loss = 0.0;
      for (long b = 0; b < batch; ++b) {
        for (size_t i = 0; i < grad_sum.size(); ++i) grad_sum[i] += grads[b][i];
        batch_loss += losses[b];
      }
      const float inv_batch = 1.0f / static_cast<float>(batch);
      for (float& g : grad_sum) g *= inv_batch;

      epoch_loss += batch_loss;
      sequences_seen += batch;

      if (!std::isfinite(batch_loss)) {
        throw BfError(ErrorKind::kTrainingDiverged,
                      "non-finite loss at epoch " + std::to_string(epoch));
      }

      AdamStep(&param_vec, grad_sum, config.learning_rate,
               config.gradient_clip_norm, &adam);
      UnflattenParams(param_vec, &weights);
    }

    const double train_loss = epoch_loss / static_cast<double>(sequences_seen);
    const double val_loss = ValidationLoss(val_set, weights, config);
    if (!std::isfinite(val_loss)) {
      throw BfError(ErrorKind::kTrainingDiverged,
                    "non-finite validation loss at epoch " + std::to_string(epoch));
    }
    result.log.epochs.push_back({epoch, train_loss, val_loss});
    BF_LOG_INFO("epoch " + std::to_string(epoch) + " train " +
                std::to_string(train_loss) + " val " + std::to_string(val_loss));

    if (val_loss < result.log.best_val_loss) {
      result.log.best_val_loss = val_loss;
      result.log.best_epoch = epoch;
      result.weights = weights;
      epochs_without_improvement = 0;
    } else {
      ++epochs_without_improvement;
      if (epochs_without_improvement >= config.patience) break;
    }
  }
  return result;
}

std::string FormatTrainLogCsv(const TrainLog& log) {
  std::string out = "epoch,train_loss,val_loss\n";
  char buf[96];
  for (const auto& e : log.epochs) {
    std::snprintf(buf, sizeof(buf), "%d,%.8f,%.8f\n", e.epoch, e.train_loss,
                  e.val_loss);
    out += buf;
  }
  return out;
}

void WriteTrainLogCsv(const TrainLog& log, const std::string& path) {
  WriteFileAtomic(path, FormatTrainLogCsv(log));
}

}  // namespace beatforge
