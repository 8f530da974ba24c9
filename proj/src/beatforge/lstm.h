// beatforge/lstm.h

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

#ifndef BEATFORGE_LSTM_H_
#define BEATFORGE_LSTM_H_

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "beatforge/common.h"
#include "beatforge/filterbank.h"

namespace beatforge {

// Architecture is fixed: three stacked bidirectional layers of 25 units per
// direction feeding a 3-way softmax over {beat, downbeat, non-beat}.
constexpr int kHiddenSize = 25;
constexpr int kNumLayers = 3;
constexpr int kNumClasses = 3;

template <typename S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

// One direction of one layer. The 4H rows of w_in/w_rec/bias stack the gate
// blocks in the order: input, forget, cell candidate, output.
template <typename S>
struct LstmParams {
  MatX<S> w_in;   // 4H x D
  MatX<S> w_rec;  // 4H x H
  VecX<S> bias;   // 4H

  int hidden() const { return static_cast<int>(w_rec.cols()); }
};

template <typename S>
struct NetworkParams {
  std::array<std::array<LstmParams<S>, 2>, kNumLayers> layers;  // [layer][0=fwd,1=bwd]
  MatX<S> w_out;  // classes x 2H
  VecX<S> b_out;  // classes
  int input_dim = 0;

  template <typename T>
  NetworkParams<T> Cast() const {
    NetworkParams<T> out;
    out.input_dim = input_dim;
    for (int l = 0; l < kNumLayers; ++l) {
      for (int d = 0; d < 2; ++d) {
        out.layers[l][d].w_in = layers[l][d].w_in.template cast<T>();
        out.layers[l][d].w_rec = layers[l][d].w_rec.template cast<T>();
        out.layers[l][d].bias = layers[l][d].bias.template cast<T>();
      }
    }
    out.w_out = w_out.template cast<T>();
    out.b_out = b_out.template cast<T>();
    return out;
  }
};

using NetworkWeights = NetworkParams<float>;

// Per-frame probability rows ordered (beat-not-downbeat, downbeat, non-beat).
struct ActivationSequence {
  RealMatrix rows;  // frames x 3
  int frame_rate = 0;
};

// Per-frame class labels with loss weights: 0 = beat, 1 = downbeat,
// 2 = non-beat. Frames widened around annotated events carry reduced weight.
struct TargetSequence {
  std::vector<uint8_t> labels;
  std::vector<float> weights;
};

namespace detail {

template <typename S>
S Sigmoid(S x) {
  return S(1) / (S(1) + std::exp(-x));
}

}  // namespace detail

template <typename S>
struct LstmDirectionCache {
  MatX<S> gates;   // 4H x T, post-activation values, indexed by time
  MatX<S> cells;   // H x T
  MatX<S> hidden;  // H x T
};

// Runs one direction over the whole sequence (columns of input are frames).
// reverse=false processes t = 0..T-1, reverse=true processes t = T-1..0;
// outputs are stored at their time index either way.
template <typename S>
MatX<S> RunLstmDirection(const MatX<S>& input, const LstmParams<S>& p,
                         bool reverse, LstmDirectionCache<S>* cache) {
  const int hidden = p.hidden();
  const long frames = input.cols();
  MatX<S> pre_in = (p.w_in * input).colwise() + p.bias;  // 4H x T

  MatX<S> gates(4 * hidden, frames);
  MatX<S> cells(hidden, frames);
  MatX<S> hs(hidden, frames);

  VecX<S> h_prev = VecX<S>::Zero(hidden);
  VecX<S> c_prev = VecX<S>::Zero(hidden);
  VecX<S> pre(4 * hidden);
  for (long s = 0; s < frames; ++s) {
    const long t = reverse ? frames - 1 - s : s;
    pre = pre_in.col(t) + p.w_rec * h_prev;
    auto i = gates.col(t).segment(0, hidden);
    auto f = gates.col(t).segment(hidden, hidden);
    auto g = gates.col(t).segment(2 * hidden, hidden);
    auto o = gates.col(t).segment(3 * hidden, hidden);
    for (int k = 0; k < hidden; ++k) {
      i(k) = detail::Sigmoid(pre(k));
      f(k) = detail::Sigmoid(pre(hidden + k));
      g(k) = std::tanh(pre(2 * hidden + k));
      o(k) = detail::Sigmoid(pre(3 * hidden + k));
    }
    cells.col(t) = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
    hs.col(t) = o.cwiseProduct(cells.col(t).array().tanh().matrix());
    h_prev = hs.col(t);
    c_prev = cells.col(t);
  }
  if (cache != nullptr) {
    cache->gates = std::move(gates);
    cache->cells = std::move(cells);
    cache->hidden = hs;
  }
  return hs;
}

// Gradients of one direction. dh_out is the loss gradient w.r.t. this
// direction's hidden outputs. Returns the gradient w.r.t. the layer input.
template <typename S>
MatX<S> BackwardLstmDirection(const MatX<S>& input, const LstmParams<S>& p,
                              const LstmDirectionCache<S>& cache, bool reverse,
                              const MatX<S>& dh_out, LstmParams<S>* grad) {
  const int hidden = p.hidden();
  const long frames = input.cols();

  MatX<S> dpre(4 * hidden, frames);
  VecX<S> dh_carry = VecX<S>::Zero(hidden);
  VecX<S> dc_carry = VecX<S>::Zero(hidden);

  for (long s = frames - 1; s >= 0; --s) {
    const long t = reverse ? frames - 1 - s : s;
    const long prev_t = reverse ? t + 1 : t - 1;
    const bool has_prev = s > 0;

    auto i = cache.gates.col(t).segment(0, hidden);
    auto f = cache.gates.col(t).segment(hidden, hidden);
    auto g = cache.gates.col(t).segment(2 * hidden, hidden);
    auto o = cache.gates.col(t).segment(3 * hidden, hidden);
    VecX<S> tanh_c = cache.cells.col(t).array().tanh().matrix();

    VecX<S> dh = dh_out.col(t) + dh_carry;
    VecX<S> d_o = dh.cwiseProduct(tanh_c);
    VecX<S> dc = dc_carry +
                 dh.cwiseProduct(o).cwiseProduct(
                     (VecX<S>::Ones(hidden) - tanh_c.cwiseProduct(tanh_c)));
    VecX<S> di = dc.cwiseProduct(g);
    VecX<S> df = has_prev ? dc.cwiseProduct(cache.cells.col(prev_t)).eval()
                          : VecX<S>::Zero(hidden).eval();
    VecX<S> dg = dc.cwiseProduct(i);

    auto dpre_col = dpre.col(t);
    for (int k = 0; k < hidden; ++k) {
      dpre_col(k) = di(k) * i(k) * (S(1) - i(k));
      dpre_col(hidden + k) = df(k) * f(k) * (S(1) - f(k));
      dpre_col(2 * hidden + k) = dg(k) * (S(1) - g(k) * g(k));
      dpre_col(3 * hidden + k) = d_o(k) * o(k) * (S(1) - o(k));
    }

    dh_carry = p.w_rec.transpose() * dpre_col;
    dc_carry = dc.cwiseProduct(f);
  }

  // Hidden states one processing step earlier, zero at the sequence start.
  MatX<S> h_prev = MatX<S>::Zero(hidden, frames);
  if (frames > 1) {
    if (!reverse) {
      h_prev.rightCols(frames - 1) = cache.hidden.leftCols(frames - 1);
    } else {
      h_prev.leftCols(frames - 1) = cache.hidden.rightCols(frames - 1);
    }
  }

  grad->w_in = dpre * input.transpose();
  grad->w_rec = dpre * h_prev.transpose();
  grad->bias = dpre.rowwise().sum();
  return p.w_in.transpose() * dpre;
}

template <typename S>
struct ForwardCache {
  std::array<std::array<LstmDirectionCache<S>, 2>, kNumLayers> dirs;
  std::array<MatX<S>, kNumLayers> layer_inputs;  // input to each layer
  MatX<S> top;    // 2H x T, input to the output layer
  MatX<S> probs;  // classes x T
};

// Column-wise softmax with max subtraction.
template <typename S>
MatX<S> SoftmaxColumns(const MatX<S>& logits) {
  MatX<S> probs(logits.rows(), logits.cols());
  for (long t = 0; t < logits.cols(); ++t) {
    const S max = logits.col(t).maxCoeff();
    VecX<S> e = (logits.col(t).array() - max).exp().matrix();
    probs.col(t) = e / e.sum();
  }
  return probs;
}

// Whole-network forward pass over features laid out dims x frames.
// Returns class probabilities, classes x frames.
template <typename S>
MatX<S> ForwardNetwork(const MatX<S>& input, const NetworkParams<S>& params,
                       ForwardCache<S>* cache) {
  if (input.rows() != params.input_dim) {
    throw BfError(ErrorKind::kShape,
                  "feature dims " + std::to_string(input.rows()) +
                      " do not match network input dim " +
                      std::to_string(params.input_dim));
  }
  MatX<S> x = input;
  for (int l = 0; l < kNumLayers; ++l) {
    if (cache != nullptr) cache->layer_inputs[l] = x;
    LstmDirectionCache<S>* cf = cache != nullptr ? &cache->dirs[l][0] : nullptr;
    LstmDirectionCache<S>* cb = cache != nullptr ? &cache->dirs[l][1] : nullptr;
    MatX<S> hf = RunLstmDirection(x, params.layers[l][0], false, cf);
    MatX<S> hb = RunLstmDirection(x, params.layers[l][1], true, cb);
    MatX<S> cat(2 * kHiddenSize, input.cols());
    cat.topRows(kHiddenSize) = hf;
    cat.bottomRows(kHiddenSize) = hb;
    x = std::move(cat);
  }
  MatX<S> logits = (params.w_out * x).colwise() + params.b_out;
  MatX<S> probs = SoftmaxColumns(logits);
  if (cache != nullptr) {
    cache->top = std::move(x);
    cache->probs = probs;
  }
  return probs;
}

// Weighted framewise cross entropy from probabilities. Weight of frame t is
// targets.weights[t] * class_weights[label]; the result is normalized by the
// total weight.
template <typename S>
S LossFromProbs(const MatX<S>& probs, const TargetSequence& targets,
                const std::array<double, kNumClasses>& class_weights) {
  if (static_cast<long>(targets.labels.size()) != probs.cols()) {
    throw BfError(ErrorKind::kShape, "targets do not match frame count");
  }
  S total = S(0);
  S weight_sum = S(0);
  for (long t = 0; t < probs.cols(); ++t) {
    const int label = targets.labels[t];
    if (label < 0 || label >= kNumClasses) {
      throw BfError(ErrorKind::kLabel,
                    "label out of range at frame " + std::to_string(t));
    }
    const S w = static_cast<S>(targets.weights[t] * class_weights[label]);
    total += w * -std::log(probs(label, t));
    weight_sum += w;
  }
  return weight_sum > S(0) ? total / weight_sum : S(0);
}

// Forward + full backpropagation through time. Returns the loss; fills
// gradients shaped like the parameters.
template <typename S>
S BackwardNetwork(const MatX<S>& input, const NetworkParams<S>& params,
                  const TargetSequence& targets,
                  const std::array<double, kNumClasses>& class_weights,
                  NetworkParams<S>* grads) {
  const long frames = input.cols();
  ForwardCache<S> cache;
  ForwardNetwork(input, params, &cache);
  const S loss = LossFromProbs(cache.probs, targets, class_weights);

  S weight_sum = S(0);
  for (long t = 0; t < frames; ++t) {
    weight_sum +=
        static_cast<S>(targets.weights[t] * class_weights[targets.labels[t]]);
  }
  const S inv = weight_sum > S(0) ? S(1) / weight_sum : S(0);

  MatX<S> dlogits = cache.probs;
  for (long t = 0; t < frames; ++t) {
    dlogits(targets.labels[t], t) -= S(1);
    dlogits.col(t) *=
        static_cast<S>(targets.weights[t] * class_weights[targets.labels[t]]) * inv;
  }

  grads->input_dim = params.input_dim;
  grads->w_out = dlogits * cache.top.transpose();
  grads->b_out = dlogits.rowwise().sum();

  MatX<S> dx = params.w_out.transpose() * dlogits;  // 2H x T
  for (int l = kNumLayers - 1; l >= 0; --l) {
    MatX<S> dh_f = dx.topRows(kHiddenSize);
    MatX<S> dh_b = dx.bottomRows(kHiddenSize);
    MatX<S> dx_f = BackwardLstmDirection(cache.layer_inputs[l], params.layers[l][0],
                                         cache.dirs[l][0], false, dh_f,
                                         &grads->layers[l][0]);
    MatX<S> dx_b = BackwardLstmDirection(cache.layer_inputs[l], params.layers[l][1],
                                         cache.dirs[l][1], true, dh_b,
                                         &grads->layers[l][1]);
    dx = dx_f + dx_b;
  }
  return loss;
}

// ---------------------------------------------------------------------------
// Float-facing API used by the rest of the pipeline.

// Column-per-frame view of a feature matrix, cast to S.
template <typename S>
MatX<S> InputFromFeatures(const FeatureMatrix& features) {
  using RowMajorF =
      Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajorF> map(features.data.values.data(),
                                  features.data.frames, features.data.dims);
  return map.transpose().template cast<S>();
}

NetworkWeights InitializeWeights(int input_dim, uint64_t seed);

ActivationSequence Forward(const FeatureMatrix& features,
                           const NetworkWeights& weights);

double Loss(const ActivationSequence& activations, const TargetSequence& targets,
            const std::array<double, kNumClasses>& class_weights = {1.0, 1.0, 1.0});

// Checkpoint format: magic "BFCKPT01", u32 version, u32 input_dim,
// u32 hidden, u32 layers, u32 classes, float32 blocks (row-major, little
// endian) per layer and direction (w_in, w_rec, bias), then w_out, b_out.
void SaveWeights(const NetworkWeights& weights, const std::string& path);
NetworkWeights LoadWeights(const std::string& path);

// Parameter vector helpers (optimizer state and finite differences).
long CountParams(const NetworkWeights& weights);

template <typename S>
void FlattenParams(const NetworkParams<S>& params, std::vector<S>* out) {
  out->clear();
  auto push_mat = [&](const auto& m) {
    for (long r = 0; r < m.rows(); ++r)
      for (long c = 0; c < m.cols(); ++c) out->push_back(m(r, c));
  };
  for (int l = 0; l < kNumLayers; ++l) {
    for (int d = 0; d < 2; ++d) {
      push_mat(params.layers[l][d].w_in);
      push_mat(params.layers[l][d].w_rec);
      push_mat(params.layers[l][d].bias);
    }
  }
  push_mat(params.w_out);
  push_mat(params.b_out);
}

// params must already carry the target shapes.
template <typename S>
void UnflattenParams(const std::vector<S>& values, NetworkParams<S>* params) {
  size_t pos = 0;
  auto pull_mat = [&](auto& m) {
    for (long r = 0; r < m.rows(); ++r)
      for (long c = 0; c < m.cols(); ++c) m(r, c) = values[pos++];
  };
  for (int l = 0; l < kNumLayers; ++l) {
    for (int d = 0; d < 2; ++d) {
      pull_mat(params->layers[l][d].w_in);
      pull_mat(params->layers[l][d].w_rec);
      pull_mat(params->layers[l][d].bias);
    }
  }
  pull_mat(params->w_out);
  pull_mat(params->b_out);
  if (pos != values.size()) {
    throw BfError(ErrorKind::kShape, "parameter vector size mismatch");
  }
}

}  // namespace beatforge

#endif  // BEATFORGE_LSTM_H_
