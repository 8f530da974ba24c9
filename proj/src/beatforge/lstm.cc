// beatforge/lstm.cc

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

#include "beatforge/lstm.h"

#include <cstring>

#include "beatforge/io_util.h"
#include "beatforge/rng.h"

namespace beatforge {

namespace {

constexpr char kCheckpointMagic[] = "BFCKPT01";
constexpr uint32_t kCheckpointVersion = 1;
constexpr float kInputInitRange = 0.08f;
constexpr float kForgetBiasInit = 1.0f;

// Orthogonal matrix from the QR of a Gaussian draw, with the LAPACK-style
// sign fix so the result is unique.
MatX<float> OrthogonalInit(int n, Rng* rng) {
  MatX<double> a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = rng->Gaussian();
  Eigen::HouseholderQR<MatX<double>> qr(a);
  MatX<double> q = qr.householderQ() * MatX<double>::Identity(n, n);
  MatX<double> r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < n; ++c) {
    if (r(c, c) < 0) q.col(c) = -q.col(c);
  }
  return q.cast<float>();
}

void FillUniform(MatX<float>* m, float range, Rng* rng) {
  for (long r = 0; r < m->rows(); ++r)
    for (long c = 0; c < m->cols(); ++c)
      (*m)(r, c) = static_cast<float>(rng->Uniform(-range, range));
}

template <typename Writer>
void VisitBlocks(NetworkWeights& weights, Writer&& visit) {
  for (int l = 0; l < kNumLayers; ++l) {
    for (int d = 0; d < 2; ++d) {
      visit(weights.layers[l][d].w_in);
      visit(weights.layers[l][d].w_rec);
      visit(weights.layers[l][d].bias);
    }
  }
  visit(weights.w_out);
  visit(weights.b_out);
}

void ShapeWeights(NetworkWeights* weights, int input_dim) {
  weights->input_dim = input_dim;
  for (int l = 0; l < kNumLayers; ++l) {
    const int in_dim = l == 0 ? input_dim : 2 * kHiddenSize;
    for (int d = 0; d < 2; ++d) {
      weights->layers[l][d].w_in.resize(4 * kHiddenSize, in_dim);
      weights->layers[l][d].w_rec.resize(4 * kHiddenSize, kHiddenSize);
      weights->layers[l][d].bias.resize(4 * kHiddenSize);
    }
  }
  weights->w_out.resize(kNumClasses, 2 * kHiddenSize);
  weights->b_out.resize(kNumClasses);
}

}  // namespace

NetworkWeights InitializeWeights(int input_dim, uint64_t seed) {
  if (input_dim < 1) {
    throw BfError(ErrorKind::kConfig, "input_dim must be >= 1");
  }
  Rng rng(seed);
  NetworkWeights weights;
  ShapeWeights(&weights, input_dim);
  for (int l = 0; l < kNumLayers; ++l) {
    for (int d = 0; d < 2; ++d) {
      LstmParams<float>& p = weights.layers[l][d];
      FillUniform(&p.w_in, kInputInitRange, &rng);
      for (int gate = 0; gate < 4; ++gate) {
        p.w_rec.middleRows(gate * kHiddenSize, kHiddenSize) =
            OrthogonalInit(kHiddenSize, &rng);
      }
      p.bias.setZero();
      p.bias.segment(kHiddenSize, kHiddenSize).setConstant(kForgetBiasInit);
    }
  }
  FillUniform(&weights.w_out, kInputInitRange, &rng);
  weights.b_out.setZero();
  return weights;
}

ActivationSequence Forward(const FeatureMatrix& features,
                           const NetworkWeights& weights) {
  const MatX<float> input = InputFromFeatures<float>(features);
  const MatX<float> probs = ForwardNetwork<float>(input, weights, nullptr);

  ActivationSequence out;
  out.frame_rate = features.frame_rate;
  out.rows.frames = probs.cols();
  out.rows.dims = kNumClasses;
  out.rows.values.resize(static_cast<size_t>(probs.cols()) * kNumClasses);
  for (long t = 0; t < probs.cols(); ++t) {
    float* row = out.rows.Row(t);
    for (int c = 0; c < kNumClasses; ++c) row[c] = probs(c, t);
  }
  return out;
}

double Loss(const ActivationSequence& activations, const TargetSequence& targets,
            const std::array<double, kNumClasses>& class_weights) {
  MatX<double> probs(kNumClasses, activations.rows.frames);
  for (long t = 0; t < activations.rows.frames; ++t) {
    for (int c = 0; c < kNumClasses; ++c) {
      probs(c, t) = activations.rows.At(t, c);
    }
  }
  return LossFromProbs<double>(probs, targets, class_weights);
}

long CountParams(const NetworkWeights& weights) {
  long count = 0;
  VisitBlocks(const_cast<NetworkWeights&>(weights),
              [&](const auto& block) { count += block.size(); });
  return count;
}

void SaveWeights(const NetworkWeights& weights, const std::string& path) {
  std::string out;
  out.append(kCheckpointMagic, 8);
  AppendU32(&out, kCheckpointVersion);
  AppendU32(&out, static_cast<uint32_t>(weights.input_dim));
  AppendU32(&out, kHiddenSize);
  AppendU32(&out, kNumLayers);
  AppendU32(&out, kNumClasses);
  VisitBlocks(const_cast<NetworkWeights&>(weights), [&](const auto& block) {
    for (long r = 0; r < block.rows(); ++r)
      for (long c = 0; c < block.cols(); ++c)
        AppendF32(&out, static_cast<float>(block(r, c)));
  });
  WriteFileAtomic(path, out);
}

NetworkWeights LoadWeights(const std::string& path) {
  const std::string bytes = ReadFileBytes(path);
  try {
    ByteReader reader(bytes, "checkpoint " + path);
    char magic[8];
    reader.ReadBytes(magic, 8);
    if (std::memcmp(magic, kCheckpointMagic, 8) != 0) {
      throw BfError(ErrorKind::kIncompatibleCheckpoint,
                    "bad checkpoint magic: " + path);
    }
    const uint32_t version = reader.ReadU32();
    const uint32_t input_dim = reader.ReadU32();
    const uint32_t hidden = reader.ReadU32();
    const uint32_t layers = reader.ReadU32();
    const uint32_t classes = reader.ReadU32();
    if (version != kCheckpointVersion) {
      throw BfError(ErrorKind::kIncompatibleCheckpoint,
                    "unsupported checkpoint version " + std::to_string(version));
    }
    if (hidden != kHiddenSize || layers != kNumLayers || classes != kNumClasses ||
        input_dim < 1) {
      throw BfError(ErrorKind::kIncompatibleCheckpoint,
                    "architecture mismatch in " + path + " (hidden=" +
                        std::to_string(hidden) + ", layers=" + std::to_string(layers) +
                        ", classes=" + std::to_string(classes) + ")");
    }
    NetworkWeights weights;
    ShapeWeights(&weights, static_cast<int>(input_dim));
    VisitBlocks(weights, [&](auto& block) {
      for (long r = 0; r < block.rows(); ++r)
        for (long c = 0; c < block.cols(); ++c) block(r, c) = reader.ReadF32();
    });
    if (!reader.AtEnd()) {
      throw BfError(ErrorKind::kIncompatibleCheckpoint,
                    "trailing bytes in checkpoint: " + path);
    }
    return weights;
  } catch (const BfError& e) {
    if (e.kind() == ErrorKind::kIo) {
      throw BfError(ErrorKind::kIncompatibleCheckpoint,
                    "truncated checkpoint: " + path);
    }
    throw;
  }
}

}  // namespace beatforge
