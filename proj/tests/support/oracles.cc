// tests/support/oracles.cc

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

#include "support/oracles.h"

#include <algorithm>
#include <cmath>

#include "beatforge/rng.h"

namespace beatforge::testing {

std::vector<double> BruteForceDftMagnitude(const std::vector<double>& frame) {
  const size_t n = frame.size();
  const size_t bins = n / 2 + 1;
  std::vector<double> magnitudes(bins);
  for (size_t k = 0; k < bins; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double angle = -2.0 * M_PI * static_cast<double>(k) *
                           static_cast<double>(i) / static_cast<double>(n);
      re += frame[i] * std::cos(angle);
      im += frame[i] * std::sin(angle);
    }
    magnitudes[k] = std::hypot(re, im);
  }
  return magnitudes;
}

namespace {

// Outgoing transitions grouped by source, rebuilt from the CSR-by-destination
// layout.
std::vector<std::vector<std::pair<int32_t, double>>> OutgoingLists(
    const StateSpace& space) {
  std::vector<std::vector<std::pair<int32_t, double>>> out(space.num_states);
  for (int s = 0; s < space.num_states; ++s) {
    for (int32_t k = space.in_offsets[s]; k < space.in_offsets[s + 1]; ++k) {
      out[space.in_source[k]].push_back({s, space.in_logprob[k]});
    }
  }
  return out;
}

// True if candidate precedes incumbent in reverse-lexicographic order
// (compare the last state first).
bool ReverseLexSmaller(const std::vector<int32_t>& candidate,
                       const std::vector<int32_t>& incumbent) {
  for (size_t i = candidate.size(); i-- > 0;) {
    if (candidate[i] != incumbent[i]) return candidate[i] < incumbent[i];
  }
  return false;
}

struct EnumerationContext {
  long frames;
  const StateSpace* space;
  const std::vector<std::vector<double>>* obs;
  std::vector<std::vector<std::pair<int32_t, double>>> outgoing;
  std::vector<int32_t> current;
  EnumeratedPath best;
  bool have_best = false;
};

void Extend(EnumerationContext* ctx, long t, int32_t state, double score) {
  ctx->current[t] = state;
  if (t + 1 == ctx->frames) {
    if (!ctx->have_best || score > ctx->best.score ||
        (score == ctx->best.score && ReverseLexSmaller(ctx->current, ctx->best.path))) {
      ctx->best.path = ctx->current;
      ctx->best.score = score;
      ctx->have_best = true;
    }
    return;
  }
  for (const auto& [next, logp] : ctx->outgoing[state]) {
    // Same association order as the decoder: ((score + logp) + obs).
    Extend(ctx, t + 1, next, (score + logp) + (*ctx->obs)[t + 1][next]);
  }
}

}  // namespace

EnumeratedPath EnumerateBestPath(long frames, const StateSpace& space,
                                 const std::vector<std::vector<double>>& obs) {
  EnumerationContext ctx;
  ctx.frames = frames;
  ctx.space = &space;
  ctx.obs = &obs;
  ctx.outgoing = OutgoingLists(space);
  ctx.current.resize(frames);
  for (int s = 0; s < space.num_states; ++s) {
    Extend(&ctx, 0, s, space.init_logprob[s] + obs[0][s]);
  }
  return ctx.best;
}

namespace {

bool Augment(size_t ref, const std::vector<std::vector<size_t>>& candidates,
             std::vector<long>& match_of_est, std::vector<bool>& visited) {
  for (const size_t est : candidates[ref]) {
    if (visited[est]) continue;
    visited[est] = true;
    if (match_of_est[est] < 0 ||
        Augment(static_cast<size_t>(match_of_est[est]), candidates, match_of_est,
                visited)) {
      match_of_est[est] = static_cast<long>(ref);
      return true;
    }
  }
  return false;
}

}  // namespace

long OptimalMatchingSize(const std::vector<double>& estimates,
                         const std::vector<double>& references,
                         double tolerance) {
  std::vector<std::vector<size_t>> candidates(references.size());
  for (size_t r = 0; r < references.size(); ++r) {
    for (size_t e = 0; e < estimates.size(); ++e) {
      if (std::abs(estimates[e] - references[r]) <= tolerance) {
        candidates[r].push_back(e);
      }
    }
  }
  std::vector<long> match_of_est(estimates.size(), -1);
  long matched = 0;
  for (size_t r = 0; r < references.size(); ++r) {
    std::vector<bool> visited(estimates.size(), false);
    if (Augment(r, candidates, match_of_est, visited)) ++matched;
  }
  return matched;
}

std::vector<double> NumericGradient(const NetworkParams<double>& params,
                                    const MatX<double>& input,
                                    const TargetSequence& targets, double h) {
  std::vector<double> flat;
  FlattenParams(params, &flat);
  std::vector<double> grad(flat.size());
  const std::array<double, kNumClasses> unit_weights = {1.0, 1.0, 1.0};
  NetworkParams<double> probe = params;
  for (size_t i = 0; i < flat.size(); ++i) {
    std::vector<double> plus = flat;
    std::vector<double> minus = flat;
    plus[i] += h;
    minus[i] -= h;
    UnflattenParams(plus, &probe);
    const double loss_plus = static_cast<double>(LossFromProbs<double>(
        ForwardNetwork<double>(input, probe, nullptr), targets, unit_weights));
    UnflattenParams(minus, &probe);
    const double loss_minus = static_cast<double>(LossFromProbs<double>(
        ForwardNetwork<double>(input, probe, nullptr), targets, unit_weights));
    grad[i] = (loss_plus - loss_minus) / (2.0 * h);
  }
  return grad;
}

StateSpace RandomStateSpace(int num_states, uint64_t seed) {
  Rng rng(seed);
  StateSpace space;
  space.num_states = num_states;

  // Every state gets 1..num_states outgoing destinations with Dirichlet-like
  // normalized probabilities.
  std::vector<std::vector<std::pair<int32_t, double>>> incoming(num_states);
  for (int s = 0; s < num_states; ++s) {
    std::vector<int> dests;
    for (int d = 0; d < num_states; ++d) {
      if (rng.Uniform() < 0.5) dests.push_back(d);
    }
    if (dests.empty()) dests.push_back(static_cast<int>(rng.UniformInt(num_states)));
    std::vector<double> weights(dests.size());
    double total = 0.0;
    for (auto& w : weights) {
      w = 0.05 + rng.Uniform();
      total += w;
    }
    for (size_t k = 0; k < dests.size(); ++k) {
      incoming[dests[k]].push_back({s, std::log(weights[k] / total)});
    }
  }

  space.in_offsets.assign(num_states + 1, 0);
  for (int s = 0; s < num_states; ++s) {
    std::sort(incoming[s].begin(), incoming[s].end());
    space.in_offsets[s + 1] =
        space.in_offsets[s] + static_cast<int32_t>(incoming[s].size());
  }
  for (int s = 0; s < num_states; ++s) {
    for (const auto& [src, logp] : incoming[s]) {
      space.in_source.push_back(src);
      space.in_logprob.push_back(logp);
    }
  }

  std::vector<double> init(num_states);
  double total = 0.0;
  for (auto& p : init) {
    p = 0.05 + rng.Uniform();
    total += p;
  }
  space.init_logprob.resize(num_states);
  for (int s = 0; s < num_states; ++s) {
    space.init_logprob[s] = std::log(init[s] / total);
  }
  return space;
}

}  // namespace beatforge::testing
