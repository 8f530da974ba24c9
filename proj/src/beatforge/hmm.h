// beatforge/hmm.h

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

#ifndef BEATFORGE_HMM_H_
#define BEATFORGE_HMM_H_

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "beatforge/annotations.h"
#include "beatforge/common.h"
#include "beatforge/lstm.h"

namespace beatforge {

// Bar-pointer decoder parameters. Phase advances one position per frame; a
// beat spans `interval` positions where interval = 60 * frame_rate / bpm,
// and a bar chains 3 or 4 beats. Tempo changes happen at beat boundaries
// only, weighted by exp(-lambda * |log(interval'/interval)|), row-normalized.
struct DecoderConfig {
  std::vector<int> beats_per_bar = {3, 4};
  double min_bpm = 55.0;
  double max_bpm = 215.0;
  int tempo_levels = 60;
  double transition_lambda = 100.0;
  // Fraction of a beat interval scored against the beat/downbeat activation;
  // the rest of the beat is scored against non-beat.
  double observation_weight = 1.0 / 16.0;
  int frame_rate = 100;

  void Validate() const;
};

enum class StateRegion : uint8_t { kBeat = 0, kDownbeat = 1, kInterior = 2 };

// Sparse left-to-right HMM over bar-pointer states, plus the metadata needed
// to map decoded states back to beats. Also usable as a plain sparse HMM
// (arbitrary transitions) by filling the CSR arrays directly.
struct StateSpace {
  int num_states = 0;

  // Incoming transitions per destination, CSR layout; sources are sorted
  // ascending within each destination.
  std::vector<int32_t> in_offsets;
  std::vector<int32_t> in_source;
  std::vector<double> in_logprob;

  std::vector<double> init_logprob;

  // Bar-pointer metadata, indexed by state.
  std::vector<uint8_t> region;      // StateRegion
  std::vector<int16_t> beat_index;  // 0-based beat within the bar
  std::vector<uint8_t> meter;       // beats per bar of the state's subspace

  // Checks that outgoing probabilities of every state sum to 1 within 1e-9.
  void CheckOutgoingNormalized() const;
};

StateSpace BuildStateSpace(const DecoderConfig& config);

// The geometrically spaced, deduplicated beat intervals (frames per beat)
// the state space is built from.
std::vector<long> TempoIntervals(const DecoderConfig& config);

// Observation log-likelihoods for one activation row ordered
// (beat, downbeat, non-beat), indexed by StateRegion. The interior density is
// the non-beat probability divided by the relative size of the non-beat
// region (round(1/observation_weight) - 1); all densities floor at 1e-10.
std::array<double, 3> ObservationLogProbs(const float* activation_row,
                                          double observation_weight);

constexpr double kObservationFloor = 1e-10;

// Exact Viterbi over the sparse state space. obs(t, state) returns the
// observation log-likelihood. Ties prefer the lowest state index, which
// yields the reverse-lexicographically smallest optimal path.
template <typename ObsFn>
std::vector<int32_t> Viterbi(long frames, const StateSpace& space, ObsFn&& obs) {
  if (frames < 1) {
    throw BfError(ErrorKind::kEmptyInput, "viterbi needs at least one frame");
  }
  const int n = space.num_states;
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  std::vector<double> prev(n), cur(n);
  std::vector<int32_t> backptr(static_cast<size_t>(frames) * n, -1);

  for (int s = 0; s < n; ++s) prev[s] = space.init_logprob[s] + obs(0, s);

  for (long t = 1; t < frames; ++t) {
    int32_t* bp = backptr.data() + static_cast<size_t>(t) * n;
    for (int s = 0; s < n; ++s) {
      double best = kNegInf;
      int32_t best_src = -1;
      for (int32_t k = space.in_offsets[s]; k < space.in_offsets[s + 1]; ++k) {
        const double cand = prev[space.in_source[k]] + space.in_logprob[k];
        if (cand > best) {  // sources ascend, so ties keep the lowest source
          best = cand;
          best_src = space.in_source[k];
        }
      }
      cur[s] = best == kNegInf ? kNegInf : best + obs(t, s);
      bp[s] = best_src;
    }
    std::swap(prev, cur);
  }

  double best = kNegInf;
  int32_t best_state = -1;
  for (int s = 0; s < n; ++s) {
    if (prev[s] > best) {
      best = prev[s];
      best_state = s;
    }
  }
  if (best_state < 0 || best == kNegInf) {
    throw BfError(ErrorKind::kNoFeasiblePath, "all paths have zero probability");
  }

  std::vector<int32_t> path(frames);
  path[frames - 1] = best_state;
  for (long t = frames - 1; t > 0; --t) {
    path[t - 1] = backptr[static_cast<size_t>(t) * n + path[t]];
  }
  return path;
}

// Decoded events with the winning bar length.
struct BeatSequence {
  std::vector<BeatEvent> events;
  int meter = 0;
};

// Emits one event per first entry into a beat region; bar_position is the
// state's beat index + 1.
BeatSequence PathToEvents(const std::vector<int32_t>& path,
                          const StateSpace& space, int frame_rate);

// Build + Viterbi + events in one call.
BeatSequence Decode(const ActivationSequence& activations,
                    const DecoderConfig& config);
BeatSequence DecodeWithSpace(const ActivationSequence& activations,
                             const StateSpace& space,
                             const DecoderConfig& config);

// Grid for validation-time decoder optimization, enumerated preset-major,
// then lambda, then observation weight (tie-break follows this order).
struct TuneGrid {
  std::vector<double> lambdas = {30.0, 100.0, 300.0};
  std::vector<double> observation_weights = {1.0 / 16.0};
  std::vector<std::pair<double, double>> bpm_presets = {{55.0, 215.0}};
};

// Exhaustive search maximizing the mean of beat F1 and downbeat F1 on the
// validation pairs at the given matching tolerance.
DecoderConfig Tune(const DecoderConfig& base, const TuneGrid& grid,
                   const std::vector<std::pair<ActivationSequence, BeatAnnotation>>& val_set,
                   double tolerance_window, int jobs);

}  // namespace beatforge

#endif  // BEATFORGE_HMM_H_
