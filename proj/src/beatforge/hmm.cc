// beatforge/hmm.cc

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

#include "beatforge/hmm.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "beatforge/evaluate.h"
#include "beatforge/parallel.h"

namespace beatforge {

namespace {

// Weights below this are dropped from the tempo-change rows before
// normalization, keeping the transition lists sparse.
constexpr double kTransitionThreshold = 2.220446049250313e-16;

struct PendingTransition {
  int32_t from;
  int32_t to;
  double logprob;
};

}  // namespace

void DecoderConfig::Validate() const {
  if (beats_per_bar.empty()) {
    throw BfError(ErrorKind::kConfig, "beats_per_bar must be non-empty");
  }
  for (int m : beats_per_bar) {
    if (m != 3 && m != 4) {
      throw BfError(ErrorKind::kConfig, "bar length must be 3 or 4 beats");
    }
  }
  if (min_bpm <= 0.0 || max_bpm < min_bpm) {
    throw BfError(ErrorKind::kConfig, "need 0 < min_bpm <= max_bpm");
  }
  if (tempo_levels < 1) {
    throw BfError(ErrorKind::kConfig, "tempo_levels must be >= 1");
  }
  if (transition_lambda <= 0.0) {
    throw BfError(ErrorKind::kConfig, "transition_lambda must be > 0");
  }
  if (observation_weight <= 0.0 || observation_weight > 1.0) {
    throw BfError(ErrorKind::kConfig, "observation_weight must be in (0, 1]");
  }
  if (frame_rate < 1) {
    throw BfError(ErrorKind::kConfig, "frame_rate must be >= 1");
  }
}

std::vector<long> TempoIntervals(const DecoderConfig& config) {
  const double frames_per_minute = 60.0 * config.frame_rate;
  const long min_interval = std::lround(frames_per_minute / config.max_bpm);
  const long max_interval = std::lround(frames_per_minute / config.min_bpm);
  if (min_interval < 2) {
    throw BfError(ErrorKind::kConfig,
                  "tempo range unrepresentable at this frame rate (max_bpm too high)");
  }

  std::vector<long> intervals;
  if (config.tempo_levels == 1) {
    intervals.push_back(
        std::lround(std::sqrt(static_cast<double>(min_interval) * max_interval)));
  } else {
    const double log_min = std::log(static_cast<double>(min_interval));
    const double log_max = std::log(static_cast<double>(max_interval));
    for (int k = 0; k < config.tempo_levels; ++k) {
      const double f = static_cast<double>(k) / (config.tempo_levels - 1);
      intervals.push_back(std::lround(std::exp(log_min + f * (log_max - log_min))));
    }
  }
  std::sort(intervals.begin(), intervals.end());
  intervals.erase(std::unique(intervals.begin(), intervals.end()), intervals.end());
  return intervals;
}

StateSpace BuildStateSpace(const DecoderConfig& config) {
  config.Validate();
  const std::vector<long> intervals = TempoIntervals(config);
  const int n_tempi = static_cast<int>(intervals.size());

  std::vector<int> meters = config.beats_per_bar;
  std::sort(meters.begin(), meters.end());
  meters.erase(std::unique(meters.begin(), meters.end()), meters.end());

  // Tempo-change weights between interval pairs, row-normalized after
  // thresholding. The self transition carries the largest weight.
  std::vector<std::vector<double>> change(n_tempi, std::vector<double>(n_tempi, 0.0));
  for (int i = 0; i < n_tempi; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n_tempi; ++j) {
      const double ratio =
          static_cast<double>(intervals[j]) / static_cast<double>(intervals[i]);
      double w = std::exp(-config.transition_lambda * std::abs(std::log(ratio)));
      if (w <= kTransitionThreshold) w = 0.0;
      change[i][j] = w;
      row_sum += w;
    }
    for (int j = 0; j < n_tempi; ++j) change[i][j] /= row_sum;
  }

  StateSpace space;

  // State layout: per meter, per tempo, per beat, per position.
  struct TempoBlock {
    int first_state;  // state id of (beat 0, position 0)
    long interval;
  };
  std::vector<std::vector<TempoBlock>> blocks(meters.size());
  int next_state = 0;
  for (size_t mi = 0; mi < meters.size(); ++mi) {
    blocks[mi].resize(n_tempi);
    for (int ti = 0; ti < n_tempi; ++ti) {
      blocks[mi][ti] = {next_state, intervals[ti]};
      next_state += meters[mi] * static_cast<int>(intervals[ti]);
    }
  }
  space.num_states = next_state;
  space.region.resize(next_state);
  space.beat_index.resize(next_state);
  space.meter.resize(next_state);

  std::vector<PendingTransition> transitions;
  transitions.reserve(static_cast<size_t>(next_state) + 1024);

  for (size_t mi = 0; mi < meters.size(); ++mi) {
    const int m = meters[mi];
    for (int ti = 0; ti < n_tempi; ++ti) {
      const long interval = blocks[mi][ti].interval;
      const int base = blocks[mi][ti].first_state;
      // Discrete positions whose phase falls inside the beat region.
      const long region_len = std::max<long>(
          1, static_cast<long>(std::ceil(config.observation_weight *
                                         static_cast<double>(interval))));
      for (int b = 0; b < m; ++b) {
        const int beat_base = base + b * static_cast<int>(interval);
        for (long p = 0; p < interval; ++p) {
          const int s = beat_base + static_cast<int>(p);
          space.beat_index[s] = static_cast<int16_t>(b);
          space.meter[s] = static_cast<uint8_t>(m);
          if (p < region_len) {
            space.region[s] = static_cast<uint8_t>(
                b == 0 ? StateRegion::kDownbeat : StateRegion::kBeat);
          } else {
            space.region[s] = static_cast<uint8_t>(StateRegion::kInterior);
          }
          if (p + 1 < interval) {
            transitions.push_back({s, s + 1, 0.0});
          } else {
            // Last position of the beat: move to position 0 of the next
            // beat, possibly at a different tempo.
            const int nb = (b + 1) % m;
            for (int tj = 0; tj < n_tempi; ++tj) {
              if (change[ti][tj] <= 0.0) continue;
              const int dest =
                  blocks[mi][tj].first_state +
                  nb * static_cast<int>(blocks[mi][tj].interval);
              transitions.push_back({s, dest, std::log(change[ti][tj])});
            }
          }
        }
      }
    }
  }

  // Uniform initial distribution over the union space.
  space.init_logprob.assign(space.num_states,
                            -std::log(static_cast<double>(space.num_states)));

  // CSR by destination with sources ascending.
  std::vector<int32_t> counts(space.num_states + 1, 0);
  for (const auto& t : transitions) counts[t.to + 1]++;
  space.in_offsets.resize(space.num_states + 1);
  space.in_offsets[0] = 0;
  for (int s = 0; s < space.num_states; ++s) {
    space.in_offsets[s + 1] = space.in_offsets[s] + counts[s + 1];
  }
  space.in_source.resize(transitions.size());
  space.in_logprob.resize(transitions.size());
  std::vector<int32_t> cursor(space.in_offsets.begin(), space.in_offsets.end() - 1);
  std::sort(transitions.begin(), transitions.end(),
            [](const PendingTransition& a, const PendingTransition& b) {
              return a.to != b.to ? a.to < b.to : a.from < b.from;
            });
  for (const auto& t : transitions) {
    const int32_t k = cursor[t.to]++;
    space.in_source[k] = t.from;
    space.in_logprob[k] = t.logprob;
  }
  return space;
}

void StateSpace::CheckOutgoingNormalized() const {
  std::vector<double> outgoing(num_states, 0.0);
  for (int s = 0; s < num_states; ++s) {
    for (int32_t k = in_offsets[s]; k < in_offsets[s + 1]; ++k) {
      outgoing[in_source[k]] += std::exp(in_logprob[k]);
    }
  }
  for (int s = 0; s < num_states; ++s) {
    if (std::abs(outgoing[s] - 1.0) > 1e-9) {
      throw BfError(ErrorKind::kConfig,
                    "outgoing probabilities of state " + std::to_string(s) +
                        " sum to " + std::to_string(outgoing[s]));
    }
  }
}

std::array<double, 3> ObservationLogProbs(const float* activation_row,
                                          double observation_weight) {
  const double p_beat = activation_row[0];
  const double p_down = activation_row[1];
  const double p_none = activation_row[2];
  const double divider =
      std::max(1.0, std::round(1.0 / observation_weight) - 1.0);
  return {
      std::log(std::max(p_beat, kObservationFloor)),
      std::log(std::max(p_down, kObservationFloor)),
      std::log(std::max(p_none / divider, kObservationFloor)),
  };
}

BeatSequence PathToEvents(const std::vector<int32_t>& path,
                          const StateSpace& space, int frame_rate) {
  BeatSequence out;
  if (path.empty()) return out;
  out.meter = space.meter.empty() ? 0 : space.meter[path[0]];
  for (size_t t = 0; t < path.size(); ++t) {
    const int32_t s = path[t];
    if (static_cast<StateRegion>(space.region[s]) == StateRegion::kInterior) {
      continue;
    }
    bool entering = t == 0;
    if (!entering) {
      const int32_t prev = path[t - 1];
      entering =
          static_cast<StateRegion>(space.region[prev]) == StateRegion::kInterior ||
          space.beat_index[prev] != space.beat_index[s];
    }
    if (entering) {
      BeatEvent event;
      event.time = static_cast<double>(t) / frame_rate;
      event.bar_position = space.beat_index[s] + 1;
      out.events.push_back(event);
    }
  }
  return out;
}

BeatSequence DecodeWithSpace(const ActivationSequence& activations,
                             const StateSpace& space,
                             const DecoderConfig& config) {
  const long frames = activations.rows.frames;
  if (frames < 1) {
    throw BfError(ErrorKind::kEmptyInput, "no activation frames");
  }
  std::vector<std::array<double, 3>> obs(static_cast<size_t>(frames));
  for (long t = 0; t < frames; ++t) {
    obs[t] = ObservationLogProbs(activations.rows.Row(t), config.observation_weight);
  }
  const auto path = Viterbi(frames, space, [&](long t, int s) {
    return obs[t][space.region[s]];
  });
  return PathToEvents(path, space, config.frame_rate);
}

BeatSequence Decode(const ActivationSequence& activations,
                    const DecoderConfig& config) {
  DecoderConfig local = config;
  if (local.frame_rate != activations.frame_rate && activations.frame_rate > 0) {
    local.frame_rate = activations.frame_rate;
  }
  const StateSpace space = BuildStateSpace(local);
  return DecodeWithSpace(activations, space, local);
}

DecoderConfig Tune(const DecoderConfig& base, const TuneGrid& grid,
                   const std::vector<std::pair<ActivationSequence, BeatAnnotation>>& val_set,
                   double tolerance_window, int jobs) {
  if (grid.lambdas.empty() || grid.observation_weights.empty() ||
      grid.bpm_presets.empty()) {
    throw BfError(ErrorKind::kConfig, "tune grid must be non-empty");
  }
  if (val_set.empty()) {
    throw BfError(ErrorKind::kEmptyInput, "tune needs a non-empty validation set");
  }

  EvalConfig eval_config;
  eval_config.tolerance_window = tolerance_window;

  DecoderConfig best = base;
  double best_score = -1.0;
  for (const auto& preset : grid.bpm_presets) {
    for (const double lambda : grid.lambdas) {
      for (const double weight : grid.observation_weights) {
        DecoderConfig candidate = base;
        candidate.min_bpm = preset.first;
        candidate.max_bpm = preset.second;
        candidate.transition_lambda = lambda;
        candidate.observation_weight = weight;
        candidate.Validate();

        const StateSpace space = BuildStateSpace(candidate);
        std::vector<double> scores(val_set.size(), 0.0);
        ParallelFor(static_cast<long>(val_set.size()), jobs, [&](long i) {
          const BeatSequence decoded =
              DecodeWithSpace(val_set[i].first, space, candidate);
          const ClipScores clip =
              EvaluateClip(decoded, val_set[i].second, eval_config);
          scores[i] = 0.5 * (clip.beat.f1 + clip.downbeat.f1);
        });
        double mean = 0.0;
        for (double s : scores) mean += s;
        mean /= static_cast<double>(scores.size());
        if (mean > best_score) {
          best_score = mean;
          best = candidate;
        }
      }
    }
  }
  return best;
}

}  // namespace beatforge
