// beatforge/capi.cc

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

#include "beatforge/beatforge.h"

#include <cstring>
#include <new>
#include <string>

#include "beatforge/pipeline.h"
#include "beatforge/synthcorpus.h"

namespace {

thread_local std::string g_last_error;

bf_status StatusFromKind(beatforge::ErrorKind kind) {
  using beatforge::ErrorKind;
  switch (kind) {
    case ErrorKind::kInvalidArgument: return BF_ERR_INVALID_ARGUMENT;
    case ErrorKind::kEmptyInput: return BF_ERR_EMPTY_INPUT;
    case ErrorKind::kShape: return BF_ERR_SHAPE;
    case ErrorKind::kLabel: return BF_ERR_LABEL;
    case ErrorKind::kConfig: return BF_ERR_CONFIG;
    case ErrorKind::kIo: return BF_ERR_IO;
    case ErrorKind::kDecode: return BF_ERR_DECODE;
    case ErrorKind::kMissingStem: return BF_ERR_MISSING_STEM;
    case ErrorKind::kStemMismatch: return BF_ERR_STEM_MISMATCH;
    case ErrorKind::kIncompatibleCheckpoint: return BF_ERR_INCOMPATIBLE_CHECKPOINT;
    case ErrorKind::kTrainingDiverged: return BF_ERR_TRAINING_DIVERGED;
    case ErrorKind::kNoFeasiblePath: return BF_ERR_NO_FEASIBLE_PATH;
    case ErrorKind::kIncompleteCorpus: return BF_ERR_INCOMPLETE_CORPUS;
    case ErrorKind::kInput: return BF_ERR_INPUT;
  }
  return BF_ERR_UNKNOWN;
}

template <typename Fn>
bf_status Wrap(Fn&& fn) {
  try {
    fn();
    return BF_OK;
  } catch (const beatforge::BfError& e) {
    g_last_error = e.what();
    return StatusFromKind(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BF_ERR_UNKNOWN;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BF_ERR_UNKNOWN;
  }
}

bf_status RequireArgs(bool ok) {
  if (!ok) g_last_error = "null argument";
  return ok ? BF_OK : BF_ERR_INVALID_ARGUMENT;
}

beatforge::FeatureConfig ToFeatureConfig(const bf_feature_config* c) {
  beatforge::FeatureConfig out;
  if (c == nullptr) return out;
  out.sample_rate = c->sample_rate;
  out.frame_rate = c->frame_rate;
  out.window_sizes.clear();
  for (int i = 0; i < c->num_windows && i < 4; ++i) {
    out.window_sizes.push_back(c->window_sizes[i]);
  }
  out.n_bands = c->n_bands;
  out.fmin = c->fmin;
  out.fmax = c->fmax;
  out.log_offset = c->log_offset;
  return out;
}

beatforge::DecoderConfig ToDecoderConfig(const bf_decoder_config* c) {
  beatforge::DecoderConfig out;
  if (c == nullptr) return out;
  out.beats_per_bar.clear();
  for (int i = 0; i < c->num_meters && i < 2; ++i) {
    out.beats_per_bar.push_back(c->beats_per_bar[i]);
  }
  out.min_bpm = c->min_bpm;
  out.max_bpm = c->max_bpm;
  out.tempo_levels = c->tempo_levels;
  out.transition_lambda = c->transition_lambda;
  out.observation_weight = c->observation_weight;
  out.frame_rate = c->frame_rate;
  return out;
}

beatforge::TrainConfig ToTrainConfig(const bf_train_config* c) {
  beatforge::TrainConfig out;
  if (c == nullptr) return out;
  out.learning_rate = c->learning_rate;
  out.batch_size = c->batch_size;
  out.max_epochs = c->max_epochs;
  out.patience = c->patience;
  out.gradient_clip_norm = c->gradient_clip_norm;
  out.seed = c->seed;
  out.target_widen_frames = c->target_widen_frames;
  out.widen_weight = c->widen_weight;
  out.class_weights = {c->class_weights[0], c->class_weights[1], c->class_weights[2]};
  out.jobs = c->jobs;
  return out;
}

beatforge::OnsetConfig ToOnsetConfig(const bf_onset_config* c) {
  beatforge::OnsetConfig out;
  if (c == nullptr) return out;
  out.features.sample_rate = c->sample_rate;
  out.features.frame_rate = c->frame_rate;
  out.features.window_sizes = {c->window};
  out.features.n_bands = c->n_bands;
  out.features.fmin = c->fmin;
  out.features.fmax = c->fmax;
  out.features.log_offset = c->log_offset;
  out.pre_max = c->pre_max;
  out.post_max = c->post_max;
  out.pre_avg = c->pre_avg;
  out.post_avg = c->post_avg;
  out.delta = c->delta;
  out.wait = c->wait;
  return out;
}

beatforge::EvalConfig ToEvalConfig(const bf_eval_config* c) {
  beatforge::EvalConfig out;
  if (c == nullptr) return out;
  out.tolerance_window = c->tolerance_window;
  out.skip_intro = c->skip_intro;
  return out;
}

}  // namespace

struct bf_clip {
  beatforge::AudioClip clip;
};
struct bf_features {
  beatforge::FeatureMatrix features;
};
struct bf_activations {
  beatforge::ActivationSequence activations;
};
struct bf_weights {
  beatforge::NetworkWeights weights;
};
struct bf_beats {
  beatforge::BeatSequence beats;
};

extern "C" {

const char* bf_status_name(bf_status status) {
  switch (status) {
    case BF_OK: return "ok";
    case BF_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case BF_ERR_EMPTY_INPUT: return "empty_input";
    case BF_ERR_SHAPE: return "shape_error";
    case BF_ERR_LABEL: return "label_error";
    case BF_ERR_CONFIG: return "config_error";
    case BF_ERR_IO: return "io_error";
    case BF_ERR_DECODE: return "decode_error";
    case BF_ERR_MISSING_STEM: return "missing_stem";
    case BF_ERR_STEM_MISMATCH: return "stem_mismatch";
    case BF_ERR_INCOMPATIBLE_CHECKPOINT: return "incompatible_checkpoint";
    case BF_ERR_TRAINING_DIVERGED: return "training_diverged";
    case BF_ERR_NO_FEASIBLE_PATH: return "no_feasible_path";
    case BF_ERR_INCOMPLETE_CORPUS: return "incomplete_corpus";
    case BF_ERR_INPUT: return "input_error";
    case BF_ERR_UNKNOWN: return "unknown";
  }
  return "unknown";
}

const char* bf_last_error(void) { return g_last_error.c_str(); }

const char* bf_version(void) { return "0.1.0"; }

void bf_feature_config_default(bf_feature_config* config) {
  if (config == nullptr) return;
  const beatforge::FeatureConfig d;
  config->sample_rate = d.sample_rate;
  config->frame_rate = d.frame_rate;
  config->num_windows = static_cast<int32_t>(d.window_sizes.size());
  for (size_t i = 0; i < 4; ++i) {
    config->window_sizes[i] =
        i < d.window_sizes.size() ? d.window_sizes[i] : 0;
  }
  config->n_bands = d.n_bands;
  config->fmin = d.fmin;
  config->fmax = d.fmax;
  config->log_offset = d.log_offset;
}

void bf_decoder_config_default(bf_decoder_config* config) {
  if (config == nullptr) return;
  const beatforge::DecoderConfig d;
  config->num_meters = static_cast<int32_t>(d.beats_per_bar.size());
  for (size_t i = 0; i < 2; ++i) {
    config->beats_per_bar[i] = i < d.beats_per_bar.size() ? d.beats_per_bar[i] : 0;
  }
  config->min_bpm = d.min_bpm;
  config->max_bpm = d.max_bpm;
  config->tempo_levels = d.tempo_levels;
  config->transition_lambda = d.transition_lambda;
  config->observation_weight = d.observation_weight;
  config->frame_rate = d.frame_rate;
}

void bf_train_config_default(bf_train_config* config) {
  if (config == nullptr) return;
  const beatforge::TrainConfig d;
  config->learning_rate = d.learning_rate;
  config->batch_size = d.batch_size;
  config->max_epochs = d.max_epochs;
  config->patience = d.patience;
  config->gradient_clip_norm = d.gradient_clip_norm;
  config->seed = d.seed;
  config->target_widen_frames = d.target_widen_frames;
  config->widen_weight = d.widen_weight;
  for (int i = 0; i < 3; ++i) config->class_weights[i] = d.class_weights[i];
  config->jobs = d.jobs;
}

void bf_onset_config_default(bf_onset_config* config) {
  if (config == nullptr) return;
  const beatforge::OnsetConfig d;
  config->sample_rate = d.features.sample_rate;
  config->frame_rate = d.features.frame_rate;
  config->window = d.features.window_sizes[0];
  config->n_bands = d.features.n_bands;
  config->fmin = d.features.fmin;
  config->fmax = d.features.fmax;
  config->log_offset = d.features.log_offset;
  config->pre_max = d.pre_max;
  config->post_max = d.post_max;
  config->pre_avg = d.pre_avg;
  config->post_avg = d.post_avg;
  config->delta = d.delta;
  config->wait = d.wait;
}

void bf_eval_config_default(bf_eval_config* config) {
  if (config == nullptr) return;
  const beatforge::EvalConfig d;
  config->tolerance_window = d.tolerance_window;
  config->skip_intro = d.skip_intro;
}

bf_status bf_clip_load_wav(const char* path, int32_t target_rate, bf_clip** out) {
  if (bf_status s = RequireArgs(path && out); s != BF_OK) return s;
  return Wrap([&] {
    auto* handle = new bf_clip;
    handle->clip = beatforge::LoadWavFile(path, target_rate);
    *out = handle;
  });
}

bf_status bf_clip_from_samples(const float* samples, int64_t count,
                               int32_t sample_rate, const char* source_id,
                               bf_clip** out) {
  if (bf_status s = RequireArgs(samples && out && count >= 0); s != BF_OK) return s;
  return Wrap([&] {
    if (sample_rate <= 0) {
      throw beatforge::BfError(beatforge::ErrorKind::kInvalidArgument,
                               "sample_rate must be positive");
    }
    auto* handle = new bf_clip;
    handle->clip.samples.assign(samples, samples + count);
    handle->clip.sample_rate = sample_rate;
    handle->clip.source_id = source_id != nullptr ? source_id : "";
    beatforge::NormalizeAmplitude(&handle->clip);
    *out = handle;
  });
}

void bf_clip_free(bf_clip* clip) { delete clip; }

int64_t bf_clip_num_samples(const bf_clip* clip) {
  return clip == nullptr ? 0 : static_cast<int64_t>(clip->clip.samples.size());
}

int32_t bf_clip_sample_rate(const bf_clip* clip) {
  return clip == nullptr ? 0 : clip->clip.sample_rate;
}

bf_status bf_extract_features(const bf_clip* clip, const bf_feature_config* config,
                              bf_features** out) {
  if (bf_status s = RequireArgs(clip && config && out); s != BF_OK) return s;
  return Wrap([&] {
    auto* handle = new bf_features;
    handle->features = beatforge::ExtractFeatures(clip->clip, ToFeatureConfig(config));
    *out = handle;
  });
}

void bf_features_free(bf_features* features) { delete features; }

int64_t bf_features_num_frames(const bf_features* features) {
  return features == nullptr ? 0 : features->features.data.frames;
}

int32_t bf_features_dims(const bf_features* features) {
  return features == nullptr ? 0 : features->features.data.dims;
}

int32_t bf_features_frame_rate(const bf_features* features) {
  return features == nullptr ? 0 : features->features.frame_rate;
}

const float* bf_features_data(const bf_features* features) {
  return features == nullptr ? nullptr : features->features.data.values.data();
}

bf_status bf_features_save(const bf_features* features, const char* path) {
  if (bf_status s = RequireArgs(features && path); s != BF_OK) return s;
  return Wrap([&] { beatforge::SaveFeatures(features->features, path); });
}

bf_status bf_features_load(const char* path, bf_features** out) {
  if (bf_status s = RequireArgs(path && out); s != BF_OK) return s;
  return Wrap([&] {
    auto* handle = new bf_features;
    handle->features = beatforge::LoadFeatures(path);
    *out = handle;
  });
}

bf_status bf_weights_load(const char* path, bf_weights** out) {
  if (bf_status s = RequireArgs(path && out); s != BF_OK) return s;
  return Wrap([&] {
    auto* handle = new bf_weights;
    handle->weights = beatforge::LoadWeights(path);
    *out = handle;
  });
}

bf_status bf_weights_save(const bf_weights* weights, const char* path) {
  if (bf_status s = RequireArgs(weights && path); s != BF_OK) return s;
  return Wrap([&] { beatforge::SaveWeights(weights->weights, path); });
}

void bf_weights_free(bf_weights* weights) { delete weights; }

int32_t bf_weights_input_dim(const bf_weights* weights) {
  return weights == nullptr ? 0 : weights->weights.input_dim;
}

bf_status bf_forward(const bf_features* features, const bf_weights* weights,
                     bf_activations** out) {
  if (bf_status s = RequireArgs(features && weights && out); s != BF_OK) return s;
  return Wrap([&] {
    auto* handle = new bf_activations;
    handle->activations = beatforge::Forward(features->features, weights->weights);
    *out = handle;
  });
}

void bf_activations_free(bf_activations* activations) { delete activations; }

int64_t bf_activations_num_frames(const bf_activations* activations) {
  return activations == nullptr ? 0 : activations->activations.rows.frames;
}

const float* bf_activations_data(const bf_activations* activations) {
  return activations == nullptr ? nullptr
                                : activations->activations.rows.values.data();
}

bf_status bf_decode(const bf_activations* activations,
                    const bf_decoder_config* config, bf_beats** out) {
  if (bf_status s = RequireArgs(activations && config && out); s != BF_OK) return s;
  return Wrap([&] {
    auto* handle = new bf_beats;
    handle->beats =
        beatforge::Decode(activations->activations, ToDecoderConfig(config));
    *out = handle;
  });
}

void bf_beats_free(bf_beats* beats) { delete beats; }

int64_t bf_beats_count(const bf_beats* beats) {
  return beats == nullptr ? 0 : static_cast<int64_t>(beats->beats.events.size());
}

int32_t bf_beats_meter(const bf_beats* beats) {
  return beats == nullptr ? 0 : beats->beats.meter;
}

bf_status bf_beats_get(const bf_beats* beats, int64_t index, double* time,
                       int32_t* bar_position) {
  if (bf_status s = RequireArgs(beats && time && bar_position); s != BF_OK) return s;
  if (index < 0 || index >= static_cast<int64_t>(beats->beats.events.size())) {
    g_last_error = "beat index out of range";
    return BF_ERR_INVALID_ARGUMENT;
  }
  *time = beats->beats.events[index].time;
  *bar_position = beats->beats.events[index].bar_position;
  return BF_OK;
}

bf_status bf_beats_save(const bf_beats* beats, const char* path) {
  if (bf_status s = RequireArgs(beats && path); s != BF_OK) return s;
  return Wrap([&] { beatforge::WriteBeatsFile(beats->beats.events, path); });
}

bf_status bf_mean_abs_magnitude(const bf_clip* clip, double* out) {
  if (bf_status s = RequireArgs(clip && out); s != BF_OK) return s;
  return Wrap([&] { *out = beatforge::MeanAbsMagnitude(clip->clip); });
}

bf_status bf_absm_filter(const bf_clip* clip, int32_t* keep) {
  if (bf_status s = RequireArgs(clip && keep); s != BF_OK) return s;
  return Wrap([&] { *keep = beatforge::AbsmFilter(clip->clip) ? 1 : 0; });
}

bf_status bf_osfq_filter(const bf_clip* clip, const bf_onset_config* config,
                         int32_t* keep) {
  if (bf_status s = RequireArgs(clip && config && keep); s != BF_OK) return s;
  return Wrap([&] {
    *keep = beatforge::OsfqFilter(clip->clip, ToOnsetConfig(config)) ? 1 : 0;
  });
}

bf_status bf_detect_onsets(const bf_clip* clip, const bf_onset_config* config,
                           double** times, int64_t* count) {
  if (bf_status s = RequireArgs(clip && config && times && count); s != BF_OK) {
    return s;
  }
  return Wrap([&] {
    const auto onsets = beatforge::DetectOnsets(clip->clip, ToOnsetConfig(config));
    auto* buffer = new double[onsets.size()];
    std::memcpy(buffer, onsets.data(), onsets.size() * sizeof(double));
    *times = buffer;
    *count = static_cast<int64_t>(onsets.size());
  });
}

void bf_free_doubles(double* values) { delete[] values; }

bf_status bf_cmd_features(const char* wav_path, const bf_feature_config* config,
                          const char* out_path) {
  if (bf_status s = RequireArgs(wav_path && config && out_path); s != BF_OK) return s;
  return Wrap([&] {
    beatforge::ExtractFeaturesFile(wav_path, ToFeatureConfig(config), out_path);
  });
}

bf_status bf_cmd_track(const char* wav_path, const char* weights_path,
                       const bf_feature_config* feature_config,
                       const bf_decoder_config* decoder_config,
                       const char* out_beats_path) {
  if (bf_status s = RequireArgs(wav_path && weights_path && feature_config &&
                                decoder_config && out_beats_path);
      s != BF_OK) {
    return s;
  }
  return Wrap([&] {
    beatforge::TrackFile(wav_path, weights_path, ToFeatureConfig(feature_config),
                         ToDecoderConfig(decoder_config), out_beats_path);
  });
}

bf_status bf_cmd_select_stems(const char* stem_dir, const char* rule,
                              const bf_onset_config* config, int32_t jobs,
                              const char* out_json_path) {
  if (bf_status s = RequireArgs(stem_dir && rule && config && out_json_path);
      s != BF_OK) {
    return s;
  }
  return Wrap([&] {
    beatforge::SelectStemsToFile(stem_dir, rule, ToOnsetConfig(config), jobs,
                                 out_json_path);
  });
}

bf_status bf_cmd_build_augset(const char* corpus_root, const char* combination,
                              uint64_t seed, const bf_onset_config* config,
                              int32_t jobs, const char* out_manifest_path) {
  if (bf_status s = RequireArgs(corpus_root && combination && config &&
                                out_manifest_path);
      s != BF_OK) {
    return s;
  }
  return Wrap([&] {
    beatforge::BuildAugset(corpus_root, combination, seed, ToOnsetConfig(config),
                           jobs, out_manifest_path);
  });
}

bf_status bf_cmd_train(const char* manifest_path,
                       const bf_feature_config* feature_config,
                       const bf_train_config* train_config,
                       const char* out_checkpoint_path,
                       const char* out_log_csv_path) {
  if (bf_status s = RequireArgs(manifest_path && feature_config && train_config &&
                                out_checkpoint_path);
      s != BF_OK) {
    return s;
  }
  return Wrap([&] {
    const auto manifest = beatforge::LoadManifest(manifest_path);
    beatforge::TrainFromManifest(
        manifest, ToFeatureConfig(feature_config), ToTrainConfig(train_config),
        out_checkpoint_path,
        out_log_csv_path != nullptr ? out_log_csv_path : "");
  });
}

bf_status bf_cmd_evaluate(const char* manifest_path, const char* split,
                          const char* weights_path,
                          const bf_feature_config* feature_config,
                          const bf_decoder_config* decoder_config,
                          const bf_eval_config* eval_config, int32_t tune,
                          int32_t jobs, const char* out_report_path,
                          const char* out_csv_path) {
  if (bf_status s = RequireArgs(manifest_path && split && weights_path &&
                                feature_config && decoder_config && eval_config &&
                                out_report_path);
      s != BF_OK) {
    return s;
  }
  return Wrap([&] {
    const auto manifest = beatforge::LoadManifest(manifest_path);
    const auto weights = beatforge::LoadWeights(weights_path);
    const auto features = ToFeatureConfig(feature_config);
    auto decoder = ToDecoderConfig(decoder_config);
    const auto eval = ToEvalConfig(eval_config);
    if (tune != 0) {
      decoder = beatforge::TuneOnManifest(manifest, weights, features, decoder,
                                          beatforge::TuneGrid{},
                                          eval.tolerance_window, jobs);
    }
    beatforge::EvalReport report = beatforge::EvaluateCorpus(
        manifest, beatforge::SplitFromName(split), weights, features, decoder,
        eval, jobs);
    report.model = weights_path;
    beatforge::WriteReport(report, out_report_path,
                           out_csv_path != nullptr ? out_csv_path : "");
  });
}

}  // extern "C"
