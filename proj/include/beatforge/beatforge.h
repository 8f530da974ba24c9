/* beatforge/beatforge.h — public C API of the beatforge shared library.

   Copyright 2026  BeatForge Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

   THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
   KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
   WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
   MERCHANTABLITY OR NON-INFRINGEMENT.
   See the Apache 2 License for the specific language governing permissions and
   limitations under the License.

   All functions return bf_status; outputs are passed through pointers.
   On failure, bf_last_error() returns a thread-local message. Objects
   returned through bf_* handles are owned by the caller and released with
   the matching *_free function. Handles are immutable after creation and
   may be shared across threads.
*/

#ifndef BEATFORGE_BEATFORGE_H_
#define BEATFORGE_BEATFORGE_H_

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32
#define BF_API __declspec(dllexport)
#else
#define BF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bf_status {
  BF_OK = 0,
  BF_ERR_INVALID_ARGUMENT = 1,
  BF_ERR_EMPTY_INPUT = 2,
  BF_ERR_SHAPE = 3,
  BF_ERR_LABEL = 4,
  BF_ERR_CONFIG = 5,
  BF_ERR_IO = 6,
  BF_ERR_DECODE = 7,
  BF_ERR_MISSING_STEM = 8,
  BF_ERR_STEM_MISMATCH = 9,
  BF_ERR_INCOMPATIBLE_CHECKPOINT = 10,
  BF_ERR_TRAINING_DIVERGED = 11,
  BF_ERR_NO_FEASIBLE_PATH = 12,
  BF_ERR_INCOMPLETE_CORPUS = 13,
  BF_ERR_INPUT = 14,
  BF_ERR_UNKNOWN = 15
} bf_status;

BF_API const char* bf_status_name(bf_status status);
BF_API const char* bf_last_error(void);
BF_API const char* bf_version(void);

/* ------------------------------------------------------------------ */
/* Configs (plain structs; call the *_default initializers first).    */

typedef struct bf_feature_config {
  int32_t sample_rate;
  int32_t frame_rate;
  int32_t num_windows; /* up to 4 entries of window_sizes are used */
  int32_t window_sizes[4];
  int32_t n_bands;
  double fmin;
  double fmax;
  double log_offset;
} bf_feature_config;

BF_API void bf_feature_config_default(bf_feature_config* config);

typedef struct bf_decoder_config {
  int32_t num_meters; /* up to 2 entries of beats_per_bar are used */
  int32_t beats_per_bar[2];
  double min_bpm;
  double max_bpm;
  int32_t tempo_levels;
  double transition_lambda;
  double observation_weight;
  int32_t frame_rate;
} bf_decoder_config;

BF_API void bf_decoder_config_default(bf_decoder_config* config);

typedef struct bf_train_config {
  double learning_rate;
  int32_t batch_size;
  int32_t max_epochs;
  int32_t patience;
  double gradient_clip_norm;
  uint64_t seed;
  int32_t target_widen_frames;
  double widen_weight;
  double class_weights[3];
  int32_t jobs;
} bf_train_config;

BF_API void bf_train_config_default(bf_train_config* config);

typedef struct bf_onset_config {
  int32_t sample_rate;
  int32_t frame_rate;
  int32_t window;
  int32_t n_bands;
  double fmin;
  double fmax;
  double log_offset;
  int32_t pre_max;
  int32_t post_max;
  int32_t pre_avg;
  int32_t post_avg;
  double delta;
  int32_t wait;
} bf_onset_config;

BF_API void bf_onset_config_default(bf_onset_config* config);

typedef struct bf_eval_config {
  double tolerance_window;
  double skip_intro;
} bf_eval_config;

BF_API void bf_eval_config_default(bf_eval_config* config);

/* ------------------------------------------------------------------ */
/* Opaque handles.                                                     */

typedef struct bf_clip bf_clip;
typedef struct bf_features bf_features;
typedef struct bf_activations bf_activations;
typedef struct bf_weights bf_weights;
typedef struct bf_beats bf_beats;

/* Audio clips: mono [-1,1] samples. Loading decodes PCM WAV (8/16/24-bit
   int, 32-bit float), averages to mono, resamples when target_rate > 0 and
   normalizes amplitude. */
BF_API bf_status bf_clip_load_wav(const char* path, int32_t target_rate,
                                  bf_clip** out);
BF_API bf_status bf_clip_from_samples(const float* samples, int64_t count,
                                      int32_t sample_rate, const char* source_id,
                                      bf_clip** out);
BF_API void bf_clip_free(bf_clip* clip);
BF_API int64_t bf_clip_num_samples(const bf_clip* clip);
BF_API int32_t bf_clip_sample_rate(const bf_clip* clip);

/* Features. Data is row-major frames x dims. */
BF_API bf_status bf_extract_features(const bf_clip* clip,
                                     const bf_feature_config* config,
                                     bf_features** out);
BF_API void bf_features_free(bf_features* features);
BF_API int64_t bf_features_num_frames(const bf_features* features);
BF_API int32_t bf_features_dims(const bf_features* features);
BF_API int32_t bf_features_frame_rate(const bf_features* features);
BF_API const float* bf_features_data(const bf_features* features);
BF_API bf_status bf_features_save(const bf_features* features, const char* path);
BF_API bf_status bf_features_load(const char* path, bf_features** out);

/* Network weights. */
BF_API bf_status bf_weights_load(const char* path, bf_weights** out);
BF_API bf_status bf_weights_save(const bf_weights* weights, const char* path);
BF_API void bf_weights_free(bf_weights* weights);
BF_API int32_t bf_weights_input_dim(const bf_weights* weights);

/* Activation rows ordered (beat, downbeat, non-beat); row-major frames x 3. */
BF_API bf_status bf_forward(const bf_features* features, const bf_weights* weights,
                            bf_activations** out);
BF_API void bf_activations_free(bf_activations* activations);
BF_API int64_t bf_activations_num_frames(const bf_activations* activations);
BF_API const float* bf_activations_data(const bf_activations* activations);

/* Beat decoding. */
BF_API bf_status bf_decode(const bf_activations* activations,
                           const bf_decoder_config* config, bf_beats** out);
BF_API void bf_beats_free(bf_beats* beats);
BF_API int64_t bf_beats_count(const bf_beats* beats);
BF_API int32_t bf_beats_meter(const bf_beats* beats);
BF_API bf_status bf_beats_get(const bf_beats* beats, int64_t index, double* time,
                              int32_t* bar_position);
BF_API bf_status bf_beats_save(const bf_beats* beats, const char* path);

/* Stem selection. */
BF_API bf_status bf_mean_abs_magnitude(const bf_clip* clip, double* out);
BF_API bf_status bf_absm_filter(const bf_clip* clip, int32_t* keep);
BF_API bf_status bf_osfq_filter(const bf_clip* clip, const bf_onset_config* config,
                                int32_t* keep);
BF_API bf_status bf_detect_onsets(const bf_clip* clip, const bf_onset_config* config,
                                  double** times, int64_t* count);
BF_API void bf_free_doubles(double* values);

/* ------------------------------------------------------------------ */
/* File-level pipeline entry points (the CLI subcommands).             */

BF_API bf_status bf_cmd_features(const char* wav_path,
                                 const bf_feature_config* config,
                                 const char* out_path);

BF_API bf_status bf_cmd_track(const char* wav_path, const char* weights_path,
                              const bf_feature_config* feature_config,
                              const bf_decoder_config* decoder_config,
                              const char* out_beats_path);

BF_API bf_status bf_cmd_select_stems(const char* stem_dir, const char* rule,
                                     const bf_onset_config* config, int32_t jobs,
                                     const char* out_json_path);

BF_API bf_status bf_cmd_build_augset(const char* corpus_root,
                                     const char* combination, uint64_t seed,
                                     const bf_onset_config* config, int32_t jobs,
                                     const char* out_manifest_path);

BF_API bf_status bf_cmd_train(const char* manifest_path,
                              const bf_feature_config* feature_config,
                              const bf_train_config* train_config,
                              const char* out_checkpoint_path,
                              const char* out_log_csv_path);

/* When tune is non-zero, the decoder grid (defaults baked in) is searched on
   the manifest's validation split before evaluating. out_csv_path may be
   NULL. */
BF_API bf_status bf_cmd_evaluate(const char* manifest_path, const char* split,
                                 const char* weights_path,
                                 const bf_feature_config* feature_config,
                                 const bf_decoder_config* decoder_config,
                                 const bf_eval_config* eval_config, int32_t tune,
                                 int32_t jobs, const char* out_report_path,
                                 const char* out_csv_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BEATFORGE_BEATFORGE_H_ */
