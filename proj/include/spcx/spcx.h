// Copyright (c) 2026 The spcx Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the spcx library.
 *
 * Objects are opaque handles created by spcx_*_create/load functions and
 * released with the matching spcx_*_free. Every fallible call returns an
 * spcx_status; on failure spcx_last_error() holds a one-line description
 * for the calling thread. Pointers returned by accessors are borrowed and
 * stay valid until the owning handle is freed.
 */
#ifndef SPCX_SPCX_H_
#define SPCX_SPCX_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SPCX_BUILDING_LIBRARY)
#    define SPCX_API __declspec(dllexport)
#  else
#    define SPCX_API __declspec(dllimport)
#  endif
#else
#  define SPCX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spcx_status {
  SPCX_OK = 0,
  SPCX_ERR_INVALID_ARGUMENT = 1,
  SPCX_ERR_SHAPE_MISMATCH = 2,
  SPCX_ERR_IO = 3,
  SPCX_ERR_DEGENERATE = 4,
  SPCX_ERR_NUMERIC = 5,
  SPCX_ERR_INTERNAL = 99
} spcx_status;

SPCX_API const char* spcx_version(void);
SPCX_API const char* spcx_last_error(void);
SPCX_API const char* spcx_status_name(spcx_status status);

/* ---- images ------------------------------------------------------------ */

typedef struct spcx_image spcx_image;

/* Copies height*width*channels row-major, channel-last values. `data` may be
 * NULL for a zero image. */
SPCX_API spcx_status spcx_image_create(int height, int width, int channels,
                                       const double* data, spcx_image** out);
SPCX_API spcx_status spcx_image_clone(const spcx_image* img, spcx_image** out);
SPCX_API void spcx_image_free(spcx_image* img);
SPCX_API int spcx_image_height(const spcx_image* img);
SPCX_API int spcx_image_width(const spcx_image* img);
SPCX_API int spcx_image_channels(const spcx_image* img);
SPCX_API size_t spcx_image_size(const spcx_image* img);
SPCX_API const double* spcx_image_data(const spcx_image* img);

SPCX_API spcx_status spcx_image_load_png(const char* path, spcx_image** out);
SPCX_API spcx_status spcx_image_save_png(const spcx_image* img,
                                         const char* path);

/* Seeded smooth texture in [0.05, 0.95]. */
SPCX_API spcx_status spcx_image_random_texture(int height, int width,
                                               int channels, uint64_t seed,
                                               spcx_image** out);
/* Independent uniform pixels in [lo, hi). */
SPCX_API spcx_status spcx_image_random_uniform(int height, int width,
                                               int channels, uint64_t seed,
                                               double lo, double hi,
                                               spcx_image** out);

/* ---- seeded random numbers --------------------------------------------- */

/* n uniform draws in [lo, hi) from the stream of `seed` (SplitMix64). */
SPCX_API spcx_status spcx_rng_uniform(uint64_t seed, double lo, double hi,
                                      size_t n, double* out);

/* ---- PK sub-image decomposition ---------------------------------------- */

typedef enum spcx_pk_mode { SPCX_PK_BLOCK = 0, SPCX_PK_PHASE = 1 } spcx_pk_mode;

typedef struct spcx_subimages spcx_subimages;

SPCX_API spcx_status spcx_pk_decompose(const spcx_image* img, int rate,
                                       spcx_pk_mode mode, spcx_subimages** out);
SPCX_API spcx_status spcx_pk_recompose(const spcx_subimages* coll,
                                       spcx_image** out);
/* Output vector k is input vector perm[k]. */
SPCX_API spcx_status spcx_subimages_permute(const spcx_subimages* coll,
                                            const size_t* perm, size_t n,
                                            spcx_subimages** out);
SPCX_API void spcx_subimages_free(spcx_subimages* coll);
SPCX_API size_t spcx_subimages_count(const spcx_subimages* coll);
SPCX_API size_t spcx_subimages_dim(const spcx_subimages* coll);
SPCX_API const double* spcx_subimages_vector(const spcx_subimages* coll,
                                             size_t index);
/* Sub-image `index` as a standalone image (block: r x r, phase: H/r x W/r). */
SPCX_API spcx_status spcx_subimages_get_image(const spcx_subimages* coll,
                                              size_t index, spcx_image** out);

/* ---- contextual distances ---------------------------------------------- */

typedef enum spcx_aggregation {
  SPCX_AGG_MAX_LOG = 0,
  SPCX_AGG_SUM_LOG = 1
} spcx_aggregation;

typedef struct spcx_contextual_config {
  double bandwidth;
  double epsilon;
  spcx_aggregation form;
  int rate;
  spcx_pk_mode mode;
  int mean_shift;
} spcx_contextual_config;

/* bandwidth 0.2, epsilon 1e-5, MaxLog, rate 32, block, no mean shift. */
SPCX_API void spcx_contextual_config_default(spcx_contextual_config* cfg);

typedef struct spcx_matrix spcx_matrix;

SPCX_API void spcx_matrix_free(spcx_matrix* m);
SPCX_API size_t spcx_matrix_rows(const spcx_matrix* m);
SPCX_API size_t spcx_matrix_cols(const spcx_matrix* m);
SPCX_API const double* spcx_matrix_data(const spcx_matrix* m);

SPCX_API spcx_status spcx_distance(const spcx_image* x, const spcx_image* y,
                                   const spcx_contextual_config* cfg,
                                   double* out);
/* Gradient of spcx_distance with respect to x, same shape as x. */
SPCX_API spcx_status spcx_distance_grad(const spcx_image* x,
                                        const spcx_image* y,
                                        const spcx_contextual_config* cfg,
                                        double* value, spcx_image** grad);
SPCX_API spcx_status spcx_kernel_matrix(const spcx_image* x,
                                        const spcx_image* y,
                                        const spcx_contextual_config* cfg,
                                        spcx_matrix** out);
/* Raw cosine distance matrix between two collections. */
SPCX_API spcx_status spcx_cosine_distances(const spcx_subimages* x,
                                           const spcx_subimages* y,
                                           spcx_matrix** out);

typedef enum spcx_extractor_kind {
  SPCX_EXTRACTOR_IDENTITY = 0,
  SPCX_EXTRACTOR_RANDOM_PROJECTION = 1
} spcx_extractor_kind;

SPCX_API spcx_status spcx_cx(const spcx_image* x, const spcx_image* y,
                             spcx_extractor_kind extractor,
                             uint64_t extractor_seed, double bandwidth,
                             double* out);

/* ---- degradation -------------------------------------------------------- */

typedef enum spcx_degrade_order {
  SPCX_ORDER_BLUR_WARP = 0,
  SPCX_ORDER_WARP_BLUR = 1
} spcx_degrade_order;

typedef struct spcx_degrade_config {
  double elastic_alpha;
  double elastic_sigma;
  double blur_sigma;
  double noise_std;
  uint64_t seed;
  spcx_degrade_order order;
} spcx_degrade_config;

/* Declared defaults for an image whose larger side is `size` pixels. */
SPCX_API void spcx_degrade_config_default(int size, spcx_degrade_config* cfg);
SPCX_API spcx_status spcx_degrade(const spcx_image* img,
                                  const spcx_degrade_config* cfg,
                                  spcx_image** out);
SPCX_API spcx_status spcx_gaussian_blur(const spcx_image* img, double sigma,
                                        spcx_image** out);

/* ---- hierarchical pseudo results ---------------------------------------- */

typedef struct spcx_pseudo_set spcx_pseudo_set;

/* Builds the seeded toy generator with group depth g, draws latent and
 * modulation feature from latent_seed, and evaluates all 2^g outputs. */
SPCX_API spcx_status spcx_generate(int g, uint64_t seed, uint64_t latent_seed,
                                   spcx_pseudo_set** out);
/* Same, with every modulation pair forced to (alpha, beta) = (1, 0). */
SPCX_API spcx_status spcx_generate_identity(int g, uint64_t seed,
                                            uint64_t latent_seed,
                                            spcx_pseudo_set** out);
SPCX_API void spcx_pseudo_set_free(spcx_pseudo_set* set);
SPCX_API size_t spcx_pseudo_set_count(const spcx_pseudo_set* set);
SPCX_API const spcx_image* spcx_pseudo_set_output(const spcx_pseudo_set* set,
                                                  size_t index);
SPCX_API const spcx_image* spcx_pseudo_set_mean(const spcx_pseudo_set* set);
SPCX_API const spcx_image* spcx_pseudo_set_variance(const spcx_pseudo_set* set);

/* ---- objective ---------------------------------------------------------- */

typedef struct spcx_loss_weights {
  double adv;
  double per;
  double id;
} spcx_loss_weights;

/* (1, 0.1, 10). */
SPCX_API void spcx_loss_weights_default(spcx_loss_weights* w);

typedef struct spcx_loss_breakdown {
  double spcx;
  double adv;
  double per;
  double id;
  double total;
} spcx_loss_breakdown;

SPCX_API spcx_status spcx_l2_loss(const spcx_image* pred,
                                  const spcx_image* const* targets, size_t n,
                                  double* out);
SPCX_API spcx_status spcx_multi_loss(const spcx_image* const* preds, size_t n,
                                     const spcx_image* target,
                                     const spcx_contextual_config* cfg,
                                     double* out);
/* Perceptual and identity slots use `extractor` with distinct seeds derived
 * from model_seed; the frozen discriminator is seeded from model_seed. */
SPCX_API spcx_status spcx_reconstruction_loss(
    const spcx_image* const* preds, size_t n, const spcx_image* target,
    const spcx_contextual_config* cfg, const spcx_loss_weights* weights,
    spcx_extractor_kind extractor, uint64_t model_seed,
    spcx_loss_breakdown* out);

/* ---- pixel-space optimization ------------------------------------------- */

typedef enum spcx_pixel_loss { SPCX_LOSS_SPCX = 0, SPCX_LOSS_L2 = 1 } spcx_pixel_loss;

typedef struct spcx_optimize_config {
  spcx_pixel_loss loss;
  int steps;
  double step_size;
  spcx_contextual_config contextual;
  int log_every;
} spcx_optimize_config;

SPCX_API void spcx_optimize_config_default(spcx_optimize_config* cfg);

typedef struct spcx_trace spcx_trace;

SPCX_API spcx_status spcx_optimize(const spcx_image* init,
                                   const spcx_image* target,
                                   const spcx_optimize_config* cfg,
                                   spcx_image** result, spcx_trace** trace);
SPCX_API void spcx_trace_free(spcx_trace* trace);
SPCX_API size_t spcx_trace_length(const spcx_trace* trace);
SPCX_API int spcx_trace_step(const spcx_trace* trace, size_t index);
SPCX_API double spcx_trace_loss(const spcx_trace* trace, size_t index);
SPCX_API double spcx_trace_step_size(const spcx_trace* trace, size_t index);

/* ---- metrics ------------------------------------------------------------ */

SPCX_API spcx_status spcx_psnr(const spcx_image* a, const spcx_image* b,
                               double* out);
SPCX_API spcx_status spcx_ssim(const spcx_image* a, const spcx_image* b,
                               double* out);
SPCX_API spcx_status spcx_deg(const double* a, const double* b, size_t dim,
                              double* out);

typedef struct spcx_embeddings spcx_embeddings;

SPCX_API spcx_status spcx_embeddings_create(size_t dim, spcx_embeddings** out);
SPCX_API spcx_status spcx_embeddings_add(spcx_embeddings* set,
                                         const char* label,
                                         const double* vector);
SPCX_API void spcx_embeddings_free(spcx_embeddings* set);
SPCX_API size_t spcx_embeddings_count(const spcx_embeddings* set);

/* strict != 0: a probe label missing from the gallery is an error;
 * otherwise it counts as a miss. */
SPCX_API spcx_status spcx_topk_accuracy(const spcx_embeddings* probes,
                                        const spcx_embeddings* gallery, int k,
                                        int strict, double* out);
SPCX_API spcx_status spcx_mean_deg(const spcx_embeddings* probes,
                                   const spcx_embeddings* gallery,
                                   double* out);

#ifdef __cplusplus
}
#endif

#endif  /* SPCX_SPCX_H_ */
