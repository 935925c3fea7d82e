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

#include "spcx/spcx.h"

#include <exception>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "core/contextual.h"
#include "core/degrade.h"
#include "core/error.h"
#include "core/features.h"
#include "core/hpc.h"
#include "core/image.h"
#include "core/metrics.h"
#include "core/objective.h"
#include "core/optimize.h"
#include "core/pk.h"
#include "core/png_io.h"
#include "core/rng.h"

struct spcx_image {
  spcx::Image img;
};

struct spcx_subimages {
  spcx::SubImageCollection coll;
};

struct spcx_matrix {
  spcx::Matrix m;
};

struct spcx_pseudo_set {
  std::vector<spcx_image> outputs;
  spcx_image mean;
  spcx_image variance;
};

struct spcx_trace {
  std::vector<spcx::TracePoint> points;
};

struct spcx_embeddings {
  std::size_t dim;
  spcx::EmbeddingSet set;
};

namespace {

thread_local std::string g_last_error;

spcx_status to_status(spcx::ErrorCode code) {
  switch (code) {
    case spcx::ErrorCode::kInvalidArgument: return SPCX_ERR_INVALID_ARGUMENT;
    case spcx::ErrorCode::kShapeMismatch: return SPCX_ERR_SHAPE_MISMATCH;
    case spcx::ErrorCode::kIo: return SPCX_ERR_IO;
    case spcx::ErrorCode::kDegenerate: return SPCX_ERR_DEGENERATE;
    case spcx::ErrorCode::kNumeric: return SPCX_ERR_NUMERIC;
  }
  return SPCX_ERR_INTERNAL;
}

// Runs fn, translating exceptions into a status and the thread's last error.
template <typename Fn>
spcx_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SPCX_OK;
  } catch (const spcx::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SPCX_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPCX_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SPCX_ERR_INTERNAL;
  }
}

void need(const void* p, const char* name) {
  if (p == nullptr) {
    spcx::fail(spcx::ErrorCode::kInvalidArgument,
               std::string(name) + " must not be NULL");
  }
}

spcx::ContextualConfig to_core(const spcx_contextual_config* c) {
  need(c, "contextual config");
  spcx::ContextualConfig cfg;
  cfg.bandwidth = c->bandwidth;
  cfg.epsilon = c->epsilon;
  spcx::require(c->form == SPCX_AGG_MAX_LOG || c->form == SPCX_AGG_SUM_LOG,
                spcx::ErrorCode::kInvalidArgument, "invalid aggregation form");
  cfg.form = static_cast<spcx::Aggregation>(c->form);
  cfg.rate = c->rate;
  spcx::require(c->mode == SPCX_PK_BLOCK || c->mode == SPCX_PK_PHASE,
                spcx::ErrorCode::kInvalidArgument, "invalid PK mode");
  cfg.mode = static_cast<spcx::PkMode>(c->mode);
  cfg.mean_shift = c->mean_shift != 0;
  cfg.validate();
  return cfg;
}

const char* extractor_name(spcx_extractor_kind kind) {
  switch (kind) {
    case SPCX_EXTRACTOR_IDENTITY: return "identity";
    case SPCX_EXTRACTOR_RANDOM_PROJECTION: return "random-projection";
  }
  spcx::fail(spcx::ErrorCode::kInvalidArgument, "invalid extractor kind");
}

std::vector<spcx::Image> gather(const spcx_image* const* imgs, std::size_t n,
                                const char* what) {
  need(imgs, what);
  std::vector<spcx::Image> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    need(imgs[i], what);
    out.push_back(imgs[i]->img);
  }
  return out;
}

spcx_image* wrap(spcx::Image img) { return new spcx_image{std::move(img)}; }

spcx_pseudo_set* wrap(spcx::PseudoResultSet set) {
  auto* out = new spcx_pseudo_set{{}, {std::move(set.mean)},
                                  {std::move(set.variance)}};
  out->outputs.reserve(set.outputs.size());
  for (auto& o : set.outputs) out->outputs.push_back({std::move(o)});
  return out;
}

}  // namespace

extern "C" {

const char* spcx_version(void) { return "0.1.0"; }

const char* spcx_last_error(void) { return g_last_error.c_str(); }

const char* spcx_status_name(spcx_status status) {
  switch (status) {
    case SPCX_OK: return "ok";
    case SPCX_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SPCX_ERR_SHAPE_MISMATCH: return "shape_mismatch";
    case SPCX_ERR_IO: return "io";
    case SPCX_ERR_DEGENERATE: return "degenerate";
    case SPCX_ERR_NUMERIC: return "numeric";
    case SPCX_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

/* images */

spcx_status spcx_image_create(int height, int width, int channels,
                              const double* data, spcx_image** out) {
  return guarded([&] {
    need(out, "out");
    spcx::Image img(height, width, channels);
    if (data) std::copy(data, data + img.size(), img.data().begin());
    *out = wrap(std::move(img));
  });
}

spcx_status spcx_image_clone(const spcx_image* img, spcx_image** out) {
  return guarded([&] {
    need(img, "image");
    need(out, "out");
    *out = wrap(img->img);
  });
}

void spcx_image_free(spcx_image* img) { delete img; }
int spcx_image_height(const spcx_image* img) { return img ? img->img.height() : 0; }
int spcx_image_width(const spcx_image* img) { return img ? img->img.width() : 0; }
int spcx_image_channels(const spcx_image* img) { return img ? img->img.channels() : 0; }
size_t spcx_image_size(const spcx_image* img) { return img ? img->img.size() : 0; }
const double* spcx_image_data(const spcx_image* img) {
  return img ? img->img.data().data() : nullptr;
}

spcx_status spcx_image_load_png(const char* path, spcx_image** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = wrap(spcx::load_png(path));
  });
}

spcx_status spcx_image_save_png(const spcx_image* img, const char* path) {
  return guarded([&] {
    need(img, "image");
    need(path, "path");
    spcx::save_png(img->img, path);
  });
}

spcx_status spcx_image_random_texture(int height, int width, int channels,
                                      uint64_t seed, spcx_image** out) {
  return guarded([&] {
    need(out, "out");
    spcx::SeededRng rng(seed);
    *out = wrap(spcx::random_texture(height, width, channels, rng));
  });
}

spcx_status spcx_image_random_uniform(int height, int width, int channels,
                                      uint64_t seed, double lo, double hi,
                                      spcx_image** out) {
  return guarded([&] {
    need(out, "out");
    spcx::SeededRng rng(seed);
    *out = wrap(spcx::random_uniform_image(height, width, channels, rng, lo, hi));
  });
}

spcx_status spcx_rng_uniform(uint64_t seed, double lo, double hi, size_t n,
                             double* out) {
  return guarded([&] {
    if (n > 0) need(out, "out");
    spcx::SeededRng rng(seed);
    auto v = rng.uniform(lo, hi, n);
    std::copy(v.begin(), v.end(), out);
  });
}

/* PK */

spcx_status spcx_pk_decompose(const spcx_image* img, int rate,
                              spcx_pk_mode mode, spcx_subimages** out) {
  return guarded([&] {
    need(img, "image");
    need(out, "out");
    spcx::require(mode == SPCX_PK_BLOCK || mode == SPCX_PK_PHASE,
                  spcx::ErrorCode::kInvalidArgument, "invalid PK mode");
    *out = new spcx_subimages{
        spcx::pk_decompose(img->img, rate, static_cast<spcx::PkMode>(mode))};
  });
}

spcx_status spcx_pk_recompose(const spcx_subimages* coll, spcx_image** out) {
  return guarded([&] {
    need(coll, "sub-images");
    need(out, "out");
    *out = wrap(spcx::pk_recompose(coll->coll));
  });
}

spcx_status spcx_subimages_permute(const spcx_subimages* coll,
                                   const size_t* perm, size_t n,
                                   spcx_subimages** out) {
  return guarded([&] {
    need(coll, "sub-images");
    need(out, "out");
    if (n > 0) need(perm, "perm");
    std::vector<std::size_t> p(perm, perm + n);
    *out = new spcx_subimages{spcx::permute_subimages(coll->coll, p)};
  });
}

void spcx_subimages_free(spcx_subimages* coll) { delete coll; }
size_t spcx_subimages_count(const spcx_subimages* coll) {
  return coll ? coll->coll.count() : 0;
}
size_t spcx_subimages_dim(const spcx_subimages* coll) {
  return coll ? coll->coll.dim() : 0;
}
const double* spcx_subimages_vector(const spcx_subimages* coll, size_t index) {
  if (!coll || index >= coll->coll.count()) return nullptr;
  return coll->coll.vector(index).data();
}

spcx_status spcx_subimages_get_image(const spcx_subimages* coll, size_t index,
                                     spcx_image** out) {
  return guarded([&] {
    need(coll, "sub-images");
    need(out, "out");
    *out = wrap(coll->coll.sub_image(index));
  });
}

/* contextual */

void spcx_contextual_config_default(spcx_contextual_config* cfg) {
  if (!cfg) return;
  const spcx::ContextualConfig d;
  cfg->bandwidth = d.bandwidth;
  cfg->epsilon = d.epsilon;
  cfg->form = static_cast<spcx_aggregation>(d.form);
  cfg->rate = d.rate;
  cfg->mode = static_cast<spcx_pk_mode>(d.mode);
  cfg->mean_shift = d.mean_shift ? 1 : 0;
}

void spcx_matrix_free(spcx_matrix* m) { delete m; }
size_t spcx_matrix_rows(const spcx_matrix* m) { return m ? m->m.rows() : 0; }
size_t spcx_matrix_cols(const spcx_matrix* m) { return m ? m->m.cols() : 0; }
const double* spcx_matrix_data(const spcx_matrix* m) {
  return m ? m->m.values().data() : nullptr;
}

spcx_status spcx_distance(const spcx_image* x, const spcx_image* y,
                          const spcx_contextual_config* cfg, double* out) {
  return guarded([&] {
    need(x, "x");
    need(y, "y");
    need(out, "out");
    *out = spcx::spcx(x->img, y->img, to_core(cfg));
  });
}

spcx_status spcx_distance_grad(const spcx_image* x, const spcx_image* y,
                               const spcx_contextual_config* cfg,
                               double* value, spcx_image** grad) {
  return guarded([&] {
    need(x, "x");
    need(y, "y");
    need(grad, "grad");
    auto [v, g] = spcx::spcx_value_and_grad(x->img, y->img, to_core(cfg));
    if (value) *value = v;
    *grad = wrap(std::move(g));
  });
}

spcx_status spcx_kernel_matrix(const spcx_image* x, const spcx_image* y,
                               const spcx_contextual_config* cfg,
                               spcx_matrix** out) {
  return guarded([&] {
    need(x, "x");
    need(y, "y");
    need(out, "out");
    *out = new spcx_matrix{spcx::spcx_kernel(x->img, y->img, to_core(cfg))};
  });
}

spcx_status spcx_cosine_distances(const spcx_subimages* x,
                                  const spcx_subimages* y, spcx_matrix** out) {
  return guarded([&] {
    need(x, "x");
    need(y, "y");
    need(out, "out");
    *out = new spcx_matrix{spcx::cosine_distance_matrix(x->coll, y->coll)};
  });
}

spcx_status spcx_cx(const spcx_image* x, const spcx_image* y,
                    spcx_extractor_kind extractor, uint64_t extractor_seed,
                    double bandwidth, double* out) {
  return guarded([&] {
    need(x, "x");
    need(y, "y");
    need(out, "out");
    auto ex = spcx::make_extractor(extractor_name(extractor), extractor_seed);
    spcx::require(bandwidth > 0.0, spcx::ErrorCode::kInvalidArgument,
                  "bandwidth must be positive");
    *out = spcx::cx(x->img, y->img, *ex, bandwidth);
  });
}

/* degradation */

void spcx_degrade_config_default(int size, spcx_degrade_config* cfg) {
  if (!cfg) return;
  const auto d = spcx::DegradationConfig::defaults_for(size);
  cfg->elastic_alpha = d.elastic_alpha;
  cfg->elastic_sigma = d.elastic_sigma;
  cfg->blur_sigma = d.blur_sigma;
  cfg->noise_std = d.noise_std;
  cfg->seed = d.seed;
  cfg->order = static_cast<spcx_degrade_order>(d.order);
}

spcx_status spcx_degrade(const spcx_image* img, const spcx_degrade_config* cfg,
                         spcx_image** out) {
  return guarded([&] {
    need(img, "image");
    need(cfg, "config");
    need(out, "out");
    spcx::require(cfg->order == SPCX_ORDER_BLUR_WARP ||
                      cfg->order == SPCX_ORDER_WARP_BLUR,
                  spcx::ErrorCode::kInvalidArgument, "invalid degrade order");
    spcx::DegradationConfig c;
    c.elastic_alpha = cfg->elastic_alpha;
    c.elastic_sigma = cfg->elastic_sigma;
    c.blur_sigma = cfg->blur_sigma;
    c.noise_std = cfg->noise_std;
    c.seed = cfg->seed;
    c.order = static_cast<spcx::DegradeOrder>(cfg->order);
    *out = wrap(spcx::degrade(img->img, c));
  });
}

spcx_status spcx_gaussian_blur(const spcx_image* img, double sigma,
                               spcx_image** out) {
  return guarded([&] {
    need(img, "image");
    need(out, "out");
    *out = wrap(spcx::gaussian_blur(img->img, sigma));
  });
}

/* HPC */

spcx_status spcx_generate(int g, uint64_t seed, uint64_t latent_seed,
                          spcx_pseudo_set** out) {
  return guarded([&] {
    need(out, "out");
    spcx::GeneratorSpec spec;
    spec.g = g;
    spec.seed = seed;
    *out = wrap(spcx::generate_pseudo_results(spec, latent_seed).results);
  });
}

spcx_status spcx_generate_identity(int g, uint64_t seed, uint64_t latent_seed,
                                   spcx_pseudo_set** out) {
  return guarded([&] {
    need(out, "out");
    spcx::GeneratorSpec spec;
    spec.g = g;
    spec.seed = seed;
    auto gen = spcx::generate_pseudo_results(spec, latent_seed);
    spcx::ToyGenerator generator(spec);
    *out = wrap(spcx::hpc_forward(generator, gen.latent,
                                  spcx::identity_modulation(spec)));
  });
}

void spcx_pseudo_set_free(spcx_pseudo_set* set) { delete set; }
size_t spcx_pseudo_set_count(const spcx_pseudo_set* set) {
  return set ? set->outputs.size() : 0;
}
const spcx_image* spcx_pseudo_set_output(const spcx_pseudo_set* set,
                                         size_t index) {
  if (!set || index >= set->outputs.size()) return nullptr;
  return &set->outputs[index];
}
const spcx_image* spcx_pseudo_set_mean(const spcx_pseudo_set* set) {
  return set ? &set->mean : nullptr;
}
const spcx_image* spcx_pseudo_set_variance(const spcx_pseudo_set* set) {
  return set ? &set->variance : nullptr;
}

/* objective */

void spcx_loss_weights_default(spcx_loss_weights* w) {
  if (!w) return;
  const spcx::LossWeights d;
  w->adv = d.adv;
  w->per = d.per;
  w->id = d.id;
}

spcx_status spcx_l2_loss(const spcx_image* pred,
                         const spcx_image* const* targets, size_t n,
                         double* out) {
  return guarded([&] {
    need(pred, "pred");
    need(out, "out");
    auto t = gather(targets, n, "targets");
    *out = spcx::l2_loss(pred->img, t);
  });
}

spcx_status spcx_multi_loss(const spcx_image* const* preds, size_t n,
                            const spcx_image* target,
                            const spcx_contextual_config* cfg, double* out) {
  return guarded([&] {
    need(target, "target");
    need(out, "out");
    auto p = gather(preds, n, "preds");
    *out = spcx::spcx_multi_loss(p, target->img, to_core(cfg));
  });
}

spcx_status spcx_reconstruction_loss(const spcx_image* const* preds, size_t n,
                                     const spcx_image* target,
                                     const spcx_contextual_config* cfg,
                                     const spcx_loss_weights* weights,
                                     spcx_extractor_kind extractor,
                                     uint64_t model_seed,
                                     spcx_loss_breakdown* out) {
  return guarded([&] {
    need(target, "target");
    need(weights, "weights");
    need(out, "out");
    auto p = gather(preds, n, "preds");
    auto suite = spcx::make_objective_suite(extractor_name(extractor), model_seed);
    spcx::LossWeights w{weights->adv, weights->per, weights->id};
    auto b = spcx::l_rec(p, target->img, to_core(cfg), w, suite.models());
    *out = {b.spcx, b.adv, b.per, b.id, b.total};
  });
}

/* optimize */

void spcx_optimize_config_default(spcx_optimize_config* cfg) {
  if (!cfg) return;
  const spcx::OptimizeConfig d;
  cfg->loss = static_cast<spcx_pixel_loss>(d.loss);
  cfg->steps = d.steps;
  cfg->step_size = d.step_size;
  spcx_contextual_config_default(&cfg->contextual);
  cfg->log_every = d.log_every;
}

spcx_status spcx_optimize(const spcx_image* init, const spcx_image* target,
                          const spcx_optimize_config* cfg, spcx_image** result,
                          spcx_trace** trace) {
  return guarded([&] {
    need(init, "init");
    need(target, "target");
    need(cfg, "config");
    need(result, "result");
    spcx::require(cfg->loss == SPCX_LOSS_SPCX || cfg->loss == SPCX_LOSS_L2,
                  spcx::ErrorCode::kInvalidArgument, "invalid pixel loss");
    spcx::OptimizeConfig c;
    c.loss = static_cast<spcx::PixelLoss>(cfg->loss);
    c.steps = cfg->steps;
    c.step_size = cfg->step_size;
    c.contextual = to_core(&cfg->contextual);
    c.log_every = cfg->log_every;
    auto r = spcx::optimize_image(init->img, target->img, c);
    *result = wrap(std::move(r.image));
    if (trace) *trace = new spcx_trace{std::move(r.trace)};
  });
}

void spcx_trace_free(spcx_trace* trace) { delete trace; }
size_t spcx_trace_length(const spcx_trace* trace) {
  return trace ? trace->points.size() : 0;
}
int spcx_trace_step(const spcx_trace* trace, size_t index) {
  return trace && index < trace->points.size() ? trace->points[index].step : -1;
}
double spcx_trace_loss(const spcx_trace* trace, size_t index) {
  return trace && index < trace->points.size() ? trace->points[index].loss : 0.0;
}
double spcx_trace_step_size(const spcx_trace* trace, size_t index) {
  return trace && index < trace->points.size() ? trace->points[index].step_size
                                               : 0.0;
}

/* metrics */

spcx_status spcx_psnr(const spcx_image* a, const spcx_image* b, double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = spcx::psnr(a->img, b->img);
  });
}

spcx_status spcx_ssim(const spcx_image* a, const spcx_image* b, double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = spcx::ssim(a->img, b->img);
  });
}

spcx_status spcx_deg(const double* a, const double* b, size_t dim,
                     double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = spcx::deg({a, dim}, {b, dim});
  });
}

spcx_status spcx_embeddings_create(size_t dim, spcx_embeddings** out) {
  return guarded([&] {
    need(out, "out");
    spcx::require(dim > 0, spcx::ErrorCode::kInvalidArgument,
                  "embedding dimension must be positive");
    *out = new spcx_embeddings{dim, {}};
  });
}

spcx_status spcx_embeddings_add(spcx_embeddings* set, const char* label,
                                const double* vector) {
  return guarded([&] {
    need(set, "set");
    need(label, "label");
    need(vector, "vector");
    set->set.labels.emplace_back(label);
    set->set.vectors.emplace_back(vector, vector + set->dim);
  });
}

void spcx_embeddings_free(spcx_embeddings* set) { delete set; }
size_t spcx_embeddings_count(const spcx_embeddings* set) {
  return set ? set->set.size() : 0;
}

spcx_status spcx_topk_accuracy(const spcx_embeddings* probes,
                               const spcx_embeddings* gallery, int k,
                               int strict, double* out) {
  return guarded([&] {
    need(probes, "probes");
    need(gallery, "gallery");
    need(out, "out");
    spcx::require(probes->dim == gallery->dim, spcx::ErrorCode::kShapeMismatch,
                  "probe and gallery dimensions differ");
    *out = spcx::topk_accuracy(
        probes->set, gallery->set, k,
        strict ? spcx::MissingLabel::kError : spcx::MissingLabel::kMiss);
  });
}

spcx_status spcx_mean_deg(const spcx_embeddings* probes,
                          const spcx_embeddings* gallery, double* out) {
  return guarded([&] {
    need(probes, "probes");
    need(gallery, "gallery");
    need(out, "out");
    spcx::require(probes->dim == gallery->dim, spcx::ErrorCode::kShapeMismatch,
                  "probe and gallery dimensions differ");
    *out = spcx::mean_deg(probes->set, gallery->set);
  });
}

}  // extern "C"
