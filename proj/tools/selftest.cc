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

#include "selftest.h"

#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cli_common.h"

namespace {

using cli::Image;

Image texture(int h, int w, int c, uint64_t seed) {
  spcx_image* raw = nullptr;
  cli::check(spcx_image_random_texture(h, w, c, seed, &raw), "-");
  return Image(raw);
}

bool same(const spcx_image* a, const spcx_image* b) {
  return spcx_image_size(a) == spcx_image_size(b) &&
         std::equal(spcx_image_data(a), spcx_image_data(a) + spcx_image_size(a),
                    spcx_image_data(b));
}

spcx_contextual_config rate(int r) {
  spcx_contextual_config cfg;
  spcx_contextual_config_default(&cfg);
  cfg.rate = r;
  return cfg;
}

bool pk_roundtrip() {
  Image img = texture(12, 12, 3, 1);
  for (int r : {1, 2, 3, 4, 6, 12}) {
    for (spcx_pk_mode mode : {SPCX_PK_BLOCK, SPCX_PK_PHASE}) {
      spcx_subimages* coll = nullptr;
      cli::check(spcx_pk_decompose(img.get(), r, mode, &coll), "-");
      spcx_image* back = nullptr;
      const spcx_status s = spcx_pk_recompose(coll, &back);
      spcx_subimages_free(coll);
      cli::check(s, "-");
      Image owned(back);
      if (!same(img.get(), back)) return false;
    }
  }
  return true;
}

bool self_distance() {
  Image img = texture(16, 16, 3, 2);
  auto cfg = rate(4);
  double d = 1;
  cli::check(spcx_distance(img.get(), img.get(), &cfg, &d), "-");
  return d <= 0.05;
}

bool kernel_rows() {
  Image a = texture(16, 16, 1, 3), b = texture(16, 16, 1, 4);
  auto cfg = rate(4);
  spcx_matrix* m = nullptr;
  cli::check(spcx_kernel_matrix(a.get(), b.get(), &cfg, &m), "-");
  bool ok = true;
  for (std::size_t i = 0; i < spcx_matrix_rows(m); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < spcx_matrix_cols(m); ++j)
      s += spcx_matrix_data(m)[i * spcx_matrix_cols(m) + j];
    ok = ok && std::abs(s - 1.0) < 1e-9;
  }
  spcx_matrix_free(m);
  return ok;
}

bool degrade_identity() {
  Image img = texture(16, 16, 3, 5);
  spcx_degrade_config cfg{0, 0, 0, 0, 9, SPCX_ORDER_BLUR_WARP};
  spcx_image* raw = nullptr;
  cli::check(spcx_degrade(img.get(), &cfg, &raw), "-");
  Image out(raw);
  return same(img.get(), out.get());
}

bool degrade_deterministic() {
  Image img = texture(24, 24, 3, 6);
  spcx_degrade_config cfg;
  spcx_degrade_config_default(24, &cfg);
  cfg.seed = 7;
  spcx_image *a = nullptr, *b = nullptr;
  cli::check(spcx_degrade(img.get(), &cfg, &a), "-");
  Image oa(a);
  cli::check(spcx_degrade(img.get(), &cfg, &b), "-");
  Image ob(b);
  return same(a, b);
}

bool hpc_count() {
  spcx_pseudo_set* set = nullptr;
  cli::check(spcx_generate(3, 0, 0, &set), "-");
  const bool ok = spcx_pseudo_set_count(set) == 8;
  spcx_pseudo_set_free(set);
  return ok;
}

bool hpc_identity() {
  spcx_pseudo_set* set = nullptr;
  cli::check(spcx_generate_identity(3, 0, 0, &set), "-");
  const spcx_image* v = spcx_pseudo_set_variance(set);
  bool ok = true;
  for (std::size_t i = 0; i < spcx_image_size(v); ++i) ok = ok && spcx_image_data(v)[i] == 0.0;
  spcx_pseudo_set_free(set);
  return ok;
}

bool loss_defaults() {
  spcx_loss_weights w;
  spcx_loss_weights_default(&w);
  return w.adv == 1.0 && w.per == 0.1 && w.id == 10.0;
}

bool l2_zero() {
  Image img = texture(8, 8, 3, 7);
  const spcx_image* targets[] = {img.get()};
  double v = 1;
  cli::check(spcx_l2_loss(img.get(), targets, 1, &v), "-");
  return v == 0.0;
}

bool metric_identities() {
  Image img = texture(16, 16, 3, 8);
  double p = 0, s = 0, d = 1;
  cli::check(spcx_psnr(img.get(), img.get(), &p), "-");
  cli::check(spcx_ssim(img.get(), img.get(), &s), "-");
  const double a[2] = {1, 0}, b[2] = {0, 1};
  cli::check(spcx_deg(a, b, 2, &d), "-");
  return p == 100.0 && std::abs(s - 1.0) < 1e-9 && d == 0.0;
}

bool topk_self() {
  spcx_embeddings* set = nullptr;
  cli::check(spcx_embeddings_create(3, &set), "-");
  double rows[4][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}};
  const char* labels[] = {"a", "b", "c", "d"};
  for (int i = 0; i < 4; ++i) cli::check(spcx_embeddings_add(set, labels[i], rows[i]), "-");
  double acc = 0;
  const spcx_status s = spcx_topk_accuracy(set, set, 1, 1, &acc);
  spcx_embeddings_free(set);
  cli::check(s, "-");
  return acc == 100.0;
}

}  // namespace

bool spcx_selftest(std::ostream& out) {
  const std::vector<std::pair<const char*, std::function<bool()>>> checks{
      {"pk_roundtrip_bit_exact", pk_roundtrip},
      {"spcx_self_distance", self_distance},
      {"kernel_rows_sum_to_one", kernel_rows},
      {"degrade_zero_parameters_identity", degrade_identity},
      {"degrade_deterministic", degrade_deterministic},
      {"hpc_eight_outputs_at_g3", hpc_count},
      {"hpc_identity_modulation_zero_variance", hpc_identity},
      {"loss_default_weights", loss_defaults},
      {"l2_self_zero", l2_zero},
      {"metric_identities", metric_identities},
      {"topk_self_gallery", topk_self},
  };
  int passed = 0;
  for (const auto& [name, fn] : checks) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      out << "error in " << name << ": " << e.what() << "\n";
    }
    out << (ok ? "PASS " : "FAIL ") << name << "\n";
    passed += ok;
  }
  out << "selftest: " << passed << "/" << checks.size() << " passed\n";
  return passed == static_cast<int>(checks.size());
}
