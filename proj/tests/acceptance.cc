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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/contextual.h"
#include "core/degrade.h"
#include "core/hpc.h"
#include "core/metrics.h"
#include "core/objective.h"
#include "core/optimize.h"
#include "core/pk.h"
#include "core/rng.h"
#include "json.hpp"
#include "oracles.h"
#include "process.h"

namespace {

using spcx::Aggregation;
using spcx::ContextualConfig;
using spcx::Image;
using spcx::PkMode;
using spcx::SeededRng;

// Collects the first few failure descriptions of a criterion.
struct Verdict {
  long checks = 0;
  long failures = 0;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    ++failures;
    if (notes.size() < 3) notes.push_back(what);
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<std::size_t> shuffled(std::size_t n, SeededRng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(p[i], p[rng.next_u64() % (i + 1)]);
  return p;
}

ContextualConfig ctx(int rate, Aggregation form = Aggregation::kMaxLog,
                     PkMode mode = PkMode::kBlock) {
  ContextualConfig cfg;
  cfg.rate = rate;
  cfg.form = form;
  cfg.mode = mode;
  return cfg;
}

double max_rel_error(const Image& analytic, const std::vector<double>& fd) {
  double worst = 0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    const double a = analytic.data()[i];
    if (std::abs(a) <= 1e-8) continue;
    worst = std::max(worst, std::abs(a - fd[i]) / std::max(std::abs(a), std::abs(fd[i])));
  }
  return worst;
}

// ---- criteria ------------------------------------------------------------------

void pk_bijection(Verdict& v) {
  SeededRng rng(1001);
  for (int t = 0; t < 200; ++t) {
    const int h = 8 + static_cast<int>(rng.next_u64() % 57);
    const int w = 8 + static_cast<int>(rng.next_u64() % 57);
    const int c = t % 2 ? 3 : 1;
    Image img = spcx::random_uniform_image(h, w, c, rng);
    for (int r = 1; r <= std::min(h, w); ++r) {
      if (h % r || w % r) continue;
      for (PkMode mode : {PkMode::kBlock, PkMode::kPhase}) {
        v.expect(spcx::pk_recompose(spcx::pk_decompose(img, r, mode)) == img,
                 std::to_string(h) + "x" + std::to_string(w) + " r=" + std::to_string(r));
      }
    }
  }
}

void kernel_rows(Verdict& v) {
  SeededRng rng(1002);
  for (int t = 0; t < 100; ++t) {
    Image x = spcx::random_uniform_image(16, 16, t % 2 ? 3 : 1, rng, 0.05, 1.0);
    Image y = spcx::random_uniform_image(16, 16, t % 2 ? 3 : 1, rng, 0.05, 1.0);
    auto cfg = ctx(t % 3 ? 4 : 2, Aggregation::kMaxLog, t % 4 ? PkMode::kBlock : PkMode::kPhase);
    cfg.bandwidth = 0.05 + 0.5 * rng.next_double();
    auto a = spcx::spcx_kernel(x, y, cfg);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      double s = 0;
      for (double e : a.row(i)) s += e;
      v.expect(std::abs(s - 1.0) <= 1e-9, "row sum " + num(s));
    }
  }
}

void self_distance(Verdict& v) {
  SeededRng rng(1003);
  const double eps = 1e-5, constant = -std::log(1.0 + eps);
  for (int t = 0; t < 100; ++t) {
    Image x = spcx::random_uniform_image(16, 16, 3, rng, 0.05, 1.0);
    Image y = spcx::random_uniform_image(16, 16, 3, rng, 0.05, 1.0);
    const double self = spcx::spcx(x, x, ctx(4));
    v.expect(self <= 0.05, "self " + num(self));
    for (const Image* b : {&x, &y}) {
      const double s = spcx::spcx(x, *b, ctx(4, Aggregation::kSumLog));
      v.expect(std::abs(s - constant) <= eps, "sum-log " + num(s));
    }
  }
}

void permutation_invariance(Verdict& v) {
  SeededRng rng(1004);
  for (int t = 0; t < 50; ++t) {
    Image x = spcx::random_uniform_image(16, 16, 3, rng, 0.05, 1.0);
    Image y = spcx::random_uniform_image(16, 16, 3, rng, 0.05, 1.0);
    const auto perm = shuffled(16, rng);
    const double base = spcx::spcx(x, y, ctx(4));
    const double moved = spcx::spcx(x, spcx::block_permute(y, 4, perm), ctx(4));
    v.expect(std::abs(base - moved) <= 1e-12, "delta " + num(base - moved));
  }
}

void gradient_check(Verdict& v) {
  SeededRng rng(1005);
  for (int t = 0; t < 100; ++t) {
    Image x = spcx::random_uniform_image(6, 6, 1, rng, 0.05, 1.0);
    Image y = spcx::random_uniform_image(6, 6, 1, rng, 0.05, 1.0);
    for (Aggregation form : {Aggregation::kMaxLog, Aggregation::kSumLog}) {
      const Image g = spcx::spcx_grad(x, y, ctx(2, form));
      const auto fd = oracle::spcx_fd_extended(x, y, 2, form == Aggregation::kMaxLog);
      const double err = max_rel_error(g, fd);
      v.expect(err < 1e-4, "instance " + std::to_string(t) + " rel " + num(err));
    }
  }
}

void oracle_equivalence(Verdict& v) {
  SeededRng rng(1006);
  auto suite = spcx::make_objective_suite("identity", 7);
  for (int t = 0; t < 20; ++t) {
    Image x = spcx::random_uniform_image(8, 8, t % 2 ? 3 : 1, rng, 0.05, 1.0);
    Image y = spcx::random_uniform_image(8, 8, t % 2 ? 3 : 1, rng, 0.05, 1.0);
    for (bool max_log : {true, false}) {
      const auto form = max_log ? Aggregation::kMaxLog : Aggregation::kSumLog;
      const double block = oracle::contextual(oracle::pk_block(x, 2), oracle::pk_block(y, 2), 0.2, 1e-5, max_log);
      const double phase = oracle::contextual(oracle::pk_phase(x, 2), oracle::pk_phase(y, 2), 0.2, 1e-5, max_log);
      v.expect(std::abs(spcx::spcx(x, y, ctx(2, form)) - block) <= 1e-10, "block spcx");
      v.expect(std::abs(spcx::spcx(x, y, ctx(2, form, PkMode::kPhase)) - phase) <= 1e-10, "phase spcx");
    }
    std::vector<Image> preds;
    for (int i = 0; i < 4; ++i) {
      Image p = x;
      for (double& e : p.data()) e = std::clamp(e + rng.uniform(-0.2, 0.2), 0.05, 1.0);
      preds.push_back(p);
    }
    const spcx::LossWeights w;
    const auto b = spcx::l_rec(preds, x, ctx(2), w, suite.models());
    double total = 0;
    for (const Image& p : preds) {
      double l1 = 0;
      for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(x.data()[i] - p.data()[i]);
      l1 /= p.size();
      total += oracle::spcx_block(x, p, 2) -
               w.adv * std::log(1.0 + std::exp(suite.discriminator.logit(p))) +
               w.per * l1 + w.id * l1;
    }
    total /= preds.size();
    v.expect(std::abs(b.total - total) <= 1e-10, "l_rec delta " + num(b.total - total));
  }
}

void degradation(Verdict& v) {
  SeededRng rng(1007);
  for (int t = 0; t < 5; ++t) {
    Image img = spcx::random_texture(32, 32, 3, rng);
    v.expect(spcx::degrade(img, spcx::DegradationConfig{}) == img, "zero-parameter identity");
    auto cfg = spcx::DegradationConfig::defaults_for(32, 40 + t);
    v.expect(spcx::degrade(img, cfg) == spcx::degrade(img, cfg), "determinism");
    Image flat(32, 32, 3, 0.1 + 0.15 * t);
    for (double sigma : {0.5, 1.0, 3.0}) {
      Image out = spcx::gaussian_blur(flat, sigma);
      double worst = 0;
      for (double e : out.data()) worst = std::max(worst, std::abs(e - (0.1 + 0.15 * t)));
      v.expect(worst <= 1e-12, "DC drift " + num(worst));
    }
  }
  for (std::uint64_t seed : {1, 2, 3}) {
    SeededRng r(seed);
    Image img = spcx::random_texture(48, 48, 1, r);
    double prev = 2.0;
    for (double blur : {0.0, 1.0, 2.0, 3.0}) {
      spcx::DegradationConfig cfg;
      cfg.elastic_alpha = 1.0;
      cfg.elastic_sigma = 4.0;
      cfg.blur_sigma = blur;
      cfg.noise_std = 0.01;
      cfg.seed = seed;
      const double s = spcx::ssim(img, spcx::degrade(img, cfg));
      v.expect(s <= prev, "ssim rose at blur " + num(blur));
      prev = s;
    }
  }
}

spcx::ModulationParams random_mods(const spcx::GeneratorSpec& spec, SeededRng& rng) {
  spcx::ModulationParams mods;
  for (int k = 1; k <= spec.g; ++k) {
    std::vector<spcx::ModulationPair> level(std::size_t{1} << k);
    for (auto& p : level) {
      p.alpha = rng.uniform(0.5, 1.5, spec.channels);
      p.beta = rng.uniform(-0.3, 0.3, spec.channels);
    }
    mods.levels.push_back(level);
  }
  return mods;
}

void hpc_structure(Verdict& v) {
  SeededRng rng(1008);
  for (int g = 1; g <= 5; ++g) {
    spcx::GeneratorSpec spec;
    spec.g = g;
    spec.seed = 10 + g;
    auto set = spcx::generate_pseudo_results(spec, 3);
    v.expect(set.results.outputs.size() == (std::size_t{1} << g), "count at g=" + std::to_string(g));
    spcx::ToyGenerator gen(spec);
    auto flat = spcx::hpc_forward(gen, set.latent, spcx::identity_modulation(spec));
    v.expect(std::all_of(flat.variance.data().begin(), flat.variance.data().end(),
                         [](double e) { return e == 0.0; }),
             "identity modulation variance at g=" + std::to_string(g));
  }
  for (int g = 1; g <= 3; ++g) {
    spcx::GeneratorSpec spec;
    spec.g = g;
    spec.seed = 20 + g;
    spcx::ToyGenerator gen(spec);
    std::vector<double> z = rng.uniform(-1, 1, spec.latent_dim);
    auto mods = random_mods(spec, rng);
    auto base = spcx::hpc_forward(gen, z, mods);
    for (std::size_t leaf = 0; leaf < base.outputs.size(); ++leaf) {
      spcx::FeatureMap f = gen.input_map(z);
      for (int k = 1; k <= g; ++k)
        f = gen.modulate(gen.stage_conv(k - 1, f), mods.levels[k - 1][leaf >> (g - k)]);
      v.expect(gen.to_rgb(f) == base.outputs[leaf], "naive leaf " + std::to_string(leaf));
    }
    for (int k = 1; k <= g; ++k) {
      for (std::size_t p = 0; p < (std::size_t{1} << k); ++p) {
        auto bumped = mods;
        bumped.levels[k - 1][p].alpha[0] += 0.05;
        auto set = spcx::hpc_forward(gen, z, bumped);
        for (std::size_t leaf = 0; leaf < set.outputs.size(); ++leaf) {
          const bool under = (leaf >> (g - k)) == p;
          v.expect((set.outputs[leaf] == base.outputs[leaf]) != under,
                   "isolation g=" + std::to_string(g) + " level " + std::to_string(k));
        }
      }
    }
  }
}

void objective_algebra(Verdict& v, const std::string& exe) {
  SeededRng rng(1009);
  auto suite = spcx::make_objective_suite("random-projection", 3);
  const spcx::LossWeights defaults;
  v.expect(defaults.adv == 1.0 && defaults.per == 0.1 && defaults.id == 10.0, "default weights");
  for (int t = 0; t < 10; ++t) {
    Image target = spcx::random_texture(16, 16, 3, rng);
    std::vector<Image> preds;
    for (int i = 0; i < 8; ++i) {
      Image p = target;
      for (double& e : p.data()) e = std::clamp(e + rng.uniform(-0.1, 0.1), 0.0, 1.0);
      preds.push_back(p);
    }
    const auto base = spcx::l_rec(preds, target, ctx(4), defaults, suite.models());
    v.expect(std::abs(base.total - (base.spcx + base.adv + base.per + base.id)) <= 1e-12, "total");
    const double s = 0.5 + 3 * rng.next_double();
    for (int term = 0; term < 3; ++term) {
      spcx::LossWeights w = defaults;
      double* lam[] = {&w.adv, &w.per, &w.id};
      *lam[term] *= s;
      const auto b = spcx::l_rec(preds, target, ctx(4), w, suite.models());
      const double got[] = {b.adv, b.per, b.id};
      const double want[] = {base.adv, base.per, base.id};
      for (int other = 0; other < 3; ++other) {
        const double expected = other == term ? s * want[other] : want[other];
        v.expect(std::abs(got[other] - expected) <= 1e-12 * std::max(1.0, std::abs(expected)),
                 "linearity term " + std::to_string(term));
      }
      v.expect(b.spcx == base.spcx, "spcx term moved");
    }
  }
  auto dir = proc::scratch("acceptance-help");
  const auto help = proc::run(exe, "loss --help", dir).out;
  for (const char* s : {"published setting: 1)", "published setting: 0.1)", "published setting: 10)"})
    v.expect(help.find(s) != std::string::npos, std::string("help lacks ") + s);
}

void optimization_demo(Verdict& v) {
  std::vector<std::size_t> perm(16);
  std::iota(perm.begin(), perm.end(), 0);
  std::rotate(perm.begin(), perm.begin() + 5, perm.end());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SeededRng rng(2000 + seed);
    Image target = spcx::random_uniform_image(16, 16, 1, rng, 0.05, 1.0);
    Image init = spcx::random_uniform_image(16, 16, 1, rng, 0.05, 1.0);

    spcx::OptimizeConfig l2;
    l2.loss = spcx::PixelLoss::kL2;
    l2.steps = 500;
    l2.step_size = 64.0;
    auto r = spcx::optimize_image(init, target, l2);
    v.expect(oracle::mse(r.image, target) < 1e-4, "l2 mse " + num(oracle::mse(r.image, target)));

    spcx::OptimizeConfig sc;
    sc.steps = 200;
    sc.contextual.rate = 4;
    Image permuted = spcx::block_permute(target, 4, perm);
    v.expect(spcx::spcx(target, target, sc.contextual) == spcx::spcx(target, permuted, sc.contextual),
             "floor differs");
    auto s = spcx::optimize_image(init, permuted, sc);
    for (std::size_t i = 1; i < s.trace.size(); ++i)
      v.expect(s.trace[i].loss <= s.trace[i - 1].loss, "trace rose");
    v.expect(oracle::mse(s.image, target) > 0.05, "l2 gap " + num(oracle::mse(s.image, target)));
  }
}

void metric_checks(Verdict& v) {
  SeededRng rng(1011);
  Image x = spcx::random_texture(32, 32, 3, rng);
  v.expect(spcx::psnr(x, x) == 100.0, "psnr cap");
  v.expect(std::abs(spcx::ssim(x, x) - 1.0) <= 1e-9, "ssim self");
  const std::vector<double> a{1, 1}, b{1, 0};
  v.expect(std::abs(spcx::deg(a, b) - 70.71) <= 0.01, "deg 45");
  spcx::EmbeddingSet probes, gallery;
  for (int i = 0; i < 40; ++i) {
    probes.labels.push_back("id" + std::to_string(i % 12));
    probes.vectors.push_back(rng.uniform(-1, 1, 8));
    gallery.labels.push_back("id" + std::to_string(i % 12));
    gallery.vectors.push_back(rng.uniform(-1, 1, 8));
  }
  double prev = 0;
  for (int k = 1; k <= 40; ++k) {
    const double acc = spcx::topk_accuracy(probes, gallery, k);
    v.expect(acc >= prev, "top-k dropped at k=" + std::to_string(k));
    prev = acc;
  }
  v.expect(spcx::topk_accuracy(probes, probes, 1) == 100.0, "self gallery");
}

// Files under `dir` (recursively) other than manifests and capture files.
std::map<std::string, std::string> snapshot(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string name = std::filesystem::relative(e.path(), dir).string();
    if (name.find("manifest.json") != std::string::npos || name[0] == '.' ||
        name.rfind("inputs/", 0) == 0)
      continue;
    files[name] = proc::slurp(e.path());
  }
  return files;
}

void cli_replay(Verdict& v, const std::string& exe) {
  auto dir = proc::scratch("acceptance-cli");
  std::filesystem::create_directories(dir / "inputs");
  v.expect(proc::run(exe, "generate --g 2 --seed 5 --latent-seed 6 --out-dir inputs", dir).status == 0, "inputs");
  std::ofstream(dir / "inputs" / "p.csv") << "A,1,0,0.2\nB,0,1,0.1\nC,0.3,0.3,1\n";
  std::ofstream(dir / "inputs" / "g.csv") << "A,0.9,0.1,0.2\nB,0.2,1,0\nC,0,0.2,1\n";

  struct Case {
    std::string sub, args, manifest;
  };
  const std::vector<Case> cases{
      {"degrade", "--input ../inputs/mean.png --output d.png --seed 7", "d.png.manifest.json"},
      {"pk", "--input ../inputs/mean.png --rate 4 --mode phase --dump tiles", "tiles/manifest.json"},
      {"distance", "--input-a ../inputs/mean.png --input-b ../inputs/pseudo_1.png --rate 4 --kernel-csv k.csv",
       "k.csv.manifest.json"},
      {"loss", "--target ../inputs/mean.png --pred ../inputs/pseudo_1.png --pred ../inputs/pseudo_2.png --rate 4 --out l.json",
       "l.json.manifest.json"},
      {"optimize", "--target ../inputs/mean.png --rate 4 --steps 25 --seed 3 --out o.png", "o.png.manifest.json"},
      {"generate", "--g 3 --seed 1 --latent-seed 2 --out-dir gen", "gen/manifest.json"},
      {"metrics", "--ref ../inputs/mean.png --test ../inputs/pseudo_3.png --out m.csv", "m.csv.manifest.json"},
      {"verify", "--probes ../inputs/p.csv --gallery ../inputs/g.csv --out v.json", "v.json.manifest.json"},
      {"selftest", "--manifest s.manifest.json", "s.manifest.json"},
  };
  std::set<std::string> seen;
  for (const auto& c : cases) {
    seen.insert(c.sub);
    const auto cwd = dir / c.sub;
    std::filesystem::create_directories(cwd);
    auto run = [&](const std::string& args) { return proc::run(exe, args, cwd); };
    const auto first = run(c.sub + " " + c.args);
    v.expect(first.status == 0, c.sub + " failed: " + first.err);
    const auto before = snapshot(cwd);
    const std::string manifest = proc::slurp(cwd / c.manifest);
    v.expect(!manifest.empty(), c.sub + " wrote no manifest");
    for (const auto& [name, bytes] : before) std::filesystem::remove(cwd / name);
    const auto again = run(c.sub + " --config " + c.manifest);
    v.expect(again.status == 0, c.sub + " replay failed: " + again.err);
    v.expect(again.out == first.out, c.sub + " stdout differs");
    v.expect(snapshot(cwd) == before, c.sub + " files differ");
    v.expect(proc::slurp(cwd / c.manifest) == manifest, c.sub + " manifest differs");
  }
  v.expect(seen.size() == 9, "subcommand coverage");
}

}  // namespace

int main() {
  const std::string exe = SPCX_CLI_PATH;
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Verdict&)> fn;
  };
  const std::vector<Criterion> criteria{
      {1, "PK bijection", 10, pk_bijection},
      {2, "kernel row-stochasticity", 0, kernel_rows},
      {3, "self-distance and constant sum-log form", 0, self_distance},
      {4, "exact permutation invariance", 0, permutation_invariance},
      {5, "gradient correctness", 60, gradient_check},
      {6, "oracle equivalence", 0, oracle_equivalence},
      {7, "degradation", 0, degradation},
      {8, "HPC structure", 0, hpc_structure},
      {9, "objective algebra", 0, [&](Verdict& v) { objective_algebra(v, exe); }},
      {10, "optimization demo", 120, optimization_demo},
      {11, "metrics", 0, metric_checks},
      {12, "end-to-end reproducibility", 0, [&](Verdict& v) { cli_replay(v, exe); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.fn(v);
    } catch (const std::exception& e) {
      v.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0) v.expect(secs < c.budget_s, "over time budget");
    const bool ok = v.failures == 0 && v.checks > 0;
    failed += !ok;
    std::ostringstream line;
    line << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " ("
         << v.checks - v.failures << "/" << v.checks << " checks, " << num(secs) << " s)";
    for (const auto& n : v.notes) line << " [" << n << "]";
    std::puts(line.str().c_str());
  }
  std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
