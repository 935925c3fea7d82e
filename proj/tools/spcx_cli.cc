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

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <regex>
#include <sstream>
#include <type_traits>

#include "cli_common.h"
#include "selftest.h"

namespace {

using cli::Command;
using cli::Failure;
using cli::Image;
using cli::fmt;
using cli::invalid;
using cli::json;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

// ---- shared contextual flags ----------------------------------------------

struct ContextualFlags {
  int rate = 32;
  std::string mode = "block";
  std::string form = "max";
  double bandwidth = 0.2;
  double epsilon = 1e-5;
  bool mean_shift = false;

  void add_to(Command& cmd) {
    cmd.add("rate", rate, "PK sampling rate r (published setting: 32 for 512 px)");
    cmd.add("mode", mode, "sub-image layout: block|phase");
    cmd.add("form", form, "aggregation: max (mean of column maxima) | sum");
    cmd.add("bandwidth", bandwidth, "kernel bandwidth h (published setting: 0.2)");
    cmd.add("epsilon", epsilon, "log and normalisation guard (published setting: 1e-5)");
    cmd.add_flag("mean-shift", mean_shift, "subtract each set's mean vector first");
  }

  spcx_contextual_config resolve() const {
    if (rate < 1) invalid("--rate", "must be >= 1");
    cli::require_one_of(mode, "mode", {"block", "phase"});
    cli::require_one_of(form, "form", {"max", "sum"});
    cli::require_positive(bandwidth, "bandwidth");
    cli::require_positive(epsilon, "epsilon");
    spcx_contextual_config cfg;
    spcx_contextual_config_default(&cfg);
    cfg.rate = rate;
    cfg.mode = mode == "block" ? SPCX_PK_BLOCK : SPCX_PK_PHASE;
    cfg.form = form == "max" ? SPCX_AGG_MAX_LOG : SPCX_AGG_SUM_LOG;
    cfg.bandwidth = bandwidth;
    cfg.epsilon = epsilon;
    cfg.mean_shift = mean_shift ? 1 : 0;
    return cfg;
  }
};

// Library errors about the sub-image grid are attributed to --rate.
void check_contextual(spcx_status s) {
  if (s == SPCX_OK) return;
  const std::string msg = spcx_last_error();
  const bool rate = msg.find("rate") != std::string::npos;
  throw Failure(spcx_status_name(s), rate ? "--rate" : "-", msg);
}

// ---- degrade ----------------------------------------------------------------

struct Degrade {
  std::string input, output, order = "blur-warp";
  double alpha = kUnset, sigma = kUnset, blur_sigma = kUnset, noise_std = kUnset;
  std::uint64_t seed = 0;

  void add_to(Command& cmd) {
    cmd.add("input", input, "source PNG");
    cmd.add("output", output, "degraded PNG");
    cmd.add("alpha", alpha, "elastic displacement magnitude in px (default: 34 at 512 px, scaled)");
    cmd.add("sigma", sigma, "elastic field smoothing in px (default: 4 at 512 px, scaled)");
    cmd.add("blur-sigma", blur_sigma, "PSF std in px (default: 3 at 512 px, scaled)");
    cmd.add("noise-std", noise_std, "additive noise std (default: 0.01)");
    cmd.add("seed", seed, "random seed");
    cmd.add("order", order, "blur-warp|warp-blur");
  }

  void run(Command& cmd) {
    cli::require_set(input, "input");
    cli::require_set(output, "output");
    cli::require_one_of(order, "order", {"blur-warp", "warp-blur"});
    Image img = cli::load_image(input, "--input");
    spcx_degrade_config cfg;
    spcx_degrade_config_default(
        std::max(spcx_image_height(img.get()), spcx_image_width(img.get())), &cfg);
    auto pick = [](double& flag, double fallback, const char* key) {
      if (std::isnan(flag)) flag = fallback;
      cli::require_non_negative(flag, key);
      return flag;
    };
    cfg.elastic_alpha = pick(alpha, cfg.elastic_alpha, "alpha");
    cfg.elastic_sigma = pick(sigma, cfg.elastic_sigma, "sigma");
    cfg.blur_sigma = pick(blur_sigma, cfg.blur_sigma, "blur-sigma");
    cfg.noise_std = pick(noise_std, cfg.noise_std, "noise-std");
    if (alpha > 0 && sigma == 0) invalid("--sigma", "must be > 0 when --alpha > 0");
    cfg.seed = seed;
    cfg.order = order == "blur-warp" ? SPCX_ORDER_BLUR_WARP : SPCX_ORDER_WARP_BLUR;
    spcx_image* raw = nullptr;
    cli::check(spcx_degrade(img.get(), &cfg, &raw), "-");
    Image out(raw);
    cli::save_image(out.get(), output, "--output");
    cmd.write_manifest(cmd.manifest_path(output + ".manifest.json"));
  }
};

// ---- pk -----------------------------------------------------------------------

struct Pk {
  std::string input, mode = "block", dump;
  int rate = 32;

  void add_to(Command& cmd) {
    cmd.add("input", input, "source PNG");
    cmd.add("rate", rate, "PK sampling rate r (published setting: 32 for 512 px)");
    cmd.add("mode", mode, "block|phase");
    cmd.add("dump", dump, "directory receiving sub_NNNN.png for every sub-image");
  }

  void run(Command& cmd) {
    cli::require_set(input, "input");
    cli::require_one_of(mode, "mode", {"block", "phase"});
    if (rate < 1) invalid("--rate", "must be >= 1");
    Image img = cli::load_image(input, "--input");
    spcx_subimages* coll = nullptr;
    const spcx_pk_mode m = mode == "block" ? SPCX_PK_BLOCK : SPCX_PK_PHASE;
    cli::check(spcx_pk_decompose(img.get(), rate, m, &coll), "--rate");
    std::unique_ptr<spcx_subimages, decltype(&spcx_subimages_free)> owned(coll, spcx_subimages_free);
    spcx_image* back = nullptr;
    cli::check(spcx_pk_recompose(coll, &back), "-");
    Image restored(back);
    const bool exact = std::equal(spcx_image_data(img.get()),
                                  spcx_image_data(img.get()) + spcx_image_size(img.get()),
                                  spcx_image_data(restored.get()));
    const std::size_t n = spcx_subimages_count(coll);
    if (!dump.empty()) {
      std::filesystem::create_directories(dump);
      for (std::size_t i = 0; i < n; ++i) {
        spcx_image* raw = nullptr;
        cli::check(spcx_subimages_get_image(coll, i, &raw), "-");
        Image tile(raw);
        char name[32];
        std::snprintf(name, sizeof name, "sub_%04zu.png", i);
        cli::save_image(tile.get(), (std::filesystem::path(dump) / name).string(), "--dump");
      }
    }
    json summary{{"count", n},
                 {"dim", spcx_subimages_dim(coll)},
                 {"mode", mode},
                 {"rate", rate},
                 {"roundtrip_exact", exact}};
    std::cout << summary.dump() << "\n";
    cmd.write_manifest(cmd.manifest_path(
        dump.empty() ? "" : (std::filesystem::path(dump) / "manifest.json").string()));
  }
};

// ---- distance -------------------------------------------------------------

struct Distance {
  std::string input_a, input_b, kernel_csv;
  ContextualFlags ctx;

  void add_to(Command& cmd) {
    cmd.add("input-a", input_a, "first PNG (X)");
    cmd.add("input-b", input_b, "second PNG (Y)");
    ctx.add_to(cmd);
    cmd.add("kernel-csv", kernel_csv, "also write the kernel matrix A as CSV");
    cmd.add_manifest_flag();
  }

  void run(Command& cmd) {
    cli::require_set(input_a, "input-a");
    cli::require_set(input_b, "input-b");
    const auto cfg = ctx.resolve();
    Image a = cli::load_image(input_a, "--input-a");
    Image b = cli::load_image(input_b, "--input-b");
    double value = 0;
    check_contextual(spcx_distance(a.get(), b.get(), &cfg, &value));
    if (!kernel_csv.empty()) {
      spcx_matrix* m = nullptr;
      check_contextual(spcx_kernel_matrix(a.get(), b.get(), &cfg, &m));
      std::unique_ptr<spcx_matrix, decltype(&spcx_matrix_free)> owned(m, spcx_matrix_free);
      std::string text;
      const std::size_t rows = spcx_matrix_rows(m), cols = spcx_matrix_cols(m);
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
          text += fmt(spcx_matrix_data(m)[i * cols + j]);
          text += j + 1 == cols ? "\n" : ",";
        }
      }
      cli::write_text(kernel_csv, text, "--kernel-csv");
    }
    std::cout << fmt(value) << "\n";
    cmd.write_manifest(cmd.manifest_path(
        kernel_csv.empty() ? "" : kernel_csv + ".manifest.json"));
  }
};

// ---- loss -------------------------------------------------------------------

struct Loss {
  std::string target, extractor = "random-projection", out;
  std::vector<std::string> preds;
  ContextualFlags ctx;
  double lambda_adv = 1.0, lambda_per = 0.1, lambda_id = 10.0;
  std::uint64_t model_seed = 0;

  void add_to(Command& cmd) {
    cmd.add("target", target, "ground-truth PNG");
    cmd.add("pred", preds, "pseudo-result PNG (repeat for each output)");
    ctx.add_to(cmd);
    cmd.add("lambda-adv", lambda_adv, "adversarial weight (published setting: 1)");
    cmd.add("lambda-per", lambda_per, "perceptual weight (published setting: 0.1)");
    cmd.add("lambda-id", lambda_id, "identity weight (published setting: 10)");
    cmd.add("extractor", extractor, "feature stand-in: identity|random-projection");
    cmd.add("model-seed", model_seed, "seed for extractors and the frozen discriminator");
    cmd.add("out", out, "also write the breakdown JSON here");
    cmd.add_manifest_flag();
  }

  void run(Command& cmd) {
    cli::require_set(target, "target");
    if (preds.empty()) invalid("--pred", "at least one prediction is required");
    cli::require_non_negative(lambda_adv, "lambda-adv");
    cli::require_non_negative(lambda_per, "lambda-per");
    cli::require_non_negative(lambda_id, "lambda-id");
    cli::require_one_of(extractor, "extractor", {"identity", "random-projection"});
    const auto cfg = ctx.resolve();
    Image t = cli::load_image(target, "--target");
    std::vector<Image> owned;
    std::vector<const spcx_image*> raw;
    for (const auto& p : preds) {
      owned.push_back(cli::load_image(p, "--pred"));
      raw.push_back(owned.back().get());
    }
    spcx_loss_weights w{lambda_adv, lambda_per, lambda_id};
    spcx_loss_breakdown b;
    check_contextual(spcx_reconstruction_loss(
        raw.data(), raw.size(), t.get(), &cfg, &w,
        extractor == "identity" ? SPCX_EXTRACTOR_IDENTITY : SPCX_EXTRACTOR_RANDOM_PROJECTION,
        model_seed, &b));
    json j{{"spcx", b.spcx}, {"adv", b.adv}, {"per", b.per}, {"id", b.id}, {"total", b.total}};
    const std::string text = j.dump() + "\n";
    std::cout << text;
    if (!out.empty()) cli::write_text(out, text, "--out");
    cmd.write_manifest(cmd.manifest_path(out.empty() ? "" : out + ".manifest.json"));
  }
};

// ---- optimize ---------------------------------------------------------------

struct Optimize {
  std::string loss = "spcx", init = "random", input, target, out, trace;
  int steps = 200, log_every = 1;
  double lr = 1.0;
  std::uint64_t seed = 0;
  ContextualFlags ctx;

  void add_to(Command& cmd) {
    cmd.add("loss", loss, "spcx|l2");
    cmd.add("steps", steps, "gradient steps");
    cmd.add("lr", lr, "initial step size (halved on any loss increase)");
    ctx.add_to(cmd);
    cmd.add("seed", seed, "seed for the random initial image");
    cmd.add("init", init, "random|input");
    cmd.add("input", input, "initial PNG when --init input");
    cmd.add("target", target, "target PNG");
    cmd.add("out", out, "final image PNG");
    cmd.add("trace", trace, "loss trace CSV (default: <out>.trace.csv)");
    cmd.add("log-every", log_every, "record the loss every N steps");
  }

  void run(Command& cmd) {
    cli::require_one_of(loss, "loss", {"spcx", "l2"});
    cli::require_one_of(init, "init", {"random", "input"});
    cli::require_set(target, "target");
    cli::require_set(out, "out");
    if (steps < 1) invalid("--steps", "must be >= 1");
    if (log_every < 1) invalid("--log-every", "must be >= 1");
    cli::require_positive(lr, "lr");
    if (init == "input") cli::require_set(input, "input");
    if (trace.empty()) trace = out + ".trace.csv";

    spcx_optimize_config cfg;
    spcx_optimize_config_default(&cfg);
    cfg.loss = loss == "spcx" ? SPCX_LOSS_SPCX : SPCX_LOSS_L2;
    cfg.steps = steps;
    cfg.step_size = lr;
    cfg.log_every = log_every;
    cfg.contextual = ctx.resolve();

    Image t = cli::load_image(target, "--target");
    Image start;
    if (init == "input") {
      start = cli::load_image(input, "--input");
    } else {
      spcx_image* raw = nullptr;
      cli::check(spcx_image_random_uniform(spcx_image_height(t.get()), spcx_image_width(t.get()),
                                           spcx_image_channels(t.get()), seed, 0.05, 1.0, &raw),
                 "--seed");
      start.reset(raw);
    }
    spcx_image* result = nullptr;
    spcx_trace* tr = nullptr;
    check_contextual(spcx_optimize(start.get(), t.get(), &cfg, &result, &tr));
    Image final_image(result);
    std::unique_ptr<spcx_trace, decltype(&spcx_trace_free)> owned(tr, spcx_trace_free);
    std::string text = "step,loss,step_size\n";
    for (std::size_t i = 0; i < spcx_trace_length(tr); ++i) {
      text += std::to_string(spcx_trace_step(tr, i)) + "," + fmt(spcx_trace_loss(tr, i)) +
              "," + fmt(spcx_trace_step_size(tr, i)) + "\n";
    }
    cli::save_image(final_image.get(), out, "--out");
    cli::write_text(trace, text, "--trace");
    const std::size_t last = spcx_trace_length(tr) - 1;
    std::cout << json{{"steps", spcx_trace_step(tr, last)},
                      {"initial_loss", spcx_trace_loss(tr, 0)},
                      {"final_loss", spcx_trace_loss(tr, last)}}
                     .dump()
              << "\n";
    cmd.write_manifest(cmd.manifest_path(out + ".manifest.json"));
  }
};

// ---- generate ---------------------------------------------------------------

struct Generate {
  int g = 3;
  std::uint64_t seed = 0, latent_seed = 0;
  std::string out_dir;

  void add_to(Command& cmd) {
    cmd.add("g", g, "group depth; 2^g pseudo results (published setting: 3)");
    cmd.add("seed", seed, "generator and modulation-head weight seed");
    cmd.add("latent-seed", latent_seed, "seed for the latent code and modulation feature");
    cmd.add("out-dir", out_dir, "directory for pseudo_N.png, mean.png, uncertainty.*");
  }

  void run(Command& cmd) {
    cli::require_set(out_dir, "out-dir");
    if (g < 1 || g > 6) invalid("--g", "must be in [1, 6]");
    spcx_pseudo_set* raw = nullptr;
    cli::check(spcx_generate(g, seed, latent_seed, &raw), "--g");
    std::unique_ptr<spcx_pseudo_set, decltype(&spcx_pseudo_set_free)> set(raw, spcx_pseudo_set_free);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    const std::size_t n = spcx_pseudo_set_count(raw);
    for (std::size_t i = 0; i < n; ++i) {
      cli::save_image(spcx_pseudo_set_output(raw, i),
                      (dir / ("pseudo_" + std::to_string(i + 1) + ".png")).string(), "--out-dir");
    }
    cli::save_image(spcx_pseudo_set_mean(raw), (dir / "mean.png").string(), "--out-dir");

    const spcx_image* var = spcx_pseudo_set_variance(raw);
    const int h = spcx_image_height(var), w = spcx_image_width(var), c = spcx_image_channels(var);
    const double* v = spcx_image_data(var);
    const std::size_t size = spcx_image_size(var);
    const auto [lo, hi] = std::minmax_element(v, v + size);
    std::vector<double> shown(size, 0.0);
    if (*hi > *lo) {
      for (std::size_t i = 0; i < size; ++i) shown[i] = (v[i] - *lo) / (*hi - *lo);
    }
    spcx_image* vis = nullptr;
    cli::check(spcx_image_create(h, w, c, shown.data(), &vis), "-");
    Image owned_vis(vis);
    cli::save_image(vis, (dir / "uncertainty.png").string(), "--out-dir");
    std::string text = "y,x,channel,variance\n";
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        for (int ch = 0; ch < c; ++ch) {
          text += std::to_string(y) + "," + std::to_string(x) + "," + std::to_string(ch) + "," +
                  fmt(v[(static_cast<std::size_t>(y) * w + x) * c + ch]) + "\n";
        }
    cli::write_text((dir / "uncertainty.csv").string(), text, "--out-dir");
    std::cout << json{{"outputs", n}, {"size", h}, {"max_variance", *hi}}.dump() << "\n";
    cmd.write_manifest(cmd.manifest_path((dir / "manifest.json").string()));
  }
};

// ---- metrics ----------------------------------------------------------------

struct Metrics {
  std::string ref, test, out;

  void add_to(Command& cmd) {
    cmd.add("ref", ref, "reference PNG");
    cmd.add("test", test, "PNG under evaluation");
    cmd.add("out", out, "also write the CSV row here");
    cmd.add_manifest_flag();
  }

  void run(Command& cmd) {
    cli::require_set(ref, "ref");
    cli::require_set(test, "test");
    Image a = cli::load_image(ref, "--ref");
    Image b = cli::load_image(test, "--test");
    double p = 0, s = 0;
    cli::check(spcx_psnr(a.get(), b.get(), &p), "--test");
    cli::check(spcx_ssim(a.get(), b.get(), &s), "--test");
    const std::string text = "psnr,ssim\n" + fmt(p) + "," + fmt(s) + "\n";
    std::cout << text;
    if (!out.empty()) cli::write_text(out, text, "--out");
    cmd.write_manifest(cmd.manifest_path(out.empty() ? "" : out + ".manifest.json"));
  }
};

// ---- verify -----------------------------------------------------------------

struct EmbeddingsFree {
  void operator()(spcx_embeddings* p) const { spcx_embeddings_free(p); }
};
using Embeddings = std::unique_ptr<spcx_embeddings, EmbeddingsFree>;

// Rows of `label,v1,...,vD`. A first row whose second cell is not a number
// is taken as a header.
Embeddings read_embeddings(const std::string& path, const std::string& flag) {
  std::ifstream in(path);
  if (!in) throw Failure("io", flag, "cannot open '" + path + "'");
  Embeddings set;
  std::size_t dim = 0;
  std::string line;
  for (int row = 1; std::getline(in, line); ++row) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    auto where = [&] { return path + " row " + std::to_string(row); };
    if (cells.size() < 2) invalid(flag, where() + ": need a label and at least one value");
    std::vector<double> v;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      char* end = nullptr;
      const double x = std::strtod(cells[i].c_str(), &end);
      if (end == cells[i].c_str() || *end != '\0') {
        if (row == 1 && !set) break;
        invalid(flag, where() + ": '" + cells[i] + "' is not a number");
      }
      v.push_back(x);
    }
    if (v.size() != cells.size() - 1) continue;  // header
    if (!set) {
      dim = v.size();
      spcx_embeddings* raw = nullptr;
      cli::check(spcx_embeddings_create(dim, &raw), flag);
      set.reset(raw);
    }
    if (v.size() != dim) invalid(flag, where() + ": expected " + std::to_string(dim) + " values");
    cli::check(spcx_embeddings_add(set.get(), cells[0].c_str(), v.data()), flag);
  }
  if (!set) invalid(flag, "'" + path + "' has no embeddings");
  return set;
}

struct Verify {
  std::string probes, gallery, out;
  bool allow_missing = false;

  void add_to(Command& cmd) {
    cmd.add("probes", probes, "probe embeddings CSV (label,v1..vD)");
    cmd.add("gallery", gallery, "gallery embeddings CSV (label,v1..vD)");
    cmd.add_flag("allow-missing", allow_missing,
                 "count probes whose label is absent from the gallery as misses");
    cmd.add("out", out, "also write the result JSON here");
    cmd.add_manifest_flag();
  }

  void run(Command& cmd) {
    cli::require_set(probes, "probes");
    cli::require_set(gallery, "gallery");
    Embeddings p = read_embeddings(probes, "--probes");
    Embeddings g = read_embeddings(gallery, "--gallery");
    const int strict = allow_missing ? 0 : 1;
    json j;
    for (int k : {1, 3, 5}) {
      double acc = 0;
      cli::check(spcx_topk_accuracy(p.get(), g.get(), k, strict, &acc), "--probes");
      j["top" + std::to_string(k)] = acc;
    }
    double d = 0;
    cli::check(spcx_mean_deg(p.get(), g.get(), &d), "--probes");
    j["mean_deg"] = d;
    const std::string text = j.dump() + "\n";
    std::cout << text;
    if (!out.empty()) cli::write_text(out, text, "--out");
    cmd.write_manifest(cmd.manifest_path(out.empty() ? "" : out + ".manifest.json"));
  }
};

// ---- selftest ---------------------------------------------------------------

struct Selftest {
  void add_to(Command& cmd) { cmd.add_manifest_flag(); }

  int run(Command& cmd) {
    const bool ok = spcx_selftest(std::cout);
    cmd.write_manifest(cmd.manifest_path(""));
    return ok ? 0 : 1;
  }
};

std::string quote(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

int report(const std::string& code, const std::string& flag, const std::string& msg) {
  std::cerr << "error: code=" << code << " flag=" << (flag.empty() ? "-" : flag)
            << " message=\"" << quote(msg) << "\"\n";
  return code == "invalid_argument" ? 2 : 1;
}

std::string flag_of(const std::string& msg) {
  std::smatch m;
  static const std::regex re("(--[a-z][a-z0-9-]*)");
  return std::regex_search(msg, m, re) ? m[1].str() : "-";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial periodic contextual distance toolkit"};
  app.set_version_flag("--version", std::string(spcx_version()));
  app.require_subcommand(1);

  Degrade degrade;
  Pk pk;
  Distance distance;
  Loss loss;
  Optimize optimize;
  Generate generate;
  Metrics metrics;
  Verify verify;
  Selftest selftest;

  std::map<std::string, std::unique_ptr<Command>> cmds;
  std::map<std::string, std::function<int(Command&)>> runners;
  auto add = [&](const char* name, const char* about, auto& sub) {
    cmds[name] = std::make_unique<Command>(app, name, about);
    sub.add_to(*cmds[name]);
    runners[name] = [&sub](Command& c) {
      if constexpr (std::is_same_v<decltype(sub.run(c)), void>) {
        sub.run(c);
        return 0;
      } else {
        return sub.run(c);
      }
    };
  };
  add("degrade", "elastic warp, blur and noise (turbulence simulator)", degrade);
  add("pk", "decompose an image into PK sub-images", pk);
  add("distance", "spatial periodic contextual distance between two images", distance);
  add("loss", "reconstruction loss breakdown over a set of pseudo results", loss);
  add("optimize", "pixel-space gradient descent under SPCX or L2", optimize);
  add("generate", "hierarchical pseudo results with mean and uncertainty", generate);
  add("metrics", "PSNR and SSIM between two images", metrics);
  add("verify", "Top-k accuracy and mean Deg from embedding CSVs", verify);
  add("selftest", "run the built-in property checks", selftest);

  if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
    return report("invalid_argument", "-", std::string("unknown subcommand '") + argv[1] + "'");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("invalid_argument", flag_of(e.what()), e.what());
  }

  try {
    for (auto& [name, cmd] : cmds) {
      if (!cmd->app()->parsed()) continue;
      cmd->merge_config();
      return runners[name](*cmd);
    }
  } catch (const Failure& f) {
    return report(f.code(), f.flag(), f.what());
  } catch (const std::exception& e) {
    return report("internal", "-", e.what());
  }
  return 0;
}
