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

// Plumbing shared by the spcx subcommands: owned C handles, the one-line
// error format, and a flag registry that merges JSON configs with explicit
// flags and serializes the resolved values into a run manifest.
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spcx/spcx.h"

namespace cli {

using nlohmann::json;

struct ImageFree {
  void operator()(spcx_image* p) const { spcx_image_free(p); }
};
using Image = std::unique_ptr<spcx_image, ImageFree>;

// Failure reported as `error: code=<code> flag=<flag> message="<text>"`.
class Failure : public std::runtime_error {
 public:
  Failure(std::string code, std::string flag, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)), flag_(std::move(flag)) {}
  const std::string& code() const { return code_; }
  const std::string& flag() const { return flag_; }

 private:
  std::string code_;
  std::string flag_;
};

[[noreturn]] inline void invalid(const std::string& flag, const std::string& msg) {
  throw Failure("invalid_argument", flag, msg);
}

inline void check(spcx_status s, const std::string& flag) {
  if (s != SPCX_OK) throw Failure(spcx_status_name(s), flag, spcx_last_error());
}

inline Image load_image(const std::string& path, const std::string& flag) {
  spcx_image* raw = nullptr;
  check(spcx_image_load_png(path.c_str(), &raw), flag);
  return Image(raw);
}

inline void save_image(const spcx_image* img, const std::string& path,
                       const std::string& flag) {
  check(spcx_image_save_png(img, path.c_str()), flag);
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text(const std::string& path, const std::string& text,
                       const std::string& flag) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure("io", flag, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Failure("io", flag, "write to '" + path + "' failed");
}

// One subcommand's flags. Every flag is also a config key (the flag name
// without dashes); flags given on the command line win over the config.
class Command {
 public:
  Command(CLI::App& parent, const std::string& name, const std::string& about)
      : app_(parent.add_subcommand(name, about)), name_(name) {
    app_->add_option("--config", config_path_,
                     "JSON config or run manifest; explicit flags override it");
  }

  CLI::App* app() const { return app_; }
  const std::string& name() const { return name_; }

  template <typename T>
  CLI::Option* add(const std::string& key, T& var, const std::string& about) {
    CLI::Option* opt = app_->add_option("--" + key, var, about)->capture_default_str();
    params_.push_back({key, opt,
                       [&var, key](const json& j) {
                         try {
                           var = j.get<T>();
                         } catch (const json::exception&) {
                           invalid("--" + key, "config value has the wrong type");
                         }
                       },
                       [&var] { return json(var); }});
    return opt;
  }

  CLI::Option* add_flag(const std::string& key, bool& var, const std::string& about) {
    CLI::Option* opt = app_->add_flag("--" + key, var, about);
    params_.push_back({key, opt,
                       [&var, key](const json& j) {
                         if (!j.is_boolean()) invalid("--" + key, "config value must be true or false");
                         var = j.get<bool>();
                       },
                       [&var] { return json(var); }});
    return opt;
  }

  void add_manifest_flag() {
    app_->add_option("--manifest", manifest_path_,
                     "where to write the run manifest");
  }

  // Applies the --config file to every flag not given explicitly.
  void merge_config() {
    if (config_path_.empty()) return;
    std::ifstream in(config_path_);
    if (!in) throw Failure("io", "--config", "cannot open '" + config_path_ + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw Failure("invalid_argument", "--config", std::string("bad JSON: ") + e.what());
    }
    if (!doc.is_object()) invalid("--config", "config must be a JSON object");
    if (doc.contains("subcommand") && doc.contains("config")) {
      if (doc["subcommand"] != name_) {
        invalid("--config", "manifest is for '" + doc["subcommand"].get<std::string>() +
                                "', not '" + name_ + "'");
      }
      doc = doc["config"];
    }
    for (const auto& [key, value] : doc.items()) {
      Param* p = find(key);
      if (!p) invalid("--config", "unknown key '" + key + "'");
      if (p->opt->count() == 0) p->from_json(value);
    }
  }

  json resolved() const {
    json out = json::object();
    for (const auto& p : params_) out[p.key] = p.to_json();
    return out;
  }

  std::string manifest_path(const std::string& fallback) const {
    return manifest_path_.empty() ? fallback : manifest_path_;
  }

  void write_manifest(const std::string& path) const {
    if (path.empty()) return;
    json m;
    m["tool"] = "spcx";
    m["version"] = spcx_version();
    m["subcommand"] = name_;
    m["config"] = resolved();
    write_text(path, m.dump(2) + "\n", "--manifest");
  }

 private:
  struct Param {
    std::string key;
    CLI::Option* opt;
    std::function<void(const json&)> from_json;
    std::function<json()> to_json;
  };

  Param* find(const std::string& key) {
    for (auto& p : params_)
      if (p.key == key) return &p;
    return nullptr;
  }

  CLI::App* app_;
  std::string name_;
  std::string config_path_;
  std::string manifest_path_;
  std::vector<Param> params_;
};

inline void require_set(const std::string& value, const std::string& key) {
  if (value.empty()) invalid("--" + key, "is required");
}

inline void require_positive(double v, const std::string& key) {
  if (!(v > 0.0) || !std::isfinite(v)) invalid("--" + key, "must be positive");
}

inline void require_non_negative(double v, const std::string& key) {
  if (!(v >= 0.0) || !std::isfinite(v)) invalid("--" + key, "must be >= 0");
}

inline void require_one_of(const std::string& v, const std::string& key,
                           std::initializer_list<const char*> choices) {
  std::string list;
  for (const char* c : choices) {
    if (v == c) return;
    list += list.empty() ? c : std::string("|") + c;
  }
  invalid("--" + key, "'" + v + "' is not one of " + list);
}

}  // namespace cli
