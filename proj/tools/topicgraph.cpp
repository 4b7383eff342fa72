/*
 * Copyright 2026 The topicgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// Command-line driver: `detect` runs the pipeline, `evaluate` scores a
// finished run against ground truth.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <set>

#include "topicgraph/config.hpp"
#include "topicgraph/errors.hpp"
#include "topicgraph/pipeline.hpp"

namespace tg = topicgraph;

namespace {

constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

// One flag per setting, named after the key. Keys whose short name is
// shared between sections get the section as prefix (--embed-method).
std::map<std::string, std::string> flag_names() {
  std::map<std::string, int> uses;
  for (const auto& key : tg::setting_keys()) ++uses[key.substr(key.find('.') + 1)];
  std::map<std::string, std::string> names;
  for (const auto& key : tg::setting_keys()) {
    const auto dot = key.find('.');
    auto name = key.substr(dot + 1);
    if (uses[name] > 1) name = key.substr(0, dot) + "_" + name;
    names[key] = name;
  }
  return names;
}

std::string dashed(std::string s) {
  for (auto& c : s) {
    if (c == '_') c = '-';
  }
  return s;
}

void print_summary(const tg::RunManifest& m) {
  for (const auto& w : m.windows) {
    for (const auto& warning : w.warnings) std::cerr << "window " << w.window << ": warning: " << warning << '\n';
    if (w.error) std::cerr << "window " << w.window << ": error: " << *w.error << '\n';
  }
  std::size_t failed = 0;
  for (const auto& w : m.windows) failed += w.error ? 1 : 0;
  std::cerr << m.windows.size() << " window(s) processed, " << failed << " failed\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trending topic detection over timestamped short posts"};
  app.require_subcommand(1);

  auto* detect = app.add_subcommand("detect", "Run the pipeline over a posts file");
  detect->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
  std::string input, out, config_path, gt;
  std::vector<std::int64_t> windows;
  bool keep = false;
  detect->add_option("--input", input, "Posts file, one JSON record per line")->required();
  detect->add_option("--out", out, "Output directory")->required();
  detect->add_option("--config", config_path, "INI-style configuration file");
  detect->add_option("--gt", gt, "Ground-truth file; writes evaluation.json");
  detect->add_flag("--keep-intermediates,--keep_intermediates", keep, "Persist every per-window artifact");
  detect->add_option("--windows", windows, "Only these window indices")->delimiter(',');
  std::vector<std::string> sets;
  detect->add_option("--set", sets, "Override a setting: section.key=value");
  bool print_config = false;
  detect->add_flag("--print-config", print_config, "Print the effective configuration and exit");

  std::map<std::string, std::optional<std::string>> overrides;
  for (const auto& [key, name] : flag_names()) {
    auto& slot = overrides[key];
    std::string flags = "--" + name;
    if (dashed(name) != name) flags += ",--" + dashed(name);
    detect->add_option_function<std::string>(flags, [&slot](const std::string& v) { slot = v; }, "Sets " + key);
  }

  auto* evaluate = app.add_subcommand("evaluate", "Score a finished run against ground truth");
  std::string run_dir, eval_gt;
  double threshold = 0.5, w_omega = 1.0, w_c = 1.0;
  evaluate->add_option("--run", run_dir, "Output directory of a detect run")->required();
  evaluate->add_option("--gt", eval_gt, "Ground-truth file")->required();
  evaluate->add_option("--match-threshold,--match_threshold", threshold, "Minimum keyword overlap")->capture_default_str();
  evaluate->add_option("--w-omega,--w_omega", w_omega, "Weight of the cluster criterion")->capture_default_str();
  evaluate->add_option("--w-c,--w_c", w_c, "Weight of the class criterion")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*evaluate) {
      const auto summary = tg::evaluate_run(run_dir, eval_gt, threshold, w_omega, w_c);
      std::cout << tg::evaluation_json(summary);
      return 0;
    }

    tg::PipelineConfig cfg;
    if (!config_path.empty()) tg::load_config(cfg, std::filesystem::path(config_path));
    for (const auto& [key, value] : overrides) {
      if (value) tg::apply_setting(cfg, key, *value);
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw tg::ConfigError("--set expects section.key=value, got '" + s + "'");
      tg::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    cfg.input = input;
    cfg.out = out;
    if (!gt.empty()) cfg.ground_truth = gt;
    cfg.keep_intermediates = keep;
    cfg.windows = windows;
    cfg.validate();
    if (print_config) {
      std::cout << tg::dump_config(cfg);
      return 0;
    }

    const auto manifest = tg::run_pipeline(cfg);
    print_summary(manifest);
    return manifest.all_ok() ? 0 : kExitPartial;
  } catch (const tg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
