/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mxbf Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: simulate, beamform, metrics, bench, report.
//
// Exit codes: 0 success, 1 usage or unexpected failure, 2 config error, 3 data error,
// 4 numeric error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mxbf/experiment.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
};

mxbf::ExperimentConfig resolve(const Options& opt) {
  mxbf::KeyValueConfig kv;
  std::string name;
  bool preset = false;
  for (const auto& n : mxbf::preset_names()) preset = preset || n == opt.config;
  if (preset) {
    kv = mxbf::KeyValueConfig::parse(mxbf::preset_text(opt.config), "preset:" + opt.config);
    name = opt.config;
  } else {
    kv = mxbf::KeyValueConfig::load(opt.config);
  }
  for (const auto& o : opt.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw mxbf::ConfigError("--set expects key=value, got `" + o + "`");
    kv.set(mxbf::trim(o.substr(0, eq)), mxbf::trim(o.substr(eq + 1)));
  }
  if (opt.seed) kv.set("seed", std::to_string(*opt.seed));
  return mxbf::parse_experiment(kv, name);
}

std::string out_dir(const Options& opt, const mxbf::ExperimentConfig& cfg) {
  return opt.out.empty() ? "out/" + cfg.name : opt.out;
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("-c,--config", opt.config, "config file or preset name")->required();
  cmd->add_option("-o,--out", opt.out, "output directory (default out/<name>)");
  cmd->add_option("--seed", opt.seed, "override the config seed");
  cmd->add_option("--set", opt.overrides, "override a config entry, key=value");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-array beamforming experiments"};
  app.require_subcommand(1);
  Options opt;

  auto* sim = app.add_subcommand("simulate", "synthesize channel data");
  auto* bf = app.add_subcommand("beamform", "beamform simulated channel data");
  auto* met = app.add_subcommand("metrics", "measure beamformed volumes");
  auto* bench = app.add_subcommand("bench", "time the beamformers against element count");
  auto* report = app.add_subcommand("report", "simulate, beamform and measure over the coupling sweep");
  for (auto* c : {sim, bf, met, bench, report}) add_common(c, opt);

  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "print a built-in preset config");
  preset->add_option("name", preset_name, "psf, vla-wire or vla-cyst")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (preset->parsed()) {
      std::cout << mxbf::preset_text(preset_name);
      return 0;
    }
    const mxbf::ExperimentConfig cfg = resolve(opt);
    const std::string dir = out_dir(opt, cfg);
    if (sim->parsed()) {
      mxbf::cmd_simulate(cfg, dir);
      std::cout << "wrote channel data to " << dir << '\n';
    } else if (bf->parsed()) {
      mxbf::cmd_beamform(cfg, dir);
      std::cout << "wrote " << cfg.beamformers.size() << " volume(s) to " << dir << '\n';
    } else if (met->parsed()) {
      std::cout << mxbf::cmd_metrics(cfg, dir).table();
    } else if (bench->parsed()) {
      const auto r = mxbf::cmd_bench(cfg, dir);
      std::cout << r.csv() << '\n' << r.slopes_csv();
    } else if (report->parsed()) {
      std::cout << mxbf::cmd_report(cfg, dir).table();
    }
  } catch (const mxbf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const mxbf::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const mxbf::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
