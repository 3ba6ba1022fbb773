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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mxbf/experiment.hpp"
#include "mxbf/io.hpp"

using namespace mxbf;
namespace fs = std::filesystem;

namespace {

const char* kTiny = R"(name = tiny
rows = 8
cols = 8
pitch_x_m = 0.3e-3
pitch_y_m = 0.3e-3
elem_w_m = 0.275e-3
elem_h_m = 0.275e-3
panels = 2
coupling_factor = 1
vla = false
sound_speed_m_s = 1540
f0_hz = 5e6
fs_hz = 20e6
pulse_cycles = 3
phantom = cyst
phantom.extent_m = -1e-3, 1e-3, -0.5e-3, 0.5e-3, 3e-3, 5e-3
phantom.density_per_mm3 = 20
phantom.cyst.a = 0, 0, 4e-3
phantom.cyst_radius_m = 0.4e-3
grid.x_m = -1e-3, 1e-3
grid.y_m = -0.4e-3, 0.4e-3
grid.z_m = 3.4e-3, 4.6e-3
grid.spacing_m = 0.2e-3
beamformer = das, nsi
roi.in = interior, -0.2e-3, 0.2e-3, -0.2e-3, 0.2e-3, 3.8e-3, 4.2e-3
roi.bg = background, 0.6e-3, 1e-3, -0.2e-3, 0.2e-3, 3.6e-3, 4.4e-3
seed = 3
)";

ExperimentConfig tiny(const std::string& extra = "") {
  return parse_experiment(KeyValueConfig::parse(std::string(kTiny) + extra, "tiny.cfg"));
}

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / "mxbf_test_pipeline" / name;
  fs::remove_all(d);
  return d;
}

std::string hash(const fs::path& p) { return sha256_file(p.string()); }

double metric(const MetricsReport& r, const std::string& bf, const std::string& name) {
  for (const auto& row : r.rows)
    if (row.beamformer == bf && row.metric == name) return row.value;
  FAIL("metric not found: " << bf << " " << name);
  return 0.0;
}

}  // namespace

TEST_CASE("built-in presets parse") {
  const auto names = preset_names();
  CHECK(names.size() == 3);
  for (const auto& n : names) {
    const auto e = load_experiment(n);
    CHECK(e.name == n);
    CHECK(e.beamformers.size() == 4);
    CHECK_NOTHROW(build_setup(e));
  }
  CHECK(load_experiment("vla-wire").coupling_sweep == std::vector<std::size_t>{1, 2, 4});
  CHECK_THROWS_AS(preset_text("nope"), ConfigError);
}

TEST_CASE("configuration errors name the key") {
  try {
    tiny("bogus_key = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
  }
  CHECK_THROWS_AS(tiny("beamformer2 = das\n"), ConfigError);
  auto edited = [](const std::string& from, const std::string& to) {
    std::string t = kTiny;
    t.replace(t.find(from), from.size(), to);
    return parse_experiment(KeyValueConfig::parse(t, "b.cfg"));
  };
  CHECK_THROWS_AS(edited("fs_hz = 20e6", "fs_hz = 15e6"), ConfigError);
  CHECK_THROWS_AS(edited("background, 0.6e-3", "background, -0.1e-3"), ConfigError);
  CHECK_THROWS_AS(load_experiment("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("stages are deterministic under a fixed seed") {
  const auto e = tiny();
  const auto a = fresh_dir("a"), b = fresh_dir("b");
  cmd_simulate(e, a.string());
  cmd_beamform(e, a.string());
  cmd_metrics(e, a.string());
  cmd_simulate(e, b.string());
  cmd_beamform(e, b.string());
  cmd_metrics(e, b.string());
  for (const auto* f : {"channels.mbcd", "delays.csv", "volume_das.mbvl", "volume_nsi.mbvl", "metrics.csv"})
    CHECK(hash(a / f) == hash(b / f));
  CHECK(fs::exists(a / "manifest.json"));
  CHECK(fs::exists(a / "metrics.txt"));
  CHECK(fs::exists(a / "beamform_stats.csv"));

  auto other = e;
  other.seed = 4;
  other.phantom.cyst.seed = 4;
  other.source.set("seed", "4");
  const auto c = fresh_dir("c");
  cmd_simulate(other, c.string());
  CHECK(hash(a / "channels.mbcd") != hash(c / "channels.mbcd"));
}

TEST_CASE("serial and parallel pipelines agree") {
  auto e = tiny();
  const auto setup = build_setup(e);
  e.exec = Exec::serial;
  const auto s = beamform_experiment(e, setup, simulate(e, setup));
  e.exec = Exec::parallel;
  const auto p = beamform_experiment(e, setup, simulate(e, setup));
  for (std::size_t i = 0; i < s.volumes.size(); ++i) CHECK(s.volumes[i].values == p.volumes[i].values);
}

TEST_CASE("virtual aperture runs write four channel files") {
  auto e = tiny("");
  e.virtual_aperture = true;
  const auto d = fresh_dir("vla");
  cmd_simulate(e, d.string());
  for (int q = 0; q < 4; ++q) CHECK(fs::exists(d / ("channels_q" + std::to_string(q) + ".mbcd")));
  CHECK_FALSE(fs::exists(d / "channels.mbcd"));
  cmd_beamform(e, d.string());
  const auto v = read_volume((d / "volume_das.mbvl").string());
  CHECK(v.grid.size() == e.grid.size());
}

TEST_CASE("modified stage outputs are detected") {
  const auto e = tiny();
  const auto d = fresh_dir("drift");
  cmd_simulate(e, d.string());
  { std::ofstream(d / "channels.mbcd", std::ios::app | std::ios::binary) << "x"; }
  CHECK_THROWS_AS(cmd_beamform(e, d.string()), DataError);

  cmd_simulate(e, d.string());
  cmd_beamform(e, d.string());
  { std::ofstream(d / "volume_nsi.mbvl", std::ios::app | std::ios::binary) << "x"; }
  CHECK_THROWS_AS(cmd_metrics(e, d.string()), DataError);

  const auto missing = fresh_dir("missing");
  CHECK_THROWS_AS(cmd_beamform(e, missing.string()), DataError);

  auto none = e;
  none.beamformers.clear();
  CHECK_THROWS_AS(cmd_metrics(none, d.string()), ConfigError);
  CHECK_THROWS_AS(measure(e, {}, {}), ConfigError);
}

TEST_CASE("report sweeps coupling factors into subdirectories") {
  auto e = tiny("sweep.coupling_factors = 1, 2\n");
  const auto d = fresh_dir("sweep");
  const auto r = cmd_report(e, d.string());
  CHECK(fs::exists(d / "coupling_1" / "metrics.csv"));
  CHECK(fs::exists(d / "coupling_2" / "metrics.csv"));
  CHECK(fs::exists(d / "report.csv"));
  std::size_t c2 = 0;
  for (const auto& row : r.rows) c2 += row.coupling == 2;
  CHECK(c2 == r.rows.size() / 2);
}

TEST_CASE("cyst phantom at coupling 1: speckle statistics") {
  auto e = load_experiment("vla-cyst");
  const auto setup = build_setup(e);
  const auto out = beamform_experiment(e, setup, simulate(e, setup));
  std::vector<Beamformer> kinds;
  for (const auto& b : e.beamformers) kinds.push_back(b.kind);
  const auto r = measure(e, kinds, out.volumes);
  const double das_gcnr = metric(r, "das", "gcnr");
  MESSAGE("das gcnr = " << das_gcnr);
  CHECK(das_gcnr >= 0.45);
  CHECK(das_gcnr <= 0.75);
  const double dcf = metric(r, "dcf", "ssnr");
  for (const auto* other : {"das", "nsi", "mv"}) CHECK(dcf < metric(r, other, "ssnr"));
}
