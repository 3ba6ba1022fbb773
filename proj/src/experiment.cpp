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

#include "mxbf/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "mxbf/io.hpp"
#include "mxbf/sigproc.hpp"

namespace mxbf {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kKnownKeys = {
    "name", "rows", "cols", "pitch_x_m", "pitch_y_m", "elem_w_m", "elem_h_m", "panels",
    "coupling_factor", "vla", "sound_speed_m_s", "f0_hz", "fs_hz", "pulse_cycles",
    "tx.axis_max_deg", "tx.axis_count", "tx.diag_max_deg", "phantom", "phantom.depth_m",
    "phantom.wire.*", "phantom.extent_m", "phantom.density_per_mm3", "phantom.cyst.*",
    "phantom.cyst_radius_m", "phantom.rng", "grid.x_m", "grid.y_m", "grid.z_m",
    "grid.spacing_m", "beamformer", "nsi.dc_offset", "mv.L", "mv.loading_scale", "roi.*",
    "metrics.target_m", "sweep.coupling_factors", "bench.sizes", "bench.pixels",
    "bench.repeats", "bench.pool", "bench.exec", "seed", "exec"};

std::vector<double> numbers(const KeyValueConfig& c, const std::string& key, std::size_t count) {
  const auto v = c.get_doubles(key);
  if (v.size() != count) {
    throw ConfigError(c.where(key) + ": expected " + std::to_string(count) + " values, got " +
                      std::to_string(v.size()));
  }
  return v;
}

Vec3 vec3(const KeyValueConfig& c, const std::string& key) {
  const auto v = numbers(c, key, 3);
  return {v[0], v[1], v[2]};
}

Exec parse_exec(const KeyValueConfig& c, const std::string& key, Exec fallback) {
  if (!c.has(key)) return fallback;
  const std::string v = c.get_string(key);
  if (v == "serial") return Exec::serial;
  if (v == "parallel") return Exec::parallel;
  throw ConfigError(c.where(key) + ": expected serial or parallel, got `" + v + "`");
}

// Runs f, rethrowing std::invalid_argument as a ConfigError anchored at `key`.
template <typename F>
auto anchored(const KeyValueConfig& c, const std::string& key, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(c.where(key) + ": " + e.what());
  }
}

std::string suffix(const std::string& key, const std::string& prefix) {
  return key.substr(prefix.size());
}

}  // namespace

ExperimentConfig parse_experiment(const KeyValueConfig& c, const std::string& name) {
  c.reject_unknown(kKnownKeys);
  ExperimentConfig e;
  e.source = c;
  e.name = c.get_string("name", name.empty() ? c.source() : name);
  e.geometry = read_geometry_config(c);
  e.virtual_aperture = c.get_bool("vla", false);

  e.medium.sound_speed = c.get_double("sound_speed_m_s", 1540.0);
  anchored(c, "sound_speed_m_s", [&] { e.medium.validate(); return 0; });
  e.center_frequency = c.get_double("f0_hz");
  if (!(e.center_frequency > 0.0)) throw ConfigError(c.where("f0_hz") + ": must be positive");
  e.sampling_rate = c.get_double("fs_hz", 4.0 * e.center_frequency);
  if (!(e.sampling_rate >= 4.0 * e.center_frequency)) {
    throw ConfigError(c.where("fs_hz") + ": sampling rate must be at least 4 x f0");
  }
  e.pulse.cycles = c.get_double("pulse_cycles", 3.0);
  if (!(e.pulse.cycles > 0.0)) throw ConfigError(c.where("pulse_cycles") + ": must be positive");

  e.axis_max_deg = c.get_double("tx.axis_max_deg", 4.0);
  e.axis_count = c.get_size("tx.axis_count", 2);
  e.diag_max_deg = c.get_double("tx.diag_max_deg", 3.0);
  anchored(c, "tx.axis_max_deg",
           [&] { return star_pattern(e.axis_max_deg, e.axis_count, e.diag_max_deg); });

  // Phantom.
  const std::string pkind = c.get_string("phantom");
  e.phantom.kind = anchored(c, "phantom", [&] { return parse_phantom_kind(pkind); });
  e.phantom.rng = c.get_string("phantom.rng", "mt19937_64");
  if (e.phantom.rng != "mt19937_64") {
    throw ConfigError(c.where("phantom.rng") + ": only mt19937_64 is supported");
  }
  e.seed = c.get_u64("seed", 1);
  switch (e.phantom.kind) {
    case PhantomKind::psf:
      e.phantom.depth = c.get_double("phantom.depth_m");
      if (!(e.phantom.depth > 0.0)) throw ConfigError(c.where("phantom.depth_m") + ": must be positive");
      break;
    case PhantomKind::wire:
      for (const auto& key : c.keys_with_prefix("phantom.wire.")) {
        e.phantom.wires.push_back(vec3(c, key));
        if (!(e.phantom.wires.back().z > 0.0)) throw ConfigError(c.where(key) + ": depth must be positive");
      }
      if (e.phantom.wires.empty()) throw ConfigError(c.source() + ": wire phantom needs phantom.wire.<id> entries");
      break;
    case PhantomKind::cyst: {
      const auto ext = numbers(c, "phantom.extent_m", 6);
      e.phantom.cyst.extent_min = {ext[0], ext[2], ext[4]};
      e.phantom.cyst.extent_max = {ext[1], ext[3], ext[5]};
      e.phantom.cyst.scatterers_per_mm3 = c.get_double("phantom.density_per_mm3");
      e.phantom.cyst.cyst_radius = c.get_double("phantom.cyst_radius_m", 0.0);
      for (const auto& key : c.keys_with_prefix("phantom.cyst.")) {
        e.phantom.cyst.cyst_centers.push_back(vec3(c, key));
      }
      e.phantom.cyst.seed = e.seed;
      CystPhantomSpec probe = e.phantom.cyst;
      probe.scatterers_per_mm3 = 0.0;  // validate bounds without drawing scatterers
      anchored(c, "phantom.extent_m", [&] { return make_cyst_phantom(probe); });
      break;
    }
  }

  // Pixel grid.
  const auto gx = numbers(c, "grid.x_m", 2);
  const auto gy = numbers(c, "grid.y_m", 2);
  const auto gz = numbers(c, "grid.z_m", 2);
  const auto sp = c.get_doubles("grid.spacing_m");
  if (sp.size() != 1 && sp.size() != 3) {
    throw ConfigError(c.where("grid.spacing_m") + ": expected 1 or 3 values");
  }
  const Vec3 spacing = sp.size() == 1 ? Vec3{sp[0], sp[0], sp[0]} : Vec3{sp[0], sp[1], sp[2]};
  if (!(gz[0] > 0.0)) throw ConfigError(c.where("grid.z_m") + ": pixels must lie at z > 0");
  e.grid = anchored(c, "grid.x_m", [&] {
    return PixelGrid::covering({gx[0], gy[0], gz[0]}, {gx[1], gy[1], gz[1]}, spacing);
  });

  // Beamformers.
  NsiConfig nsi;
  nsi.dc_offset = c.get_double("nsi.dc_offset", 0.5);
  anchored(c, "nsi.dc_offset", [&] { nsi.validate(); return 0; });
  MvConfig mv;
  if (c.has("mv.L") && c.get_string("mv.L") != "auto") {
    mv.subarray_length = c.get_size("mv.L");
    if (mv.subarray_length == 0) throw ConfigError(c.where("mv.L") + ": must be at least 1");
  }
  if (c.has("mv.loading_scale") && c.get_string("mv.loading_scale") != "auto") {
    mv.loading_scale = c.get_double("mv.loading_scale");
    if (!(mv.loading_scale > 0.0)) throw ConfigError(c.where("mv.loading_scale") + ": must be positive");
  }
  const auto names = c.has("beamformer") ? c.get_strings("beamformer") : std::vector<std::string>{"das"};
  for (const auto& n : names) {
    BeamformerConfig b;
    b.kind = anchored(c, "beamformer", [&] { return parse_beamformer(n); });
    b.nsi = nsi;
    b.mv = mv;
    for (const auto& prev : e.beamformers) {
      if (prev.kind == b.kind) throw ConfigError(c.where("beamformer") + ": `" + n + "` listed twice");
    }
    e.beamformers.push_back(b);
  }

  // ROIs.
  for (const auto& key : c.keys_with_prefix("roi.")) {
    const auto parts = c.get_strings(key);
    if (parts.size() != 7) throw ConfigError(c.where(key) + ": expected role and six bounds");
    Roi roi;
    roi.id = suffix(key, "roi.");
    roi.role = anchored(c, key, [&] { return parse_roi_role(parts[0]); });
    std::vector<double> b;
    for (std::size_t i = 1; i < 7; ++i) {
      try {
        std::size_t used = 0;
        b.push_back(std::stod(parts[i], &used));
        if (used != parts[i].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ConfigError(c.where(key) + ": bad number `" + parts[i] + "`");
      }
    }
    roi.min = {b[0], b[2], b[4]};
    roi.max = {b[1], b[3], b[5]};
    if (roi.min.x > roi.max.x || roi.min.y > roi.max.y || roi.min.z > roi.max.z) {
      throw ConfigError(c.where(key) + ": ROI bounds must be ordered min, max");
    }
    e.rois.push_back(roi);
  }
  for (const auto& a : e.rois) {
    for (const auto& b : e.rois) {
      if (a.role == RoiRole::interior && b.role == RoiRole::background && a.overlaps(b)) {
        throw ConfigError(c.where("roi." + a.id) + ": interior ROI overlaps background ROI `" + b.id + "`");
      }
    }
  }
  if (c.has("metrics.target_m")) e.target = vec3(c, "metrics.target_m");

  if (c.has("sweep.coupling_factors")) {
    for (double f : c.get_doubles("sweep.coupling_factors")) {
      const auto factor = static_cast<std::size_t>(f);
      if (static_cast<double>(factor) != f) throw ConfigError(c.where("sweep.coupling_factors") + ": factors must be integers");
      GeometryConfig g = e.geometry;
      g.coupling_factor = factor;
      anchored(c, "sweep.coupling_factors", [&] { return g.build_coupled(); });
      e.coupling_sweep.push_back(factor);
    }
  }

  if (c.has("bench.sizes")) {
    e.bench.sizes.clear();
    for (double n : c.get_doubles("bench.sizes")) e.bench.sizes.push_back(static_cast<std::size_t>(n));
  }
  e.bench.pixels = c.get_size("bench.pixels", e.bench.pixels);
  e.bench.repeats = c.get_size("bench.repeats", e.bench.repeats);
  e.bench.pool = c.get_size("bench.pool", e.bench.pool);
  e.bench.exec = parse_exec(c, "bench.exec", Exec::serial);
  e.bench.seed = e.seed;
  e.bench.beamformers = e.beamformers;
  anchored(c, "bench.sizes", [&] { e.bench.validate(); return 0; });

  e.exec = parse_exec(c, "exec", Exec::parallel);
  return e;
}

ExperimentConfig load_experiment(const std::string& file_or_preset) {
  for (const auto& n : preset_names()) {
    if (n == file_or_preset) {
      return parse_experiment(KeyValueConfig::parse(preset_text(n), "preset:" + n), n);
    }
  }
  return parse_experiment(KeyValueConfig::load(file_or_preset));
}

ExperimentSetup build_setup(const ExperimentConfig& config) {
  CoupledArray array = config.geometry.build_coupled();
  std::optional<VirtualAperture> aperture;
  std::vector<Vec3> offsets{Vec3{}};
  ReceiverGrid receivers;
  if (config.virtual_aperture) {
    aperture = tile_virtual_aperture(array);
    offsets.clear();
    for (const auto& q : aperture->quadrants()) offsets.push_back(q.offset);
    receivers = receiver_grid(*aperture);
  } else {
    receivers = receiver_grid(array);
  }
  const auto angles = star_pattern(config.axis_max_deg, config.axis_count, config.diag_max_deg);
  TransmitSequence seq = build_transmit_sequence(array, offsets, angles, config.center_frequency,
                                                 config.pulse, config.medium);
  const double lambda = config.medium.wavelength(config.center_frequency);
  const double f_number = min_f_number(array.block_width() / lambda);
  return {std::move(array), std::move(aperture), std::move(receivers), std::move(seq), lambda,
          f_number};
}

Phantom build_phantom(const ExperimentConfig& config) {
  switch (config.phantom.kind) {
    case PhantomKind::psf: return make_psf_phantom(config.phantom.depth);
    case PhantomKind::wire: return make_wire_phantom(config.phantom.wires);
    case PhantomKind::cyst: return make_cyst_phantom(config.phantom.cyst);
  }
  throw std::logic_error("unhandled phantom kind");
}

std::vector<ChannelData> simulate(const ExperimentConfig& config, const ExperimentSetup& setup) {
  const Phantom phantom = build_phantom(config);
  if (setup.aperture) {
    return synthesize_rf(phantom, *setup.aperture, setup.sequence, config.medium,
                         config.sampling_rate, config.exec);
  }
  return {synthesize_rf(phantom, setup.array, setup.sequence, config.medium, config.sampling_rate,
                        config.exec)};
}

BeamformOutput beamform_experiment(const ExperimentConfig& config, const ExperimentSetup& setup,
                                   const std::vector<ChannelData>& channels) {
  const std::size_t expected = setup.aperture ? setup.aperture->quadrants().size() : 1;
  if (channels.size() != expected) {
    throw DataError("expected " + std::to_string(expected) + " channel datasets, got " +
                    std::to_string(channels.size()));
  }
  std::vector<IQData> iq;
  for (const auto& ch : channels) iq.push_back(demodulate(ch, {}, config.exec));
  IQData fused = setup.aperture ? fuse_quadrants(iq, *setup.aperture) : std::move(iq.front());

  BeamformInputs in;
  in.iq = &fused;
  in.receivers = &setup.receivers;
  in.sequence = &setup.sequence;
  in.medium = config.medium;
  in.f_number = setup.f_number;
  BeamformOutput out;
  out.volumes = beamform(in, config.grid, config.beamformers, config.exec, &out.stats);
  return out;
}

namespace {

double safe_fwhm_mm(const std::vector<double>& profile, double spacing) {
  try {
    return fwhm(profile, spacing) * 1e3;
  } catch (const NumericError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

MetricsReport measure(const ExperimentConfig& config, const std::vector<Beamformer>& kinds,
                      const std::vector<BeamformedVolume>& volumes) {
  if (volumes.empty()) throw ConfigError(config.source.source() + ": no volumes to measure");
  if (kinds.size() != volumes.size()) throw std::invalid_argument("one beamformer kind per volume");
  MetricsReport report;
  const std::size_t coupling = config.geometry.coupling_factor;
  const Roi* mainlobe = nullptr;
  const Roi* first_background = nullptr;
  for (const auto& r : config.rois) {
    if (r.role == RoiRole::mainlobe && !mainlobe) mainlobe = &r;
    if (r.role == RoiRole::background && !first_background) first_background = &r;
  }
  for (std::size_t b = 0; b < volumes.size(); ++b) {
    const auto& v = volumes[b];
    const std::string name = to_string(kinds[b]);
    auto add = [&](const std::string& metric, double value, const std::string& roi) {
      report.rows.push_back({name, coupling, metric, value, roi});
    };
    if (config.target) {
      const Vec3 t = *config.target;
      add("fwhm_lateral_mm",
          safe_fwhm_mm(extract_lateral_profile(v, t.z, t.y), v.grid.spacing.x), "target");
      add("fwhm_elevation_mm",
          safe_fwhm_mm(extract_elevation_profile(v, t.z, t.x), v.grid.spacing.y), "target");
    }
    if (mainlobe) {
      for (const auto& r : config.rois) {
        if (r.role == RoiRole::sidelobe) {
          add("psf_contrast_db", psf_contrast(v, *mainlobe, r), mainlobe->id + "/" + r.id);
        }
      }
    }
    if (first_background) {
      for (const auto& r : config.rois) {
        if (r.role != RoiRole::interior) continue;
        const auto m = contrast_metrics(v, r, *first_background);
        add("cr_db", m.cr_db, r.id);
        add("cnr", m.cnr, r.id);
        add("gcnr", m.gcnr, r.id);
      }
    }
    for (const auto& r : config.rois) {
      if (r.role == RoiRole::background) add("ssnr", ssnr(v, r), r.id);
    }
  }
  return report;
}

namespace {

using nlohmann::json;

std::vector<std::string> channel_files(const ExperimentConfig& config) {
  if (!config.virtual_aperture) return {"channels.mbcd"};
  return {"channels_q0.mbcd", "channels_q1.mbcd", "channels_q2.mbcd", "channels_q3.mbcd"};
}

std::string volume_file(Beamformer b) { return "volume_" + to_string(b) + ".mbvl"; }

json load_manifest(const fs::path& dir) {
  const fs::path p = dir / "manifest.json";
  if (!fs::exists(p)) return json::object();
  try {
    return json::parse(read_text_file(p.string()));
  } catch (const json::exception& e) {
    throw DataError(p.string() + ": unreadable manifest: " + e.what());
  }
}

void record_stage(const fs::path& dir, const ExperimentConfig& config, const std::string& stage,
                  const std::vector<std::string>& files) {
  json m = load_manifest(dir);
  m["experiment"] = config.name;
  json entry;
  entry["config_sha256"] = sha256_hex(config.source.to_text());
  entry["files"] = json::object();
  for (const auto& f : files) entry["files"][f] = sha256_file((dir / f).string());
  m["stages"][stage] = entry;
  write_text_file((dir / "manifest.json").string(), m.dump(2) + "\n");
}

// Checks that inputs written by an earlier stage still match their recorded hashes.
void verify_inputs(const fs::path& dir, const std::string& stage,
                   const std::vector<std::string>& files) {
  const json m = load_manifest(dir);
  if (!m.contains("stages") || !m["stages"].contains(stage)) return;
  const json& recorded = m["stages"][stage]["files"];
  for (const auto& f : files) {
    if (!recorded.contains(f)) continue;
    const std::string now = sha256_file((dir / f).string());
    if (recorded[f].get<std::string>() != now) {
      throw DataError((dir / f).string() + ": hash differs from manifest (" + stage +
                      " stage output changed)");
    }
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError(dir.string() + ": cannot create output directory: " + ec.message());
}

}  // namespace

void cmd_simulate(const ExperimentConfig& config, const std::string& out_dir) {
  const fs::path dir(out_dir);
  ensure_dir(dir);
  const ExperimentSetup setup = build_setup(config);
  const auto channels = simulate(config, setup);
  const auto files = channel_files(config);
  for (std::size_t i = 0; i < files.size(); ++i) {
    write_channel_data((dir / files[i]).string(), channels[i]);
  }
  write_text_file((dir / "config.txt").string(), config.source.to_text());
  write_text_file((dir / "angles.csv").string(), angles_csv(setup.sequence.angles));
  write_text_file((dir / "delays.csv").string(), delays_csv(setup.sequence));
  auto recorded = files;
  recorded.insert(recorded.end(), {"config.txt", "angles.csv", "delays.csv"});
  record_stage(dir, config, "simulate", recorded);
}

void cmd_beamform(const ExperimentConfig& config, const std::string& out_dir) {
  const fs::path dir(out_dir);
  if (config.beamformers.empty()) throw ConfigError(config.source.source() + ": no beamformer selected");
  const auto files = channel_files(config);
  verify_inputs(dir, "simulate", files);
  std::vector<ChannelData> channels;
  for (const auto& f : files) channels.push_back(read_channel_data((dir / f).string()));
  const ExperimentSetup setup = build_setup(config);
  const BeamformOutput out = beamform_experiment(config, setup, channels);
  std::vector<std::string> written;
  for (std::size_t b = 0; b < config.beamformers.size(); ++b) {
    const std::string f = volume_file(config.beamformers[b].kind);
    write_volume((dir / f).string(), out.volumes[b]);
    written.push_back(f);
  }
  std::ostringstream stats;
  stats << "beamformer,empty_pixels,nsi_crops,square_crops,mv_fallbacks\n";
  for (std::size_t b = 0; b < config.beamformers.size(); ++b) {
    const auto& s = out.stats[b];
    stats << to_string(config.beamformers[b].kind) << ',' << s.empty_pixels << ',' << s.nsi_crops
          << ',' << s.square_crops << ',' << s.mv_fallbacks << '\n';
  }
  write_text_file((dir / "beamform_stats.csv").string(), stats.str());
  written.push_back("beamform_stats.csv");
  record_stage(dir, config, "beamform", written);
}

MetricsReport cmd_metrics(const ExperimentConfig& config, const std::string& out_dir) {
  const fs::path dir(out_dir);
  if (config.beamformers.empty()) throw ConfigError(config.source.source() + ": empty volume list");
  std::vector<std::string> files;
  std::vector<Beamformer> kinds;
  for (const auto& b : config.beamformers) {
    files.push_back(volume_file(b.kind));
    kinds.push_back(b.kind);
  }
  verify_inputs(dir, "beamform", files);
  std::vector<BeamformedVolume> volumes;
  for (const auto& f : files) volumes.push_back(read_volume((dir / f).string()));
  MetricsReport report = measure(config, kinds, volumes);
  write_text_file((dir / "metrics.csv").string(), report.csv());
  write_text_file((dir / "metrics.txt").string(), report.table());
  record_stage(dir, config, "metrics", {"metrics.csv", "metrics.txt"});
  return report;
}

BenchResult cmd_bench(const ExperimentConfig& config, const std::string& out_dir) {
  const fs::path dir(out_dir);
  ensure_dir(dir);
  BenchResult result = run_bench(config.bench);
  write_text_file((dir / "bench.csv").string(), result.csv());
  write_text_file((dir / "bench_slopes.csv").string(), result.slopes_csv());
  return result;
}

MetricsReport cmd_report(const ExperimentConfig& config, const std::string& out_dir) {
  const fs::path dir(out_dir);
  ensure_dir(dir);
  std::vector<std::size_t> factors = config.coupling_sweep;
  if (factors.empty()) factors.push_back(config.geometry.coupling_factor);
  MetricsReport all;
  for (std::size_t f : factors) {
    ExperimentConfig c = config;
    c.geometry.coupling_factor = f;
    c.source.set("coupling_factor", std::to_string(f));
    const fs::path sub = config.coupling_sweep.empty() ? dir : dir / ("coupling_" + std::to_string(f));
    cmd_simulate(c, sub.string());
    cmd_beamform(c, sub.string());
    const MetricsReport r = cmd_metrics(c, sub.string());
    all.rows.insert(all.rows.end(), r.rows.begin(), r.rows.end());
  }
  write_text_file((dir / "report.csv").string(), all.csv());
  write_text_file((dir / "report.txt").string(), all.table());
  return all;
}

}  // namespace mxbf
