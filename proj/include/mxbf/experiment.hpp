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

#ifndef MXBF_EXPERIMENT_HPP
#define MXBF_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mxbf/array.hpp"
#include "mxbf/bench.hpp"
#include "mxbf/beamform.hpp"
#include "mxbf/config.hpp"
#include "mxbf/forward.hpp"
#include "mxbf/metrics.hpp"
#include "mxbf/txseq.hpp"

namespace mxbf {

struct PhantomConfig {
  PhantomKind kind = PhantomKind::psf;
  double depth = 0.0;            ///< psf
  std::vector<Vec3> wires;       ///< wire
  CystPhantomSpec cyst;          ///< cyst; seed comes from the experiment seed
  std::string rng = "mt19937_64";
};

/// Parsed experiment. Built from a `key = value` config or a named preset.
struct ExperimentConfig {
  std::string name;
  GeometryConfig geometry;
  bool virtual_aperture = false;
  MediumSpec medium;
  double center_frequency = 0.0;
  double sampling_rate = 0.0;
  PulseSpec pulse;
  double axis_max_deg = 4.0;
  std::size_t axis_count = 2;
  double diag_max_deg = 3.0;
  PhantomConfig phantom;
  PixelGrid grid;
  std::vector<BeamformerConfig> beamformers;
  std::vector<Roi> rois;
  std::optional<Vec3> target;  ///< point at which resolution profiles are taken
  std::vector<std::size_t> coupling_sweep;
  BenchConfig bench;
  std::uint64_t seed = 1;
  Exec exec = Exec::parallel;

  /// Config the experiment was parsed from, overrides included.
  KeyValueConfig source;
};

ExperimentConfig parse_experiment(const KeyValueConfig& config, const std::string& name = "");

/// A file path, or the name of a built-in preset (psf, vla-wire, vla-cyst).
ExperimentConfig load_experiment(const std::string& file_or_preset);

std::vector<std::string> preset_names();
/// Config text of a built-in preset; throws ConfigError for unknown names.
std::string preset_text(const std::string& name);

/// Geometry, transmit sequence and receive layout derived from a config.
struct ExperimentSetup {
  CoupledArray array;
  std::optional<VirtualAperture> aperture;
  ReceiverGrid receivers;
  TransmitSequence sequence;
  double wavelength = 0.0;
  double f_number = 0.0;
};

ExperimentSetup build_setup(const ExperimentConfig& config);
Phantom build_phantom(const ExperimentConfig& config);

/// One ChannelData per quadrant for a virtual aperture, otherwise one.
std::vector<ChannelData> simulate(const ExperimentConfig& config, const ExperimentSetup& setup);

struct BeamformOutput {
  std::vector<BeamformedVolume> volumes;  ///< one per config.beamformers entry
  std::vector<VolumeStats> stats;
};

BeamformOutput beamform_experiment(const ExperimentConfig& config, const ExperimentSetup& setup,
                                   const std::vector<ChannelData>& channels);

/// Resolution at the target, main/side-lobe contrast, interior/background contrast and
/// speckle SNR, depending on which ROIs the config defines.
MetricsReport measure(const ExperimentConfig& config, const std::vector<Beamformer>& kinds,
                      const std::vector<BeamformedVolume>& volumes);

// Command entry points. Each writes into `out_dir` and updates out_dir/manifest.json.

void cmd_simulate(const ExperimentConfig& config, const std::string& out_dir);
void cmd_beamform(const ExperimentConfig& config, const std::string& out_dir);
MetricsReport cmd_metrics(const ExperimentConfig& config, const std::string& out_dir);
BenchResult cmd_bench(const ExperimentConfig& config, const std::string& out_dir);
/// simulate + beamform + metrics, once per coupling factor of the sweep (or once).
MetricsReport cmd_report(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace mxbf

#endif  // MXBF_EXPERIMENT_HPP
