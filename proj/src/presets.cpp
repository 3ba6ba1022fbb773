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

#include <map>
#include <string>
#include <vector>

#include "mxbf/common.hpp"
#include "mxbf/experiment.hpp"

namespace mxbf {

namespace {

// 8 x 8 large-element array imaging one point target.
const char* kPsf = R"(name = psf
rows = 8
cols = 8
pitch_x_m = 1.25e-3
pitch_y_m = 1.25e-3
elem_w_m = 1.20e-3
elem_h_m = 1.20e-3
panels = 1
coupling_factor = 1
vla = false

sound_speed_m_s = 1540
f0_hz = 7.81e6
fs_hz = 31.24e6
pulse_cycles = 3

tx.axis_max_deg = 4
tx.axis_count = 2
tx.diag_max_deg = 3

phantom = psf
phantom.depth_m = 40e-3

grid.x_m = -8e-3, 8e-3
grid.y_m = -8e-3, 8e-3
grid.z_m = 39.4e-3, 40.6e-3
grid.spacing_m = 0.2e-3

beamformer = das, nsi, dcf, mv
nsi.dc_offset = 0.5
mv.L = auto
mv.loading_scale = auto

metrics.target_m = 0, 0, 40e-3
# role, xmin, xmax, ymin, ymax, zmin, zmax (m)
roi.main = mainlobe, -0.4e-3, 0.4e-3, -0.4e-3, 0.4e-3, 39.4e-3, 40.6e-3
roi.side = sidelobe, 2e-3, 6e-3, -0.4e-3, 0.4e-3, 39.4e-3, 40.6e-3

seed = 1
)";

// 32 x 32 four-panel probe, tiled into a 2 x 2 virtual aperture, imaging one wire.
// f0 puts the 0.275 mm element at 1.48 wavelengths.
const char* kVlaWire = R"(name = vla-wire
rows = 32
cols = 32
pitch_x_m = 0.3e-3
pitch_y_m = 0.3e-3
elem_w_m = 0.275e-3
elem_h_m = 0.275e-3
panels = 4
coupling_factor = 1
vla = true

sound_speed_m_s = 1540
f0_hz = 8.29e6
fs_hz = 33.16e6
pulse_cycles = 3

tx.axis_max_deg = 4
tx.axis_count = 2
tx.diag_max_deg = 3

phantom = wire
phantom.wire.a = 0, 0, 20e-3

grid.x_m = -4e-3, 4e-3
grid.y_m = -1e-3, 1e-3
grid.z_m = 19.4e-3, 20.6e-3
grid.spacing_m = 0.2e-3

beamformer = das, nsi, dcf, mv
nsi.dc_offset = 0.5
mv.L = auto
mv.loading_scale = auto

metrics.target_m = 0, 0, 20e-3
sweep.coupling_factors = 1, 2, 4

seed = 1
)";

// Desk-scale speckle phantom with one anechoic cyst, 16 x 16 two-panel probe tiled 2 x 2.
const char* kVlaCyst = R"(name = vla-cyst
rows = 16
cols = 16
pitch_x_m = 0.3e-3
pitch_y_m = 0.3e-3
elem_w_m = 0.275e-3
elem_h_m = 0.275e-3
panels = 2
coupling_factor = 1
vla = true

sound_speed_m_s = 1540
f0_hz = 8.29e6
fs_hz = 33.16e6
pulse_cycles = 3

tx.axis_max_deg = 4
tx.axis_count = 2
tx.diag_max_deg = 3

phantom = cyst
# xmin, xmax, ymin, ymax, zmin, zmax (m)
phantom.extent_m = -3.5e-3, 3.5e-3, -1.2e-3, 1.2e-3, 12.5e-3, 17.5e-3
phantom.density_per_mm3 = 60
phantom.cyst.a = 0, 0, 15e-3
phantom.cyst_radius_m = 1.5e-3
phantom.rng = mt19937_64

grid.x_m = -3e-3, 3e-3
grid.y_m = -0.6e-3, 0.6e-3
grid.z_m = 13e-3, 17e-3
grid.spacing_m = 0.2e-3

beamformer = das, nsi, dcf, mv
nsi.dc_offset = 0.5
mv.L = auto
mv.loading_scale = auto

roi.cyst = interior, -0.8e-3, 0.8e-3, -0.4e-3, 0.4e-3, 14.2e-3, 15.8e-3
roi.speckle = background, 2.0e-3, 3.0e-3, -0.4e-3, 0.4e-3, 14.2e-3, 15.8e-3
sweep.coupling_factors = 1, 2, 4

seed = 7
)";

const std::map<std::string, const char*>& presets() {
  static const std::map<std::string, const char*> table{
      {"psf", kPsf}, {"vla-wire", kVlaWire}, {"vla-cyst", kVlaCyst}};
  return table;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : presets()) out.push_back(name);
  return out;
}

std::string preset_text(const std::string& name) {
  auto it = presets().find(name);
  if (it == presets().end()) throw ConfigError("unknown preset `" + name + "`");
  return it->second;
}

}  // namespace mxbf
