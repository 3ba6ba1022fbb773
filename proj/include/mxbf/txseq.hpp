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

#ifndef MXBF_TXSEQ_HPP
#define MXBF_TXSEQ_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "mxbf/array.hpp"
#include "mxbf/common.hpp"

namespace mxbf {

/// Plane-wave steering angle pair in degrees.
struct PlaneWaveAngle {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;

  DirectionAngles radians() const;
  bool operator==(const PlaneWaveAngle&) const = default;
};

/// Transmit excitation. Gaussian-windowed sinusoid at the center frequency; `cycles` sets
/// the envelope FWHM in carrier periods.
struct PulseSpec {
  double cycles = 3.0;

  /// Envelope standard deviation in seconds.
  double sigma(double center_frequency) const;
};

struct TransmitSequence {
  std::vector<PlaneWaveAngle> angles;
  double center_frequency = 0.0;
  PulseSpec pulse;
  /// Firing delay per [transmission][emitter], seconds, each row shifted to a minimum of 0.
  std::vector<std::vector<double>> delays;
  /// Per transmission, min over all physical elements of (element . u). Zero time of the
  /// plane wave is when it leaves that element.
  std::vector<double> reference_m;

  std::size_t size() const { return angles.size(); }
  /// Time at which transmission k's wavefront reaches point p.
  double transmit_time(std::size_t k, const Vec3& p, const MediumSpec& medium) const;
};

/// Thirteen-angle star: center, two magnitudes on each axis, and four diagonals.
/// The diagonal component is min(axis step, diag_max / sqrt(2)).
std::vector<PlaneWaveAngle> star_pattern(double axis_max_deg = 4.0, std::size_t axis_count = 2,
                                         double diag_max_deg = 3.0);

/// Angular distance of a steering direction from broadside, degrees.
double steering_magnitude_deg(const PlaneWaveAngle& angle);

/// delay_i = (x_i sin az cos el + y_i sin el) / c, shifted so that min delay = 0.
std::vector<double> plane_wave_delays(const std::vector<Vec3>& positions,
                                      const PlaneWaveAngle& angle, const MediumSpec& medium);

/// Mean of the member delays of one coupled block.
double coupled_delays(const std::vector<double>& member_delays);

/**
 * Builds the sequence for a coupled array placed at each of the given offsets (one offset
 * for a single array, four for a virtual aperture). Emitters are ordered offset-major, block
 * minor. Delays are computed per physical element over the whole aperture and averaged per
 * block.
 */
TransmitSequence build_transmit_sequence(const CoupledArray& array,
                                         const std::vector<Vec3>& offsets,
                                         std::vector<PlaneWaveAngle> angles,
                                         double center_frequency, PulseSpec pulse,
                                         const MediumSpec& medium);

std::string angles_csv(const std::vector<PlaneWaveAngle>& angles);
std::string delays_csv(const TransmitSequence& sequence);

}  // namespace mxbf

#endif  // MXBF_TXSEQ_HPP
