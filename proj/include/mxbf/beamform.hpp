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

#ifndef MXBF_BEAMFORM_HPP
#define MXBF_BEAMFORM_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mxbf/advanced.hpp"
#include "mxbf/array.hpp"
#include "mxbf/common.hpp"
#include "mxbf/sigproc.hpp"
#include "mxbf/txseq.hpp"

namespace mxbf {

/// Regular 3D pixel grid. Pixel (ix, iy, iz) sits at origin + (ix dx, iy dy, iz dz).
struct PixelGrid {
  Vec3 origin;
  Vec3 spacing{2e-4, 2e-4, 2e-4};
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nz = 0;

  std::size_t size() const { return nx * ny * nz; }
  std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return (ix * ny + iy) * nz + iz;
  }
  Vec3 point(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return {origin.x + static_cast<double>(ix) * spacing.x,
            origin.y + static_cast<double>(iy) * spacing.y,
            origin.z + static_cast<double>(iz) * spacing.z};
  }
  Vec3 point(std::size_t flat) const;
  void validate() const;

  /// Smallest grid at the given spacing covering [lo, hi] on each axis, anchored at lo.
  static PixelGrid covering(const Vec3& lo, const Vec3& hi, const Vec3& spacing);
};

enum class VolumeKind : std::uint8_t { complex = 0, envelope = 1 };

struct BeamformedVolume {
  PixelGrid grid;
  VolumeKind kind = VolumeKind::complex;
  std::vector<cdouble> values;     ///< envelope volumes keep the value in the real part
  std::vector<std::uint8_t> coverage;  ///< 1 where the receive subaperture was non-empty

  std::vector<double> envelope() const;
};

/// Plane-wave transmit time to the pixel plus the receive path back to the receiver.
double two_way_delay(const Vec3& pixel, const Vec3& receiver, const PlaneWaveAngle& angle,
                     const MediumSpec& medium, double reference_m = 0.0);

/// Per-axis test |dx| <= z / (2 F#) and |dy| <= z / (2 F#).
bool in_subaperture(const Vec3& pixel, const Vec3& receiver, double f_number);

/// Half-open row and column ranges of the receiver grid inside a pixel's subaperture.
struct Subaperture {
  std::size_t row_begin = 0;
  std::size_t row_end = 0;
  std::size_t col_begin = 0;
  std::size_t col_end = 0;

  std::size_t rows() const { return row_end - row_begin; }
  std::size_t cols() const { return col_end - col_begin; }
  std::size_t size() const { return rows() * cols(); }
};

Subaperture find_subaperture(const ReceiverGrid& grid, const Vec3& pixel, double f_number);

/// Everything a pixel loop reads. Receiver i of the grid owns IQ traces (k, i).
struct BeamformInputs {
  const IQData* iq = nullptr;
  const ReceiverGrid* receivers = nullptr;
  const TransmitSequence* sequence = nullptr;
  MediumSpec medium;
  double f_number = 1.0;

  void validate() const;
};

/// Compounded delayed samples S[r][c] of one pixel's subaperture, plus the pixel position
/// relative to the subaperture edges.
void gather_pixel(const BeamformInputs& in, const Vec3& pixel, const Subaperture& sub,
                  const std::vector<double>& transmit_times, ApertureData& out);

/// Delay-and-sum over the minimum-F-number subaperture, transmissions compounded coherently.
BeamformedVolume das(const BeamformInputs& in, const PixelGrid& grid, Exec exec = Exec::parallel,
                     VolumeStats* stats = nullptr);

/// Runs several beamformers over one shared delay-and-gather pass.
std::vector<BeamformedVolume> beamform(const BeamformInputs& in, const PixelGrid& grid,
                                       const std::vector<BeamformerConfig>& configs,
                                       Exec exec = Exec::parallel,
                                       std::vector<VolumeStats>* stats = nullptr);

/// Joins per-quadrant IQ into one aperture ordered like the virtual aperture's receiver grid.
IQData fuse_quadrants(const std::vector<IQData>& quadrants, const VirtualAperture& aperture);

}  // namespace mxbf

#endif  // MXBF_BEAMFORM_HPP
