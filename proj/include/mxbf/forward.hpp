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

#ifndef MXBF_FORWARD_HPP
#define MXBF_FORWARD_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mxbf/array.hpp"
#include "mxbf/common.hpp"
#include "mxbf/txseq.hpp"

namespace mxbf {

enum class PhantomKind { psf, wire, cyst };

std::string to_string(PhantomKind kind);
PhantomKind parse_phantom_kind(const std::string& text);

struct Scatterer {
  Vec3 position;
  double reflectivity = 1.0;
};

struct Phantom {
  std::vector<Scatterer> scatterers;
  PhantomKind descriptor = PhantomKind::psf;
  std::uint64_t rng_seed = 0;
};

/// Portable generator: mt19937_64 with explicit bit-level conversion to doubles, so phantoms
/// match byte for byte across standard libraries.
class PhantomRng {
 public:
  explicit PhantomRng(std::uint64_t seed);
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Rayleigh with unit mean, by inverse CDF.
  double rayleigh_unit_mean();

 private:
  std::mt19937_64 engine_;
};

Phantom make_psf_phantom(double depth);

/// Point reflectors of unit strength, one per wire cross-section.
Phantom make_wire_phantom(const std::vector<Vec3>& wires);

struct CystPhantomSpec {
  Vec3 extent_min;
  Vec3 extent_max;
  double scatterers_per_mm3 = 0.0;
  std::vector<Vec3> cyst_centers;
  double cyst_radius = 0.0;
  std::uint64_t seed = 0;
};

/// Uniform random scatterers in a box with unit-mean Rayleigh reflectivities; scatterers
/// inside any cyst sphere are discarded. Cyst centers must lie in the box; the sphere may be
/// cut by a thin slab. Developed speckle needs roughly five or more
/// scatterers per resolution cell.
Phantom make_cyst_phantom(const CystPhantomSpec& spec);

/// Real RF samples laid out [transmission][receiver][time].
struct ChannelData {
  std::size_t n_tx = 0;
  std::size_t n_rx = 0;
  std::size_t n_t = 0;
  double sampling_rate = 0.0;
  double start_time = 0.0;
  double center_frequency = 0.0;
  std::vector<float> samples;

  float* trace(std::size_t k, std::size_t i) { return samples.data() + (k * n_rx + i) * n_t; }
  const float* trace(std::size_t k, std::size_t i) const {
    return samples.data() + (k * n_rx + i) * n_t;
  }
  double time(std::size_t n) const { return start_time + static_cast<double>(n) / sampling_rate; }
};

struct TimeWindow {
  double start_time = 0.0;
  std::size_t n_t = 1;
};

/// Shortest sample-aligned window that holds every echo of every element in the given
/// placements, pulse tails included.
TimeWindow synthesis_window(const Phantom& phantom, const CoupledArray& array,
                            const std::vector<Vec3>& offsets, const TransmitSequence& sequence,
                            const MediumSpec& medium, double sampling_rate);

/// Adds one echo into a double trace: amplitude * g(t - arrival) * cos(2 pi f0 (t - arrival)).
void deposit_pulse(double* trace, std::size_t n_t, double start_time, double sampling_rate,
                   double arrival, double amplitude, double center_frequency, double sigma);

/// Trace of one physical element, before coupling. `offset` places the array.
std::vector<double> synthesize_element_trace(const Phantom& phantom, const CoupledArray& array,
                                             const Vec3& offset, std::size_t transmission,
                                             std::size_t element, const TransmitSequence& sequence,
                                             const MediumSpec& medium, double sampling_rate,
                                             const TimeWindow& window);

/// Channel data for one placement of a coupled array. Receivers are the blocks; each block
/// trace is the undelayed sum of its member traces.
ChannelData synthesize_rf(const Phantom& phantom, const CoupledArray& array, const Vec3& offset,
                          const TransmitSequence& sequence, const MediumSpec& medium,
                          double sampling_rate, const TimeWindow& window, Exec exec = Exec::parallel);

/// Single array at the origin.
ChannelData synthesize_rf(const Phantom& phantom, const CoupledArray& array,
                          const TransmitSequence& sequence, const MediumSpec& medium,
                          double sampling_rate, Exec exec = Exec::parallel);

/// One ChannelData per quadrant, sharing one time window.
std::vector<ChannelData> synthesize_rf(const Phantom& phantom, const VirtualAperture& aperture,
                                       const TransmitSequence& sequence, const MediumSpec& medium,
                                       double sampling_rate, Exec exec = Exec::parallel);

}  // namespace mxbf

#endif  // MXBF_FORWARD_HPP
