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

#include "mxbf/txseq.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace mxbf {

namespace {

constexpr double kDeg = kPi / 180.0;

void check_angle(const PlaneWaveAngle& a) {
  if (!(std::abs(a.azimuth_deg) < 90.0) || !(std::abs(a.elevation_deg) < 90.0)) {
    throw std::invalid_argument("steering angles must lie strictly within +-90 degrees");
  }
}

}  // namespace

DirectionAngles PlaneWaveAngle::radians() const {
  return {azimuth_deg * kDeg, elevation_deg * kDeg};
}

double PulseSpec::sigma(double center_frequency) const {
  return cycles / (center_frequency * 2.0 * std::sqrt(2.0 * std::log(2.0)));
}

double TransmitSequence::transmit_time(std::size_t k, const Vec3& p,
                                       const MediumSpec& medium) const {
  const Vec3 u = angles[k].radians().unit();
  return (p.x * u.x + p.y * u.y + p.z * u.z - reference_m[k]) / medium.sound_speed;
}

std::vector<PlaneWaveAngle> star_pattern(double axis_max_deg, std::size_t axis_count,
                                         double diag_max_deg) {
  if (axis_count != 2) {
    throw std::invalid_argument("star pattern needs exactly two magnitudes per axis");
  }
  if (!(axis_max_deg > 0.0) || !(axis_max_deg < 90.0)) {
    throw std::invalid_argument("axis_max must lie in (0, 90) degrees");
  }
  if (!(diag_max_deg > 0.0) || !(diag_max_deg < 90.0)) {
    throw std::invalid_argument("diag_max must lie in (0, 90) degrees");
  }
  const double step = axis_max_deg / static_cast<double>(axis_count);
  const double d = std::min(step, diag_max_deg / std::sqrt(2.0));
  return {
      {0.0, 0.0},
      {-axis_max_deg, 0.0}, {-step, 0.0}, {step, 0.0}, {axis_max_deg, 0.0},
      {0.0, -axis_max_deg}, {0.0, -step}, {0.0, step}, {0.0, axis_max_deg},
      {-d, -d}, {d, -d}, {-d, d}, {d, d},
  };
}

double steering_magnitude_deg(const PlaneWaveAngle& angle) {
  const Vec3 u = angle.radians().unit();
  return std::acos(std::clamp(u.z, -1.0, 1.0)) / kDeg;
}

std::vector<double> plane_wave_delays(const std::vector<Vec3>& positions,
                                      const PlaneWaveAngle& angle, const MediumSpec& medium) {
  check_angle(angle);
  medium.validate();
  const Vec3 u = angle.radians().unit();
  std::vector<double> out(positions.size());
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    out[i] = (positions[i].x * u.x + positions[i].y * u.y) / medium.sound_speed;
    lo = std::min(lo, out[i]);
  }
  for (auto& d : out) d -= lo;
  return out;
}

double coupled_delays(const std::vector<double>& member_delays) {
  if (member_delays.empty()) throw std::invalid_argument("coupled block has no members");
  if (member_delays.size() == 1) return member_delays.front();
  return std::accumulate(member_delays.begin(), member_delays.end(), 0.0) /
         static_cast<double>(member_delays.size());
}

TransmitSequence build_transmit_sequence(const CoupledArray& array,
                                         const std::vector<Vec3>& offsets,
                                         std::vector<PlaneWaveAngle> angles,
                                         double center_frequency, PulseSpec pulse,
                                         const MediumSpec& medium) {
  if (offsets.empty()) throw std::invalid_argument("at least one array placement is required");
  if (angles.empty()) throw std::invalid_argument("transmit sequence has no angles");
  if (!(center_frequency > 0.0)) throw std::invalid_argument("center frequency must be positive");
  if (!(pulse.cycles > 0.0)) throw std::invalid_argument("pulse cycle count must be positive");
  medium.validate();

  const auto& base = array.base().positions();
  std::vector<Vec3> elements;
  elements.reserve(base.size() * offsets.size());
  for (const auto& off : offsets) {
    for (const auto& p : base) elements.push_back(p + off);
  }

  TransmitSequence seq;
  seq.center_frequency = center_frequency;
  seq.pulse = pulse;
  seq.angles = std::move(angles);
  const std::size_t nb = array.blocks().size();
  for (const auto& angle : seq.angles) {
    const std::vector<double> d = plane_wave_delays(elements, angle, medium);
    const Vec3 u = angle.radians().unit();
    double ref = std::numeric_limits<double>::infinity();
    for (const auto& e : elements) ref = std::min(ref, e.x * u.x + e.y * u.y);
    seq.reference_m.push_back(ref);

    std::vector<double> row;
    row.reserve(nb * offsets.size());
    std::vector<double> members;
    for (std::size_t q = 0; q < offsets.size(); ++q) {
      for (const auto& block : array.blocks()) {
        members.clear();
        for (std::size_t m : block.members) members.push_back(d[q * base.size() + m]);
        row.push_back(coupled_delays(members));
      }
    }
    seq.delays.push_back(std::move(row));
  }
  return seq;
}

std::string angles_csv(const std::vector<PlaneWaveAngle>& angles) {
  std::ostringstream out;
  out.precision(17);
  out << "angle_index,azimuth_deg,elevation_deg\n";
  for (std::size_t i = 0; i < angles.size(); ++i) {
    out << i << ',' << angles[i].azimuth_deg << ',' << angles[i].elevation_deg << '\n';
  }
  return out.str();
}

std::string delays_csv(const TransmitSequence& sequence) {
  std::ostringstream out;
  out.precision(17);
  out << "angle_index,emitter_index,delay_s\n";
  for (std::size_t k = 0; k < sequence.delays.size(); ++k) {
    for (std::size_t e = 0; e < sequence.delays[k].size(); ++e) {
      out << k << ',' << e << ',' << sequence.delays[k][e] << '\n';
    }
  }
  return out.str();
}

}  // namespace mxbf
