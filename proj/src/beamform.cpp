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

#include "mxbf/beamform.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <tuple>

namespace mxbf {

Vec3 PixelGrid::point(std::size_t flat) const {
  const std::size_t iz = flat % nz;
  const std::size_t iy = (flat / nz) % ny;
  const std::size_t ix = flat / (nz * ny);
  return point(ix, iy, iz);
}

void PixelGrid::validate() const {
  if (nx == 0 || ny == 0 || nz == 0) throw std::invalid_argument("pixel grid is empty");
  if (!(spacing.x > 0.0) || !(spacing.y > 0.0) || !(spacing.z > 0.0)) {
    throw std::invalid_argument("pixel spacing must be positive");
  }
}

PixelGrid PixelGrid::covering(const Vec3& lo, const Vec3& hi, const Vec3& spacing) {
  auto count = [](double a, double b, double d) {
    if (!(d > 0.0) || b < a) throw std::invalid_argument("invalid pixel grid bounds");
    return static_cast<std::size_t>(std::floor((b - a) / d + 1e-9)) + 1;
  };
  PixelGrid g;
  g.origin = lo;
  g.spacing = spacing;
  g.nx = count(lo.x, hi.x, spacing.x);
  g.ny = count(lo.y, hi.y, spacing.y);
  g.nz = count(lo.z, hi.z, spacing.z);
  return g;
}

std::vector<double> BeamformedVolume::envelope() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = kind == VolumeKind::envelope ? values[i].real() : std::abs(values[i]);
  }
  return out;
}

double two_way_delay(const Vec3& pixel, const Vec3& receiver, const PlaneWaveAngle& angle,
                     const MediumSpec& medium, double reference_m) {
  const Vec3 u = angle.radians().unit();
  const double tx = (dot(pixel, u) - reference_m) / medium.sound_speed;
  return tx + norm(pixel - receiver) / medium.sound_speed;
}

namespace {

double half_aperture(double depth, double f_number) {
  if (!(f_number > 0.0)) throw std::invalid_argument("F-number must be positive");
  if (std::isinf(f_number)) return 0.0;
  return depth / (2.0 * f_number);
}

bool within(double offset, double half) { return std::abs(offset) <= half * (1.0 + 1e-12); }

// Receiver column x-coordinates and row y-coordinates of a regular grid.
struct GridAxes {
  std::vector<double> x;
  std::vector<double> y;

  explicit GridAxes(const ReceiverGrid& g) {
    for (std::size_t c = 0; c < g.cols; ++c) x.push_back(g.position(0, c).x);
    for (std::size_t r = 0; r < g.rows; ++r) y.push_back(g.position(r, 0).y);
  }
};

std::pair<std::size_t, std::size_t> axis_range(const std::vector<double>& axis, double center,
                                               double half) {
  std::size_t b = 0;
  while (b < axis.size() && !within(axis[b] - center, half) && axis[b] < center) ++b;
  std::size_t e = b;
  while (e < axis.size() && within(axis[e] - center, half)) ++e;
  if (e == b) return {0, 0};
  return {b, e};
}

Subaperture subaperture_on(const GridAxes& axes, const Vec3& pixel, double f_number) {
  const double half = half_aperture(pixel.z, f_number);
  Subaperture s;
  std::tie(s.row_begin, s.row_end) = axis_range(axes.y, pixel.y, half);
  std::tie(s.col_begin, s.col_end) = axis_range(axes.x, pixel.x, half);
  if (s.rows() == 0 || s.cols() == 0) s = {};
  return s;
}

}  // namespace

bool in_subaperture(const Vec3& pixel, const Vec3& receiver, double f_number) {
  const double half = half_aperture(pixel.z, f_number);
  return within(receiver.x - pixel.x, half) && within(receiver.y - pixel.y, half);
}

Subaperture find_subaperture(const ReceiverGrid& grid, const Vec3& pixel, double f_number) {
  return subaperture_on(GridAxes(grid), pixel, f_number);
}

void BeamformInputs::validate() const {
  if (!iq || !receivers || !sequence) throw std::invalid_argument("beamform inputs incomplete");
  medium.validate();
  if (!(f_number > 0.0)) throw std::invalid_argument("F-number must be positive");
  if (iq->n_rx != receivers->size()) {
    throw DataError("IQ data has " + std::to_string(iq->n_rx) + " receivers, geometry has " +
                    std::to_string(receivers->size()));
  }
  if (iq->n_tx != sequence->size()) {
    throw DataError("IQ data has " + std::to_string(iq->n_tx) + " transmissions, sequence has " +
                    std::to_string(sequence->size()));
  }
  if (receivers->rows * receivers->cols != receivers->size()) {
    throw std::invalid_argument("receiver grid is not rectangular");
  }
}

void gather_pixel(const BeamformInputs& in, const Vec3& pixel, const Subaperture& sub,
                  const std::vector<double>& transmit_times, ApertureData& out) {
  const IQData& iq = *in.iq;
  const ReceiverGrid& grid = *in.receivers;
  const double inv_c = 1.0 / in.medium.sound_speed;
  const double f0 = iq.center_frequency;
  out.resize(sub.rows(), sub.cols());
  if (sub.size() == 0) return;
  out.first_row_far = std::abs(grid.position(sub.row_begin, 0).y - pixel.y) >
                      std::abs(grid.position(sub.row_end - 1, 0).y - pixel.y);
  out.first_col_far = std::abs(grid.position(0, sub.col_begin).x - pixel.x) >
                      std::abs(grid.position(0, sub.col_end - 1).x - pixel.x);
  IQTrace trace{nullptr, iq.n_t, iq.sampling_rate, iq.start_time};
  for (std::size_t r = sub.row_begin; r < sub.row_end; ++r) {
    for (std::size_t c = sub.col_begin; c < sub.col_end; ++c) {
      const std::size_t i = r * grid.cols + c;
      const double rx = norm(pixel - grid.positions[i]) * inv_c;
      cdouble acc(0.0, 0.0);
      for (std::size_t k = 0; k < iq.n_tx; ++k) {
        trace.samples = iq.trace(k, i);
        acc += sample_delayed(trace, transmit_times[k] + rx, f0);
      }
      out.at(r - sub.row_begin, c - sub.col_begin) = acc;
    }
  }
}

std::vector<BeamformedVolume> beamform(const BeamformInputs& in, const PixelGrid& grid,
                                       const std::vector<BeamformerConfig>& configs, Exec exec,
                                       std::vector<VolumeStats>* stats) {
  in.validate();
  grid.validate();
  for (const auto& cfg : configs) {
    cfg.nsi.validate();
    cfg.mv.validate();
  }
  const GridAxes axes(*in.receivers);
  const std::size_t n_pix = grid.size();
  const std::size_t n_cfg = configs.size();

  std::vector<BeamformedVolume> out(n_cfg);
  for (std::size_t b = 0; b < n_cfg; ++b) {
    out[b].grid = grid;
    out[b].kind = configs[b].kind == Beamformer::nsi ? VolumeKind::envelope : VolumeKind::complex;
    out[b].values.assign(n_pix, cdouble(0.0, 0.0));
  }
  std::vector<std::uint8_t> coverage(n_pix, 0);
  std::vector<VolumeStats> totals(n_cfg);

  struct Scratch {
    ApertureData data;
    std::vector<double> tx;
    std::vector<CombineWorkspace> ws;
    std::vector<VolumeStats> stats;
  };
  auto make_scratch = [&] {
    Scratch s;
    s.tx.resize(in.sequence->size());
    s.ws.resize(n_cfg);
    s.stats.resize(n_cfg);
    return s;
  };
  auto run = [&](std::int64_t idx, Scratch& s) {
    const auto p = static_cast<std::size_t>(idx);
    const Vec3 pixel = grid.point(p);
    const Subaperture sub = subaperture_on(axes, pixel, in.f_number);
    if (sub.size() == 0) {
      for (auto& st : s.stats) ++st.empty_pixels;
      return;
    }
    coverage[p] = 1;
    for (std::size_t k = 0; k < s.tx.size(); ++k) {
      s.tx[k] = in.sequence->transmit_time(k, pixel, in.medium);
    }
    gather_pixel(in, pixel, sub, s.tx, s.data);
    for (std::size_t b = 0; b < n_cfg; ++b) {
      out[b].values[p] = combine(configs[b], s.data, s.ws[b], s.stats[b]);
    }
  };
  auto merge = [&](const Scratch& s) {
    for (std::size_t b = 0; b < n_cfg; ++b) {
      totals[b].empty_pixels += s.stats[b].empty_pixels;
      totals[b].nsi_crops += s.stats[b].nsi_crops;
      totals[b].square_crops += s.stats[b].square_crops;
      totals[b].mv_fallbacks += s.stats[b].mv_fallbacks;
    }
  };

  const auto count = static_cast<std::int64_t>(n_pix);
  if (exec == Exec::serial) {
    Scratch s = make_scratch();
    for (std::int64_t i = 0; i < count; ++i) run(i, s);
    merge(s);
  } else {
#pragma omp parallel
    {
      Scratch s = make_scratch();
#pragma omp for schedule(dynamic, 16)
      for (std::int64_t i = 0; i < count; ++i) run(i, s);
#pragma omp critical(mxbf_beamform_stats)
      merge(s);
    }
  }
  for (auto& v : out) v.coverage = coverage;
  if (stats) *stats = std::move(totals);
  return out;
}

BeamformedVolume das(const BeamformInputs& in, const PixelGrid& grid, Exec exec,
                     VolumeStats* stats) {
  std::vector<VolumeStats> st;
  auto v = beamform(in, grid, {BeamformerConfig{}}, exec, &st);
  if (stats) *stats = st.front();
  return std::move(v.front());
}

IQData fuse_quadrants(const std::vector<IQData>& quadrants, const VirtualAperture& aperture) {
  if (quadrants.size() != aperture.quadrants().size()) {
    throw DataError("expected " + std::to_string(aperture.quadrants().size()) +
                    " quadrant datasets, got " + std::to_string(quadrants.size()));
  }
  const IQData& first = quadrants.front();
  for (std::size_t q = 0; q < quadrants.size(); ++q) {
    const IQData& d = quadrants[q];
    if (d.n_tx != first.n_tx || d.n_t != first.n_t || d.sampling_rate != first.sampling_rate ||
        d.start_time != first.start_time || d.center_frequency != first.center_frequency) {
      throw DataError("quadrant " + std::to_string(q) + " does not share the time axis of quadrant 0");
    }
    if (d.n_rx != aperture.quadrants()[q].array.blocks().size()) {
      throw DataError("quadrant " + std::to_string(q) + " receiver count does not match geometry");
    }
  }
  IQData out;
  out.n_tx = first.n_tx;
  out.n_rx = aperture.size();
  out.n_t = first.n_t;
  out.sampling_rate = first.sampling_rate;
  out.start_time = first.start_time;
  out.center_frequency = first.center_frequency;
  out.samples.resize(out.n_tx * out.n_rx * out.n_t);
  for (std::size_t k = 0; k < out.n_tx; ++k) {
    for (std::size_t i = 0; i < out.n_rx; ++i) {
      const auto& src = aperture.source(i);
      const cfloat* from = quadrants[src.quadrant].trace(k, src.block);
      std::copy(from, from + out.n_t, out.trace(k, i));
    }
  }
  return out;
}

}  // namespace mxbf
