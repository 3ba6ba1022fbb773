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

#include "mxbf/forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mxbf {

std::string to_string(PhantomKind kind) {
  switch (kind) {
    case PhantomKind::psf: return "psf";
    case PhantomKind::wire: return "wire";
    case PhantomKind::cyst: return "cyst";
  }
  return "unknown";
}

PhantomKind parse_phantom_kind(const std::string& text) {
  if (text == "psf") return PhantomKind::psf;
  if (text == "wire") return PhantomKind::wire;
  if (text == "cyst") return PhantomKind::cyst;
  throw std::invalid_argument("unknown phantom kind `" + text + "`");
}

PhantomRng::PhantomRng(std::uint64_t seed) : engine_(seed) {}

double PhantomRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double PhantomRng::rayleigh_unit_mean() {
  const double sigma = std::sqrt(2.0 / kPi);
  return sigma * std::sqrt(-2.0 * std::log1p(-uniform()));
}

Phantom make_psf_phantom(double depth) {
  if (!(depth > 0.0)) throw std::invalid_argument("point target depth must be positive");
  Phantom p;
  p.descriptor = PhantomKind::psf;
  p.scatterers.push_back({{0.0, 0.0, depth}, 1.0});
  return p;
}

Phantom make_wire_phantom(const std::vector<Vec3>& wires) {
  Phantom p;
  p.descriptor = PhantomKind::wire;
  for (const auto& w : wires) {
    if (!(w.z > 0.0)) throw std::invalid_argument("wire targets must lie in front of the array");
    p.scatterers.push_back({w, 1.0});
  }
  return p;
}

Phantom make_cyst_phantom(const CystPhantomSpec& spec) {
  const Vec3 lo = spec.extent_min;
  const Vec3 hi = spec.extent_max;
  if (!(hi.x > lo.x) || !(hi.y > lo.y) || !(hi.z > lo.z)) {
    throw std::invalid_argument("phantom extent must have positive size on every axis");
  }
  if (!(lo.z > 0.0)) throw std::invalid_argument("phantom must lie in front of the array");
  if (spec.scatterers_per_mm3 < 0.0) throw std::invalid_argument("density must be non-negative");
  if (spec.cyst_radius < 0.0) throw std::invalid_argument("cyst radius must be non-negative");
  for (const auto& c : spec.cyst_centers) {
    if (c.x < lo.x || c.x > hi.x || c.y < lo.y || c.y > hi.y || c.z < lo.z || c.z > hi.z) {
      throw std::invalid_argument("cyst center lies outside the phantom extent");
    }
  }

  Phantom p;
  p.descriptor = PhantomKind::cyst;
  p.rng_seed = spec.seed;
  const Vec3 size = hi - lo;
  const double volume_mm3 = size.x * size.y * size.z * 1e9;
  const auto count = static_cast<std::size_t>(std::llround(spec.scatterers_per_mm3 * volume_mm3));
  PhantomRng rng(spec.seed);
  const double r2 = spec.cyst_radius * spec.cyst_radius;
  p.scatterers.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vec3 pos;
    pos.x = lo.x + size.x * rng.uniform();
    pos.y = lo.y + size.y * rng.uniform();
    pos.z = lo.z + size.z * rng.uniform();
    const double amp = rng.rayleigh_unit_mean();
    const bool inside = std::any_of(spec.cyst_centers.begin(), spec.cyst_centers.end(),
                                    [&](const Vec3& c) {
                                      const Vec3 d = pos - c;
                                      return dot(d, d) <= r2;
                                    });
    if (!inside) p.scatterers.push_back({pos, amp});
  }
  return p;
}

namespace {

void check_inputs(const TransmitSequence& sequence, const MediumSpec& medium,
                  double sampling_rate) {
  medium.validate();
  if (sequence.angles.empty()) throw std::invalid_argument("transmit sequence is empty");
  if (!(sampling_rate >= 4.0 * sequence.center_frequency)) {
    throw std::invalid_argument("sampling rate must be at least four times the center frequency");
  }
}

}  // namespace

TimeWindow synthesis_window(const Phantom& phantom, const CoupledArray& array,
                            const std::vector<Vec3>& offsets, const TransmitSequence& sequence,
                            const MediumSpec& medium, double sampling_rate) {
  check_inputs(sequence, medium, sampling_rate);
  if (phantom.scatterers.empty()) return {0.0, 1};
  double t_min = std::numeric_limits<double>::infinity();
  double t_max = -std::numeric_limits<double>::infinity();
  const auto& elems = array.base().positions();
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    for (const auto& s : phantom.scatterers) {
      const double tx = sequence.transmit_time(k, s.position, medium);
      for (const auto& off : offsets) {
        for (const auto& e : elems) {
          const double t = tx + norm(s.position - (e + off)) / medium.sound_speed;
          t_min = std::min(t_min, t);
          t_max = std::max(t_max, t);
        }
      }
    }
  }
  const double margin = 5.0 * sequence.pulse.sigma(sequence.center_frequency) + 2.0 / sampling_rate;
  const double start = std::floor((t_min - margin) * sampling_rate) / sampling_rate;
  const auto n = static_cast<std::size_t>(std::ceil((t_max + margin - start) * sampling_rate)) + 1;
  return {start, n};
}

void deposit_pulse(double* trace, std::size_t n_t, double start_time, double sampling_rate,
                   double arrival, double amplitude, double center_frequency, double sigma) {
  const double half = 5.0 * sigma;
  const double lo = std::ceil((arrival - half - start_time) * sampling_rate);
  const double hi = std::floor((arrival + half - start_time) * sampling_rate);
  if (hi < 0.0 || lo > static_cast<double>(n_t) - 1.0) return;
  const auto n0 = static_cast<std::size_t>(std::max(lo, 0.0));
  const auto n1 = static_cast<std::size_t>(std::min(hi, static_cast<double>(n_t) - 1.0));

  const double dt = 1.0 / sampling_rate;
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  const double t0 = start_time + static_cast<double>(n0) * dt - arrival;
  // Gaussian by ratio recurrence, carrier by complex rotation.
  double g = std::exp(-t0 * t0 * inv2s2);
  double ratio = std::exp(-(2.0 * t0 * dt + dt * dt) * inv2s2);
  const double ratio_step = std::exp(-2.0 * dt * dt * inv2s2);
  const double w = 2.0 * kPi * center_frequency;
  cdouble phase = std::polar(1.0, w * t0);
  const cdouble rot = std::polar(1.0, w * dt);
  for (std::size_t n = n0; n <= n1; ++n) {
    trace[n] += amplitude * g * phase.real();
    g *= ratio;
    ratio *= ratio_step;
    phase *= rot;
  }
}

namespace {

struct SynthesisContext {
  const Phantom& phantom;
  const CoupledArray& array;
  const Vec3& offset;
  const TransmitSequence& sequence;
  const MediumSpec& medium;
  double sampling_rate;
  TimeWindow window;
  double wavelength;
  double sigma;
  std::vector<double> tx_amplitude;  // per transmission
};

void element_trace(const SynthesisContext& ctx, std::size_t k, std::size_t element,
                   double* out) {
  std::fill(out, out + ctx.window.n_t, 0.0);
  const Vec3 e = ctx.array.base().positions()[element] + ctx.offset;
  const ElementSpec& spec = ctx.array.base().element();
  const double c = ctx.medium.sound_speed;
  for (const auto& s : ctx.phantom.scatterers) {
    const Vec3 d = s.position - e;
    const double r = norm(d);
    if (r == 0.0) continue;
    const double rx = element_directivity(spec, ctx.wavelength, d);
    const double amp = s.reflectivity * ctx.tx_amplitude[k] * rx / r;
    const double t = ctx.sequence.transmit_time(k, s.position, ctx.medium) + r / c;
    deposit_pulse(out, ctx.window.n_t, ctx.window.start_time, ctx.sampling_rate, t, amp,
                  ctx.sequence.center_frequency, ctx.sigma);
  }
}

SynthesisContext make_context(const Phantom& phantom, const CoupledArray& array,
                              const Vec3& offset, const TransmitSequence& sequence,
                              const MediumSpec& medium, double sampling_rate,
                              const TimeWindow& window) {
  check_inputs(sequence, medium, sampling_rate);
  SynthesisContext ctx{phantom, array, offset, sequence, medium, sampling_rate, window,
                       medium.wavelength(sequence.center_frequency),
                       sequence.pulse.sigma(sequence.center_frequency), {}};
  const BlockShape shape = array.shape();
  for (const auto& a : sequence.angles) {
    ctx.tx_amplitude.push_back(block_directivity(shape, ctx.wavelength, a.radians()));
  }
  return ctx;
}

}  // namespace

std::vector<double> synthesize_element_trace(const Phantom& phantom, const CoupledArray& array,
                                             const Vec3& offset, std::size_t transmission,
                                             std::size_t element, const TransmitSequence& sequence,
                                             const MediumSpec& medium, double sampling_rate,
                                             const TimeWindow& window) {
  const auto ctx = make_context(phantom, array, offset, sequence, medium, sampling_rate, window);
  std::vector<double> out(window.n_t);
  element_trace(ctx, transmission, element, out.data());
  return out;
}

ChannelData synthesize_rf(const Phantom& phantom, const CoupledArray& array, const Vec3& offset,
                          const TransmitSequence& sequence, const MediumSpec& medium,
                          double sampling_rate, const TimeWindow& window, Exec exec) {
  const auto ctx = make_context(phantom, array, offset, sequence, medium, sampling_rate, window);
  ChannelData data;
  data.n_tx = sequence.size();
  data.n_rx = array.blocks().size();
  data.n_t = window.n_t;
  data.sampling_rate = sampling_rate;
  data.start_time = window.start_time;
  data.center_frequency = sequence.center_frequency;
  data.samples.assign(data.n_tx * data.n_rx * data.n_t, 0.0f);
  if (phantom.scatterers.empty()) return data;

  const auto pairs = static_cast<std::int64_t>(data.n_tx * data.n_rx);
  auto run = [&](std::int64_t idx, std::vector<double>& member, std::vector<double>& sum) {
    const auto k = static_cast<std::size_t>(idx) / data.n_rx;
    const auto b = static_cast<std::size_t>(idx) % data.n_rx;
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::size_t m : array.blocks()[b].members) {
      element_trace(ctx, k, m, member.data());
      for (std::size_t n = 0; n < data.n_t; ++n) sum[n] += member[n];
    }
    float* dst = data.trace(k, b);
    for (std::size_t n = 0; n < data.n_t; ++n) dst[n] = static_cast<float>(sum[n]);
  };

  if (exec == Exec::serial) {
    std::vector<double> member(data.n_t), sum(data.n_t);
    for (std::int64_t idx = 0; idx < pairs; ++idx) run(idx, member, sum);
  } else {
#pragma omp parallel
    {
      std::vector<double> member(data.n_t), sum(data.n_t);
#pragma omp for schedule(dynamic, 4)
      for (std::int64_t idx = 0; idx < pairs; ++idx) run(idx, member, sum);
    }
  }
  return data;
}

ChannelData synthesize_rf(const Phantom& phantom, const CoupledArray& array,
                          const TransmitSequence& sequence, const MediumSpec& medium,
                          double sampling_rate, Exec exec) {
  const Vec3 origin{};
  const TimeWindow window =
      synthesis_window(phantom, array, {origin}, sequence, medium, sampling_rate);
  return synthesize_rf(phantom, array, origin, sequence, medium, sampling_rate, window, exec);
}

std::vector<ChannelData> synthesize_rf(const Phantom& phantom, const VirtualAperture& aperture,
                                       const TransmitSequence& sequence, const MediumSpec& medium,
                                       double sampling_rate, Exec exec) {
  std::vector<Vec3> offsets;
  for (const auto& q : aperture.quadrants()) offsets.push_back(q.offset);
  const CoupledArray& array = aperture.quadrants().front().array;
  const TimeWindow window =
      synthesis_window(phantom, array, offsets, sequence, medium, sampling_rate);
  std::vector<ChannelData> out;
  for (const auto& q : aperture.quadrants()) {
    out.push_back(
        synthesize_rf(phantom, q.array, q.offset, sequence, medium, sampling_rate, window, exec));
  }
  return out;
}

}  // namespace mxbf
