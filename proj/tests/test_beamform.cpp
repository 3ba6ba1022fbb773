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

#include <algorithm>
#include <cmath>

#include "mxbf/beamform.hpp"
#include "mxbf/forward.hpp"
#include "oracles.hpp"

using namespace mxbf;

namespace {

const MediumSpec kWater{1540.0};
constexpr double kF0 = 5e6;
constexpr double kFs = 40e6;

CoupledArray array8(std::size_t factor = 1) {
  return couple(build_matrix_array(8, 8, 0.3e-3, 0.3e-3, {0.275e-3, 0.275e-3}, 1), factor);
}

IQData random_iq(std::size_t n_tx, std::size_t n_rx, std::size_t n_t, std::uint64_t seed) {
  IQData iq;
  iq.n_tx = n_tx;
  iq.n_rx = n_rx;
  iq.n_t = n_t;
  iq.sampling_rate = kFs;
  iq.start_time = 0.5e-6;
  iq.center_frequency = kF0;
  const auto v = oracle::random_complex(n_tx * n_rx * n_t, seed);
  iq.samples.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) iq.samples[i] = cfloat(v[i]);
  return iq;
}

/// Direct delay-and-sum: every receiver tested against the F-number cone, every transmission summed.
oracle::cd das_oracle(const IQData& iq, const ReceiverGrid& rx, const TransmitSequence& seq,
                      const Vec3& p, double f_number) {
  const double half = p.z / (2.0 * f_number);
  oracle::cd acc = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const Vec3 e = rx.positions[i];
    if (std::abs(e.x - p.x) > half || std::abs(e.y - p.y) > half) continue;
    const double r = std::sqrt((p.x - e.x) * (p.x - e.x) + (p.y - e.y) * (p.y - e.y) + (p.z - e.z) * (p.z - e.z));
    for (std::size_t k = 0; k < iq.n_tx; ++k) {
      const double az = seq.angles[k].azimuth_deg * oracle::pi / 180;
      const double el = seq.angles[k].elevation_deg * oracle::pi / 180;
      const double ux = std::sin(az) * std::cos(el), uy = std::sin(el), uz = std::cos(az) * std::cos(el);
      const double tau = (p.x * ux + p.y * uy + p.z * uz - seq.reference_m[k]) / 1540.0 + r / 1540.0;
      const double pos = (tau - iq.start_time) * iq.sampling_rate;
      if (pos < 0 || pos > static_cast<double>(iq.n_t - 1)) continue;
      const auto n = static_cast<std::size_t>(std::floor(pos));
      const double f = pos - static_cast<double>(n);
      const cfloat* t = iq.trace(k, i);
      const oracle::cd a(t[n]);
      const oracle::cd b = n + 1 < iq.n_t ? oracle::cd(t[n + 1]) : a;
      acc += ((1 - f) * a + f * b) * std::exp(oracle::cd(0, 2 * oracle::pi * kF0 * tau));
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("two-way delay") {
  CHECK(two_way_delay({0, 0, 15.4e-3}, {0, 0, 0}, {0, 0}, kWater) == doctest::Approx(20e-6));
  CHECK(two_way_delay({3e-3, 0, 4e-3}, {0, 0, 0}, {0, 0}, kWater) ==
        doctest::Approx((4e-3 + 5e-3) / 1540.0));
  const Vec3 p{1e-3, -2e-3, 12e-3}, e{0.4e-3, 0.3e-3, 0};
  const PlaneWaveAngle a{4, -2};
  const double az = 4 * oracle::pi / 180, el = -2 * oracle::pi / 180;
  const double want = (p.x * std::sin(az) * std::cos(el) + p.y * std::sin(el) +
                       p.z * std::cos(az) * std::cos(el) + 0.1e-3) /
                          1540.0 +
                      std::hypot(p.x - e.x, p.y - e.y, p.z) / 1540.0;
  CHECK(two_way_delay(p, e, a, kWater, -0.1e-3) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("subaperture membership") {
  // F# 1.70 at 20 mm: half-width 5.88 mm.
  CHECK(in_subaperture({0, 0, 20e-3}, {5.87e-3, 0, 0}, 1.70));
  CHECK_FALSE(in_subaperture({0, 0, 20e-3}, {5.89e-3, 0, 0}, 1.70));
  CHECK(in_subaperture({1e-3, 1e-3, 20e-3}, {6.87e-3, -4.87e-3, 0}, 1.70));
  CHECK_FALSE(in_subaperture({0, 0, 20e-3}, {0, -5.9e-3, 0}, 1.70));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(in_subaperture({0, 0, 20e-3}, {0, 0, 0}, inf));
  CHECK_FALSE(in_subaperture({0, 0, 20e-3}, {1e-6, 0, 0}, inf));
  CHECK_THROWS_AS(in_subaperture({0, 0, 1e-3}, {0, 0, 0}, 0.0), std::invalid_argument);
}

TEST_CASE("subaperture matches a membership scan and shrinks with F-number") {
  const auto rx = receiver_grid(array8());
  for (const Vec3 p : {Vec3{0, 0, 2e-3}, Vec3{0.7e-3, -0.4e-3, 1.3e-3}, Vec3{-1.5e-3, 1.2e-3, 0.9e-3}}) {
    Subaperture prev{0, rx.rows, 0, rx.cols};
    for (double f : {0.3, 0.6, 1.0, 2.0, 8.0}) {
      const auto s = find_subaperture(rx, p, f);
      for (std::size_t r = 0; r < rx.rows; ++r)
        for (std::size_t c = 0; c < rx.cols; ++c) {
          const bool inside = r >= s.row_begin && r < s.row_end && c >= s.col_begin && c < s.col_end;
          CHECK(inside == in_subaperture(p, rx.position(r, c), f));
        }
      if (s.size() > 0) {
        CHECK(s.row_begin >= prev.row_begin);
        CHECK(s.row_end <= prev.row_end);
        CHECK(s.col_begin >= prev.col_begin);
        CHECK(s.col_end <= prev.col_end);
      }
      CHECK(s.size() <= prev.size());
      prev = s;
    }
  }
}

TEST_CASE("DAS matches the brute-force oracle") {
  for (std::size_t factor : {1u, 2u}) {
    const auto arr = array8(factor);
    const auto rx = receiver_grid(arr);
    const auto seq = build_transmit_sequence(arr, {{0, 0, 0}}, star_pattern(), kF0, {}, kWater);
    const auto iq = random_iq(seq.size(), rx.size(), 200, 17 + factor);
    const BeamformInputs in{&iq, &rx, &seq, kWater, 0.83};
    PixelGrid g;
    g.origin = {-1.03e-3, -0.97e-3, 1.01e-3};
    g.spacing = {0.41e-3, 0.37e-3, 0.29e-3};
    g.nx = 6;
    g.ny = 6;
    g.nz = 5;
    VolumeStats st;
    const auto v = das(in, g, Exec::serial, &st);
    std::size_t covered = 0;
    for (std::size_t p = 0; p < g.size(); ++p) {
      const auto want = das_oracle(iq, rx, seq, g.point(p), 0.83);
      CHECK(oracle::rel_err(v.values[p], want) < 1e-9);
      covered += v.coverage[p];
    }
    CHECK(covered + st.empty_pixels == g.size());
  }
}

TEST_CASE("DAS is linear, zero on zero data and deterministic across execution modes") {
  const auto arr = array8();
  const auto rx = receiver_grid(arr);
  const auto seq = build_transmit_sequence(arr, {{0, 0, 0}}, star_pattern(), kF0, {}, kWater);
  const auto a = random_iq(seq.size(), rx.size(), 160, 1);
  const auto b = random_iq(seq.size(), rx.size(), 160, 2);
  auto ab = a;
  for (std::size_t i = 0; i < ab.samples.size(); ++i) ab.samples[i] = 2.0f * a.samples[i] - b.samples[i];
  auto zero = a;
  std::fill(zero.samples.begin(), zero.samples.end(), cfloat(0, 0));
  const auto g = PixelGrid::covering({-1e-3, -1e-3, 0.8e-3}, {1e-3, 1e-3, 1.6e-3}, {0.2e-3, 0.25e-3, 0.2e-3});

  auto run = [&](const IQData& d, Exec e) { return das(BeamformInputs{&d, &rx, &seq, kWater, 0.7}, g, e); };
  const auto va = run(a, Exec::serial), vb = run(b, Exec::serial), vab = run(ab, Exec::serial);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const cdouble want = 2.0 * va.values[p] - vb.values[p];
    CHECK(std::abs(vab.values[p] - want) <= 1e-5 * (1.0 + std::abs(want)));
  }
  for (const auto& v : run(zero, Exec::parallel).values) CHECK(v == cdouble(0, 0));

  std::vector<BeamformerConfig> all(4);
  all[1].kind = Beamformer::nsi;
  all[2].kind = Beamformer::dcf;
  all[3].kind = Beamformer::mv;
  const BeamformInputs in{&a, &rx, &seq, kWater, 0.7};
  const auto s = beamform(in, g, all, Exec::serial);
  const auto p = beamform(in, g, all, Exec::parallel);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(s[i].values == p[i].values);
    CHECK(s[i].coverage == p[i].coverage);
  }
  CHECK(s[1].kind == VolumeKind::envelope);
  for (const auto& v : s[1].values) {
    CHECK(v.imag() == 0.0);
    CHECK(v.real() >= 0.0);
  }
}

TEST_CASE("beamformed point target peaks at the scatterer") {
  const auto arr = couple(build_matrix_array(16, 16, 0.3e-3, 0.3e-3, {0.275e-3, 0.275e-3}, 1), 1);
  const auto rx = receiver_grid(arr);
  const auto seq = build_transmit_sequence(arr, {{0, 0, 0}}, star_pattern(), kF0, {}, kWater);
  const Vec3 target{0.4e-3, -0.2e-3, 5e-3};
  const auto rf = synthesize_rf(make_wire_phantom({target}), arr, seq, kWater, kFs);
  const auto iq = demodulate(rf);
  const auto g = PixelGrid::covering({-0.6e-3, -1.2e-3, 4.4e-3}, {1.4e-3, 0.8e-3, 5.6e-3}, {0.1e-3, 0.1e-3, 0.05e-3});
  std::vector<BeamformerConfig> all(4);
  all[1].kind = Beamformer::nsi;
  all[2].kind = Beamformer::dcf;
  all[3].kind = Beamformer::mv;
  const auto vols = beamform(BeamformInputs{&iq, &rx, &seq, kWater, 1.0}, g, all);
  for (const auto& v : vols) {
    const auto env = v.envelope();
    const auto best = static_cast<std::size_t>(std::max_element(env.begin(), env.end()) - env.begin());
    const Vec3 p = v.grid.point(best);
    CHECK(std::abs(p.x - target.x) <= 0.1e-3 + 1e-9);
    CHECK(std::abs(p.y - target.y) <= 0.1e-3 + 1e-9);
    CHECK(std::abs(p.z - target.z) <= 0.05e-3 + 1e-9);
  }
}

TEST_CASE("inputs are validated") {
  const auto arr = array8();
  const auto rx = receiver_grid(arr);
  const auto seq = build_transmit_sequence(arr, {{0, 0, 0}}, star_pattern(), kF0, {}, kWater);
  const auto iq = random_iq(seq.size(), rx.size() - 1, 10, 3);
  PixelGrid g;
  g.nx = g.ny = g.nz = 1;
  g.origin = {0, 0, 1e-3};
  CHECK_THROWS_AS(das(BeamformInputs{&iq, &rx, &seq, kWater, 1.0}, g), DataError);
  const auto ok = random_iq(seq.size(), rx.size(), 10, 3);
  CHECK_THROWS_AS(das(BeamformInputs{&ok, &rx, &seq, kWater, 0.0}, g), std::invalid_argument);
  PixelGrid empty;
  CHECK_THROWS_AS(das(BeamformInputs{&ok, &rx, &seq, kWater, 1.0}, empty), std::invalid_argument);
}

TEST_CASE("quadrant fusion") {
  const auto arr = couple(build_matrix_array(4, 4, 0.3e-3, 0.3e-3, {0.275e-3, 0.275e-3}, 1), 2);
  const auto va = tile_virtual_aperture(arr);
  std::vector<IQData> q;
  for (std::size_t i = 0; i < 4; ++i) q.push_back(random_iq(3, arr.blocks().size(), 20, 40 + i));
  const auto fused = fuse_quadrants(q, va);
  REQUIRE(fused.n_rx == va.size());
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < fused.n_rx; ++i) {
      const auto& s = va.source(i);
      CHECK(std::equal(fused.trace(k, i), fused.trace(k, i) + 20, q[s.quadrant].trace(k, s.block)));
    }
  auto three = q;
  three.pop_back();
  CHECK_THROWS_AS(fuse_quadrants(three, va), DataError);
  auto shifted = q;
  shifted[2].start_time += 1e-7;
  CHECK_THROWS_AS(fuse_quadrants(shifted, va), DataError);
}
