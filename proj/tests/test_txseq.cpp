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

#include "mxbf/txseq.hpp"

using namespace mxbf;

namespace {

const MediumSpec kWater{1540.0};

bool contains(const std::vector<PlaneWaveAngle>& v, PlaneWaveAngle a) {
  return std::any_of(v.begin(), v.end(), [&](const PlaneWaveAngle& b) {
    return std::abs(a.azimuth_deg - b.azimuth_deg) < 1e-12 &&
           std::abs(a.elevation_deg - b.elevation_deg) < 1e-12;
  });
}

}  // namespace

TEST_CASE("default star pattern has thirteen angles in the expected places") {
  const auto s = star_pattern();
  REQUIRE(s.size() == 13);
  CHECK(contains(s, {0, 0}));
  for (double a : {2.0, 4.0}) {
    CHECK(contains(s, {a, 0}));
    CHECK(contains(s, {-a, 0}));
    CHECK(contains(s, {0, a}));
    CHECK(contains(s, {0, -a}));
  }
  for (double x : {-2.0, 2.0})
    for (double y : {-2.0, 2.0}) CHECK(contains(s, {x, y}));
  double diag = 0.0, axis = 0.0;
  for (const auto& a : s) {
    const double m = steering_magnitude_deg(a);
    if (a.azimuth_deg != 0 && a.elevation_deg != 0) diag = std::max(diag, m);
    else axis = std::max(axis, m);
  }
  CHECK(diag == doctest::Approx(2.83).epsilon(0.002));
  CHECK(diag <= 3.0);
  CHECK(axis == doctest::Approx(4.0));
}

TEST_CASE("star pattern is closed under negation and unique") {
  for (auto [ax, dg] : {std::pair{4.0, 3.0}, {6.0, 1.0}, {1.0, 10.0}}) {
    const auto s = star_pattern(ax, 2, dg);
    CHECK(s.size() == 13);
    for (const auto& a : s) CHECK(contains(s, {-a.azimuth_deg, -a.elevation_deg}));
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) CHECK_FALSE(s[i] == s[j]);
  }
}

TEST_CASE("degenerate star patterns are rejected") {
  CHECK_THROWS_AS(star_pattern(0.0, 2, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(star_pattern(4.0, 3, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(star_pattern(4.0, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(star_pattern(95.0, 2, 3.0), std::invalid_argument);
}

TEST_CASE("plane wave delays") {
  const std::vector<Vec3> two{{0, 0, 0}, {10e-3, 0, 0}};
  const auto broadside = plane_wave_delays(two, {0, 0}, kWater);
  CHECK(broadside[0] == 0.0);
  CHECK(broadside[1] == 0.0);

  const double az = std::asin(0.0770) * 180.0 / kPi;
  const auto d = plane_wave_delays(two, {az, 0}, kWater);
  CHECK(d[1] - d[0] == doctest::Approx(0.5e-6).epsilon(1e-9));
  CHECK(*std::min_element(d.begin(), d.end()) == 0.0);

  const auto neg = plane_wave_delays(two, {-az, 0}, kWater);
  CHECK(neg[0] == doctest::Approx(0.5e-6).epsilon(1e-9));
  CHECK(neg[1] == 0.0);

  CHECK_THROWS_AS(plane_wave_delays(two, {90.0, 0}, kWater), std::invalid_argument);
  CHECK_THROWS_AS(plane_wave_delays(two, {0, -90.0}, kWater), std::invalid_argument);
}

TEST_CASE("broadside delays vanish for any geometry") {
  const auto g = build_matrix_array(16, 8, 0.3e-3, 0.4e-3, {0.25e-3, 0.3e-3}, 2);
  for (std::size_t f : {1u, 2u}) {
    const auto seq = build_transmit_sequence(couple(g, f), {{0, 0, 0}, {5e-3, 3e-3, 0}},
                                             {{0, 0}}, 5e6, {}, kWater);
    for (double d : seq.delays[0]) CHECK(d == 0.0);
    CHECK(seq.reference_m[0] == 0.0);
  }
}

TEST_CASE("coupled delay is the mean of member delays") {
  CHECK(coupled_delays({0, 0, 0, 0}) == 0.0);
  CHECK(coupled_delays({10e-9, 20e-9, 30e-9, 40e-9}) == doctest::Approx(25e-9));
  CHECK(coupled_delays({7e-9}) == 7e-9);
  CHECK_THROWS_AS(coupled_delays({}), std::invalid_argument);
}

TEST_CASE("averaged block delay equals the plane-wave delay of the block centroid") {
  const auto g = build_matrix_array(8, 8, 0.3e-3, 0.3e-3, {0.275e-3, 0.275e-3}, 1);
  const auto c = couple(g, 4);
  const std::vector<Vec3> offsets{{-1.2e-3, -1.2e-3, 0}, {1.2e-3, -1.2e-3, 0}};
  const auto seq = build_transmit_sequence(c, offsets, star_pattern(), 8e6, {}, kWater);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const Vec3 u = seq.angles[k].radians().unit();
    std::vector<double> centroid_delay;
    for (const auto& off : offsets)
      for (const auto& b : c.blocks()) {
        const Vec3 p = b.centroid + off;
        centroid_delay.push_back((p.x * u.x + p.y * u.y - seq.reference_m[k]) / 1540.0);
      }
    REQUIRE(seq.delays[k].size() == centroid_delay.size());
    for (std::size_t e = 0; e < centroid_delay.size(); ++e) {
      CHECK(std::abs(seq.delays[k][e] - centroid_delay[e]) < 1e-18);
    }
  }
}

TEST_CASE("transmit time is zero where the plane wave leaves the leading element") {
  const auto g = build_matrix_array(4, 4, 1e-3, 1e-3, {0.9e-3, 0.9e-3}, 1);
  const auto seq = build_transmit_sequence(couple(g, 1), {{0, 0, 0}}, {{3, -2}}, 5e6, {}, kWater);
  const Vec3 u = seq.angles[0].radians().unit();
  double tmin = 1.0;
  for (const auto& p : g.positions()) {
    const double t = seq.transmit_time(0, p, kWater);
    CHECK(t >= -1e-18);
    tmin = std::min(tmin, t);
  }
  CHECK(std::abs(tmin) < 1e-18);
  const Vec3 p{1e-3, 2e-3, 20e-3};
  CHECK(seq.transmit_time(0, p, kWater) ==
        doctest::Approx((dot(p, u) - seq.reference_m[0]) / 1540.0).epsilon(1e-14));
}

TEST_CASE("pulse sigma sets the envelope FWHM in cycles") {
  const PulseSpec p{3.0};
  const double f0 = 5e6;
  CHECK(2.0 * std::sqrt(2.0 * std::log(2.0)) * p.sigma(f0) == doctest::Approx(3.0 / f0));
}

TEST_CASE("csv exports") {
  const auto a = angles_csv(star_pattern());
  CHECK(a.rfind("angle_index,azimuth_deg,elevation_deg\n", 0) == 0);
  CHECK(std::count(a.begin(), a.end(), '\n') == 14);
  const auto g = build_matrix_array(2, 2, 1e-3, 1e-3, {0.9e-3, 0.9e-3}, 1);
  const auto seq = build_transmit_sequence(couple(g, 1), {{0, 0, 0}}, star_pattern(), 5e6, {}, kWater);
  const auto d = delays_csv(seq);
  CHECK(d.rfind("angle_index,emitter_index,delay_s\n", 0) == 0);
  CHECK(std::count(d.begin(), d.end(), '\n') == 1 + 13 * 4);
}
