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

#include <cmath>

#include "mxbf/bench.hpp"

using namespace mxbf;

TEST_CASE("log-log slope recovers power laws") {
  const std::vector<double> n{64, 256, 1024, 4096};
  for (double k : {0.5, 1.0, 1.5}) {
    std::vector<double> t;
    for (double x : n) t.push_back(3e-4 * std::pow(x, k));
    CHECK(loglog_slope(n, t) == doctest::Approx(k).epsilon(1e-12));
  }
  CHECK_THROWS_AS(loglog_slope({1, 2}, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(loglog_slope({1, 2, 3}, {1, 0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(loglog_slope({4, 4, 4}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("bench configuration is validated") {
  BenchConfig c;
  c.beamformers.resize(1);
  CHECK_NOTHROW(c.validate());
  c.sizes = {64, 256};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.sizes = {64, 200, 1024};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.sizes = {16, 64, 256};
  c.repeats = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.repeats = 1;
  c.beamformers.clear();
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("bench produces one record per size and beamformer") {
  BenchConfig c;
  c.sizes = {16, 64, 256};
  c.pixels = 64;
  c.repeats = 2;
  c.pool = 4;
  c.beamformers.resize(2);
  c.beamformers[1].kind = Beamformer::nsi;
  const auto r = run_bench(c);
  CHECK(r.records.size() == 6);
  CHECK(r.slopes.size() == 2);
  for (const auto& rec : r.records) {
    CHECK(rec.seconds_per_volume > 0.0);
    CHECK(rec.seconds_per_pixel == doctest::Approx(rec.seconds_per_volume / 64));
  }
  CHECK(r.seconds("nsi", 64) > 0.0);
  CHECK_THROWS_AS(r.seconds("mv", 64), std::out_of_range);
  const auto csv = r.csv();
  CHECK(csv.rfind("beamformer,elements,seconds_per_volume,seconds_per_pixel\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(r.slopes_csv().rfind("beamformer,loglog_slope\n", 0) == 0);
}
