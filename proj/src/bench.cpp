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

#include "mxbf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace mxbf {

void BenchConfig::validate() const {
  if (sizes.size() < 3) throw std::invalid_argument("bench needs at least three element counts");
  for (std::size_t n : sizes) {
    const auto q = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (n == 0 || q * q != n) throw std::invalid_argument("bench element counts must be perfect squares");
  }
  if (pixels == 0 || repeats == 0 || pool == 0) {
    throw std::invalid_argument("bench pixels, repeats and pool must be positive");
  }
  if (beamformers.empty()) throw std::invalid_argument("bench needs at least one beamformer");
}

double loglog_slope(const std::vector<double>& n, const std::vector<double>& t) {
  if (n.size() != t.size() || n.size() < 3) {
    throw std::invalid_argument("slope fit needs at least three (N, time) points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(t[i] > 0.0)) throw std::invalid_argument("slope fit needs positive values");
    const double x = std::log(n[i]);
    const double y = std::log(t[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(n.size());
  const double den = m * sxx - sx * sx;
  if (!(den > 1e-12 * m * sxx)) throw std::invalid_argument("slope fit needs distinct element counts");
  return (m * sxy - sx * sy) / den;
}

namespace {

std::vector<ApertureData> make_pool(std::size_t q, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<ApertureData> pool(count);
  for (auto& a : pool) {
    a.resize(q, q);
    for (auto& v : a.s) v = {normal(rng), normal(rng)};
  }
  return pool;
}

double time_volume(const BeamformerConfig& cfg, const std::vector<ApertureData>& pool,
                   std::size_t pixels, Exec exec) {
  const auto count = static_cast<std::int64_t>(pixels);
  double sink = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  if (exec == Exec::serial) {
    CombineWorkspace ws;
    VolumeStats stats;
    for (std::int64_t p = 0; p < count; ++p) {
      sink += std::abs(combine(cfg, pool[static_cast<std::size_t>(p) % pool.size()], ws, stats));
    }
  } else {
#pragma omp parallel reduction(+ : sink)
    {
      CombineWorkspace ws;
      VolumeStats stats;
#pragma omp for schedule(static)
      for (std::int64_t p = 0; p < count; ++p) {
        sink += std::abs(combine(cfg, pool[static_cast<std::size_t>(p) % pool.size()], ws, stats));
      }
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  volatile double keep = sink;
  (void)keep;
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

BenchResult run_bench(const BenchConfig& config) {
  config.validate();
  BenchResult result;
  for (std::size_t n : config.sizes) {
    const auto q = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    const auto pool = make_pool(q, config.pool, config.seed + n);
    for (const auto& bf : config.beamformers) {
      time_volume(bf, pool, std::min<std::size_t>(config.pixels, 256), config.exec);  // warm-up
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < config.repeats; ++r) {
        best = std::min(best, time_volume(bf, pool, config.pixels, config.exec));
      }
      result.records.push_back(
          {to_string(bf.kind), n, best, best / static_cast<double>(config.pixels)});
    }
  }
  for (const auto& bf : config.beamformers) {
    std::vector<double> ns, ts;
    for (const auto& r : result.records) {
      if (r.beamformer == to_string(bf.kind)) {
        ns.push_back(static_cast<double>(r.elements));
        ts.push_back(r.seconds_per_volume);
      }
    }
    result.slopes[to_string(bf.kind)] = loglog_slope(ns, ts);
  }
  return result;
}

std::string BenchResult::csv() const {
  std::ostringstream out;
  out.precision(8);
  out << "beamformer,elements,seconds_per_volume,seconds_per_pixel\n";
  for (const auto& r : records) {
    out << r.beamformer << ',' << r.elements << ',' << r.seconds_per_volume << ','
        << r.seconds_per_pixel << '\n';
  }
  return out.str();
}

std::string BenchResult::slopes_csv() const {
  std::ostringstream out;
  out.precision(6);
  out << "beamformer,loglog_slope\n";
  for (const auto& [name, s] : slopes) out << name << ',' << s << '\n';
  return out.str();
}

double BenchResult::seconds(const std::string& beamformer, std::size_t elements) const {
  for (const auto& r : records) {
    if (r.beamformer == beamformer && r.elements == elements) return r.seconds_per_volume;
  }
  throw std::out_of_range("no bench record for " + beamformer + " at N=" + std::to_string(elements));
}

}  // namespace mxbf
