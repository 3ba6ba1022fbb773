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

#ifndef MXBF_BENCH_HPP
#define MXBF_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mxbf/advanced.hpp"
#include "mxbf/common.hpp"

namespace mxbf {

/**
 * Timing of the per-pixel combination stage of each beamformer.
 *
 * Every beamformer shares the same delay-and-gather front end, so the timed region starts
 * from already delayed Q x Q aperture data. A small pool of random apertures is cycled so the
 * working set stays in cache and memory traffic does not mask the arithmetic.
 */
struct BenchConfig {
  std::vector<std::size_t> sizes{64, 256, 1024};  ///< element counts N, perfect squares
  std::size_t pixels = 4096;                      ///< fixed pixel count per volume
  std::size_t repeats = 7;                        ///< minimum over repeats is reported
  std::size_t pool = 16;
  std::uint64_t seed = 1;
  Exec exec = Exec::serial;
  std::vector<BeamformerConfig> beamformers;

  void validate() const;
};

struct BenchRecord {
  std::string beamformer;
  std::size_t elements = 0;
  double seconds_per_volume = 0.0;
  double seconds_per_pixel = 0.0;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::map<std::string, double> slopes;  ///< log-log least-squares exponent per beamformer

  std::string csv() const;
  std::string slopes_csv() const;
  double seconds(const std::string& beamformer, std::size_t elements) const;
};

/// Least-squares slope of log(t) against log(n). Needs at least three points.
double loglog_slope(const std::vector<double>& n, const std::vector<double>& t);

BenchResult run_bench(const BenchConfig& config);

}  // namespace mxbf

#endif  // MXBF_BENCH_HPP
