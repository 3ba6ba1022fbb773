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

#ifndef MXBF_METRICS_HPP
#define MXBF_METRICS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "mxbf/beamform.hpp"
#include "mxbf/common.hpp"

namespace mxbf {

enum class RoiRole { interior, background, mainlobe, sidelobe };

std::string to_string(RoiRole role);
RoiRole parse_roi_role(const std::string& text);

/// Axis-aligned box in meters, bounds inclusive.
struct Roi {
  std::string id;
  RoiRole role = RoiRole::interior;
  Vec3 min;
  Vec3 max;

  bool contains(const Vec3& p) const;
  bool overlaps(const Roi& other) const;
};

/// Envelope samples of the pixels inside a box. Throws if none fall inside.
std::vector<double> roi_samples(const std::vector<double>& envelope, const PixelGrid& grid,
                                const Roi& roi);

struct SlabSpec {
  double axial_thickness = 0.5e-3;
  double transverse_width = 1.0e-3;
};

/// Envelope averaged over an axial x elevational slab centered at (depth, elevation), as a
/// function of lateral position.
std::vector<double> extract_lateral_profile(const BeamformedVolume& volume, double depth,
                                            double elevation, const SlabSpec& slab = {});

/// Same as the lateral profile with the roles of x and y swapped.
std::vector<double> extract_elevation_profile(const BeamformedVolume& volume, double depth,
                                              double lateral, const SlabSpec& slab = {});

/// Full width at half maximum around the global peak after x64 natural-spline upsampling.
/// The result is in the units of `spacing`.
double fwhm(const std::vector<double>& profile, double spacing, std::size_t upsample = 64);

struct ContrastMetrics {
  double cr_db = 0.0;  ///< NaN when the background mean is 0
  double cnr = 0.0;
  double gcnr = 0.0;
};

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);

/// 1 - sum min(p_i, p_o) over shared histograms on [0, pooled max].
double gcnr(const std::vector<double>& inside, const std::vector<double>& outside,
            std::size_t bins = 256);

ContrastMetrics contrast_metrics(const std::vector<double>& inside,
                                 const std::vector<double>& outside);
ContrastMetrics contrast_metrics(const BeamformedVolume& volume, const Roi& interior,
                                 const Roi& background);

/// mean / std; +inf for zero variance.
double ssnr(const std::vector<double>& samples);
double ssnr(const BeamformedVolume& volume, const Roi& roi);

/// Maximum of the envelope over depth, laid out [ix][iy].
std::vector<double> max_depth_projection(const BeamformedVolume& volume);

/// 10 log10 of mean main-lobe over mean side-lobe level, on the max-over-depth projection.
/// Boxes are taken in x and y only.
double psf_contrast(const BeamformedVolume& volume, const Roi& mainlobe, const Roi& sidelobe);

/// One metric row.
struct MetricRecord {
  std::string beamformer;
  std::size_t coupling = 1;
  std::string metric;
  double value = 0.0;
  std::string roi_id;
};

struct MetricsReport {
  std::vector<MetricRecord> rows;

  std::string csv() const;
  std::string table() const;
};

}  // namespace mxbf

#endif  // MXBF_METRICS_HPP
