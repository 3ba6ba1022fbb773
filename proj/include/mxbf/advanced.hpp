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

#ifndef MXBF_ADVANCED_HPP
#define MXBF_ADVANCED_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mxbf/common.hpp"

namespace mxbf {

/**
 * Compounded delayed samples of one pixel, S[r][c] row-major over the subaperture
 * (rows along elevation, columns along azimuth).
 *
 * `first_row_far` / `first_col_far` say which edge lies farther from the pixel; they decide
 * which edge an odd side drops when NSI needs even sides.
 */
struct ApertureData {
  std::vector<cdouble> s;
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool first_row_far = false;
  bool first_col_far = false;

  void resize(std::size_t r, std::size_t c) {
    rows = r;
    cols = c;
    s.resize(r * c);
  }
  cdouble& at(std::size_t r, std::size_t c) { return s[r * cols + c]; }
  const cdouble& at(std::size_t r, std::size_t c) const { return s[r * cols + c]; }
};

enum class Beamformer { das, nsi, dcf, mv };

std::string to_string(Beamformer b);
Beamformer parse_beamformer(const std::string& text);

struct NsiConfig {
  double dc_offset = 0.5;
  void validate() const;
};

struct MvConfig {
  /// Sub-array length. 0 means Q / 2 (at least 1). Values above Q are clamped to Q.
  std::size_t subarray_length = 0;
  /// Diagonal loading relative to trace(R). 0 means 1 / (10 L).
  double loading_scale = 0.0;

  std::size_t resolve_length(std::size_t q) const;
  double resolve_scale(std::size_t length) const;
  void validate() const;
};

struct BeamformerConfig {
  Beamformer kind = Beamformer::das;
  NsiConfig nsi;
  MvConfig mv;
};

/// Counters accumulated while beamforming a volume.
struct VolumeStats {
  std::size_t empty_pixels = 0;
  std::size_t nsi_crops = 0;     ///< odd-sided subapertures cropped to even
  std::size_t square_crops = 0;  ///< non-square subapertures cropped for projections
  std::size_t mv_fallbacks = 0;  ///< loaded covariance not positive definite, uniform weights
};

/// Row mask (+1 on the first Q/2 rows, -1 below) and column mask (+1 on the first Q/2
/// columns), both Q x Q row-major.
std::pair<std::vector<double>, std::vector<double>> zm_apodizations(std::size_t q);

cdouble das_combine(const ApertureData& data);

/// NSI envelope of one pixel. Odd sides are cropped to even by dropping the far edge.
double nsi_combine(const ApertureData& data, const NsiConfig& config, bool* cropped = nullptr);

struct DirectionalProjection {
  std::vector<cdouble> azimuth;    ///< P_AZ[c] = sum over rows of S[r][c]
  std::vector<cdouble> elevation;  ///< P_EL[r] = sum over columns of S[r][c]
};

/// Row and column sums over the largest centered square of the subaperture.
void project(const ApertureData& data, DirectionalProjection& out, bool* cropped = nullptr);
DirectionalProjection project(const ApertureData& data, bool* cropped = nullptr);

/// |sum P|^2 / (Q sum |P|^2); 0 for an all-zero vector.
double coherence_factor(const std::vector<cdouble>& p);

/// CF_AZ * CF_EL.
double dcf_weight(const DirectionalProjection& projection);

/// Full-subaperture DAS value weighted by the directional coherence factor.
cdouble dcf_combine(const ApertureData& data, DirectionalProjection& scratch,
                    bool* cropped = nullptr);

/// Reusable buffers for the MV solve. One per thread.
struct MvWorkspace {
  std::vector<cdouble> r;  ///< L x L row-major; lower triangle holds the Cholesky factor
  std::vector<cdouble> y;
  std::vector<cdouble> w;
};

/// MV weights for one projection vector: R^-1 a / (a^H R^-1 a) on the smoothed, loaded
/// covariance. Sets *fallback and returns a / L when the solve fails.
std::vector<cdouble> mv_weights(const std::vector<cdouble>& p, std::size_t length,
                                double loading_scale, MvWorkspace& ws, bool* fallback = nullptr);

/// Smoothed MV output for one direction, (1/K) sum_l w^H P_l.
cdouble mv_direction(const std::vector<cdouble>& p, const MvConfig& config, MvWorkspace& ws,
                     bool* fallback = nullptr);

/// sqrt(y_AZ conj(y_EL)), principal root.
cdouble mv_beamform(const DirectionalProjection& projection, const MvConfig& config,
                    MvWorkspace& ws, bool* fallback = nullptr);

/// Per-thread scratch for combine().
struct CombineWorkspace {
  DirectionalProjection projection;
  MvWorkspace mv;
};

/// Applies one beamformer to a pixel's aperture data. NSI returns a real envelope; the others
/// return complex values.
cdouble combine(const BeamformerConfig& config, const ApertureData& data, CombineWorkspace& ws,
                VolumeStats& stats);

}  // namespace mxbf

#endif  // MXBF_ADVANCED_HPP
