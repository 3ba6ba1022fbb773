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

#include "mxbf/advanced.hpp"

#include <algorithm>
#include <cmath>

namespace mxbf {

std::string to_string(Beamformer b) {
  switch (b) {
    case Beamformer::das: return "das";
    case Beamformer::nsi: return "nsi";
    case Beamformer::dcf: return "dcf";
    case Beamformer::mv: return "mv";
  }
  return "unknown";
}

Beamformer parse_beamformer(const std::string& text) {
  if (text == "das") return Beamformer::das;
  if (text == "nsi") return Beamformer::nsi;
  if (text == "dcf") return Beamformer::dcf;
  if (text == "mv") return Beamformer::mv;
  throw std::invalid_argument("unknown beamformer `" + text + "` (expected das, nsi, dcf or mv)");
}

void NsiConfig::validate() const {
  if (!(dc_offset > 0.0) || !(dc_offset <= 1.0)) {
    throw std::invalid_argument("NSI DC offset must lie in (0, 1]");
  }
}

std::size_t MvConfig::resolve_length(std::size_t q) const {
  if (q == 0) return 0;
  const std::size_t l = subarray_length == 0 ? q / 2 : subarray_length;
  return std::clamp<std::size_t>(l, 1, q);
}

double MvConfig::resolve_scale(std::size_t length) const {
  return loading_scale > 0.0 ? loading_scale : 1.0 / (10.0 * static_cast<double>(length));
}

void MvConfig::validate() const {
  if (loading_scale < 0.0 || !std::isfinite(loading_scale)) {
    throw std::invalid_argument("MV loading scale must be non-negative");
  }
}

std::pair<std::vector<double>, std::vector<double>> zm_apodizations(std::size_t q) {
  if (q == 0 || q % 2 != 0) throw std::invalid_argument("ZM apodization needs an even size");
  std::vector<double> row(q * q), col(q * q);
  for (std::size_t r = 0; r < q; ++r) {
    for (std::size_t c = 0; c < q; ++c) {
      row[r * q + c] = r < q / 2 ? 1.0 : -1.0;
      col[r * q + c] = c < q / 2 ? 1.0 : -1.0;
    }
  }
  return {std::move(row), std::move(col)};
}

cdouble das_combine(const ApertureData& data) {
  // Four interleaved partial sums over the flat (re, im) array.
  const double* x = reinterpret_cast<const double*>(data.s.data());
  const std::size_t n = 2 * data.s.size();
  double a0 = 0.0, a1 = 0.0, b0 = 0.0, b1 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += x[i];
    a1 += x[i + 1];
    b0 += x[i + 2];
    b1 += x[i + 3];
  }
  for (; i < n; i += 2) {
    a0 += x[i];
    a1 += x[i + 1];
  }
  return {a0 + b0, a1 + b1};
}

double nsi_combine(const ApertureData& data, const NsiConfig& config, bool* cropped) {
  std::size_t r0 = 0, r1 = data.rows, c0 = 0, c1 = data.cols;
  bool crop = false;
  if ((r1 - r0) % 2 != 0) {
    data.first_row_far ? ++r0 : --r1;
    crop = true;
  }
  if ((c1 - c0) % 2 != 0) {
    data.first_col_far ? ++c0 : --c1;
    crop = true;
  }
  if (cropped) *cropped = crop;
  if (r1 <= r0 || c1 <= c0) return 0.0;

  const std::size_t rmid = r0 + (r1 - r0) / 2;
  const std::size_t cmid = c0 + (c1 - c0) / 2;
  cdouble tl(0.0, 0.0), tr(0.0, 0.0), bl(0.0, 0.0), br(0.0, 0.0);
  for (std::size_t r = r0; r < r1; ++r) {
    const cdouble* row = data.s.data() + r * data.cols;
    cdouble left(0.0, 0.0), right(0.0, 0.0);
    for (std::size_t c = c0; c < cmid; ++c) left += row[c];
    for (std::size_t c = cmid; c < c1; ++c) right += row[c];
    if (r < rmid) {
      tl += left;
      tr += right;
    } else {
      bl += left;
      br += right;
    }
  }
  const cdouble total = tl + tr + bl + br;
  const cdouble zm_row = (tl + tr) - (bl + br);
  const cdouble zm_col = (tl + bl) - (tr + br);
  const cdouble dc = config.dc_offset * total;

  const double e_zm = std::max(std::abs(zm_row), std::abs(zm_col));
  const double e_dc_row = 0.5 * (std::abs(zm_row + dc) + std::abs(zm_row - dc));
  const double e_dc_col = 0.5 * (std::abs(zm_col + dc) + std::abs(zm_col - dc));
  const double e_dc = std::max(e_dc_row, e_dc_col);
  return std::abs(e_dc - e_zm);
}

void project(const ApertureData& data, DirectionalProjection& out, bool* cropped) {
  const std::size_t q = std::min(data.rows, data.cols);
  const std::size_t r0 = (data.rows - q) / 2;
  const std::size_t c0 = (data.cols - q) / 2;
  if (cropped) *cropped = data.rows != data.cols;
  out.azimuth.assign(q, cdouble(0.0, 0.0));
  out.elevation.assign(q, cdouble(0.0, 0.0));
  for (std::size_t i = 0; i < q; ++i) {
    const cdouble* row = data.s.data() + (r0 + i) * data.cols + c0;
    cdouble acc(0.0, 0.0);
    for (std::size_t j = 0; j < q; ++j) {
      acc += row[j];
      out.azimuth[j] += row[j];
    }
    out.elevation[i] = acc;
  }
}

DirectionalProjection project(const ApertureData& data, bool* cropped) {
  DirectionalProjection p;
  project(data, p, cropped);
  return p;
}

double coherence_factor(const std::vector<cdouble>& p) {
  if (p.empty()) return 0.0;
  cdouble sum(0.0, 0.0);
  double power = 0.0;
  for (const auto& v : p) {
    sum += v;
    power += std::norm(v);
  }
  if (power == 0.0) return 0.0;
  return std::norm(sum) / (static_cast<double>(p.size()) * power);
}

double dcf_weight(const DirectionalProjection& projection) {
  return coherence_factor(projection.azimuth) * coherence_factor(projection.elevation);
}

cdouble dcf_combine(const ApertureData& data, DirectionalProjection& scratch, bool* cropped) {
  const cdouble sum = das_combine(data);
  project(data, scratch, cropped);
  return sum * dcf_weight(scratch);
}

namespace {

// Fills ws.w with the weights; returns false when the uniform fallback is needed.
bool solve_weights(const std::vector<cdouble>& p, std::size_t length, double loading_scale,
                   MvWorkspace& ws) {
  const std::size_t q = p.size();
  const std::size_t l = length;
  const std::size_t k = q - l + 1;
  ws.w.assign(l, cdouble(1.0 / static_cast<double>(l), 0.0));
  if (l == 1) return true;

  // Lower triangle of the smoothed covariance.
  auto& r = ws.r;
  r.assign(l * l, cdouble(0.0, 0.0));
  for (std::size_t s = 0; s < k; ++s) {
    const cdouble* sub = p.data() + s;
    for (std::size_t i = 0; i < l; ++i) {
      const cdouble pi = sub[i];
      cdouble* row = r.data() + i * l;
      for (std::size_t j = 0; j <= i; ++j) row[j] += pi * std::conj(sub[j]);
    }
  }
  const double inv_k = 1.0 / static_cast<double>(k);
  double trace = 0.0;
  for (std::size_t i = 0; i < l; ++i) trace += r[i * l + i].real();
  trace *= inv_k;
  if (trace == 0.0) return true;  // all-zero data: any weights give 0
  const double eps = loading_scale * trace;
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j <= i; ++j) r[i * l + j] *= inv_k;
    r[i * l + i] += eps;
  }

  // In-place Cholesky, R = G G^H with G lower triangular.
  for (std::size_t j = 0; j < l; ++j) {
    cdouble* gj = r.data() + j * l;
    double d = gj[j].real();
    for (std::size_t m = 0; m < j; ++m) d -= std::norm(gj[m]);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double gjj = std::sqrt(d);
    gj[j] = gjj;
    const double inv = 1.0 / gjj;
    for (std::size_t i = j + 1; i < l; ++i) {
      cdouble* gi = r.data() + i * l;
      cdouble acc = gi[j];
      for (std::size_t m = 0; m < j; ++m) acc -= gi[m] * std::conj(gj[m]);
      gi[j] = acc * inv;
    }
  }
  // G y = 1, then G^H x = y (x overwrites w).
  auto& y = ws.y;
  y.resize(l);
  for (std::size_t i = 0; i < l; ++i) {
    const cdouble* gi = r.data() + i * l;
    cdouble acc(1.0, 0.0);
    for (std::size_t m = 0; m < i; ++m) acc -= gi[m] * y[m];
    y[i] = acc / gi[i].real();
  }
  auto& x = ws.w;
  for (std::size_t ii = l; ii-- > 0;) {
    cdouble acc = y[ii];
    for (std::size_t m = ii + 1; m < l; ++m) acc -= std::conj(r[m * l + ii]) * x[m];
    x[ii] = acc / r[ii * l + ii].real();
  }
  cdouble denom(0.0, 0.0);
  for (const auto& v : x) denom += v;
  if (!std::isfinite(denom.real()) || !std::isfinite(denom.imag()) || !(denom.real() > 0.0)) {
    return false;
  }
  const cdouble inv_denom = 1.0 / denom;
  for (auto& v : x) v *= inv_denom;
  return true;
}

}  // namespace

std::vector<cdouble> mv_weights(const std::vector<cdouble>& p, std::size_t length,
                                double loading_scale, MvWorkspace& ws, bool* fallback) {
  if (length == 0 || length > p.size()) throw std::invalid_argument("MV sub-array length out of range");
  const bool ok = solve_weights(p, length, loading_scale, ws);
  if (fallback) *fallback = !ok;
  if (!ok) ws.w.assign(length, cdouble(1.0 / static_cast<double>(length), 0.0));
  return ws.w;
}

cdouble mv_direction(const std::vector<cdouble>& p, const MvConfig& config, MvWorkspace& ws,
                     bool* fallback) {
  const std::size_t q = p.size();
  if (fallback) *fallback = false;
  if (q == 0) return {0.0, 0.0};
  const std::size_t length = config.resolve_length(q);
  const bool ok = solve_weights(p, length, config.resolve_scale(length), ws);
  if (!ok) {
    ws.w.assign(length, cdouble(1.0 / static_cast<double>(length), 0.0));
    if (fallback) *fallback = true;
  }
  const std::size_t k = q - length + 1;
  cdouble acc(0.0, 0.0);
  for (std::size_t s = 0; s < k; ++s) {
    for (std::size_t m = 0; m < length; ++m) acc += std::conj(ws.w[m]) * p[s + m];
  }
  return acc / static_cast<double>(k);
}

cdouble mv_beamform(const DirectionalProjection& projection, const MvConfig& config,
                    MvWorkspace& ws, bool* fallback) {
  bool f_az = false, f_el = false;
  const cdouble y_az = mv_direction(projection.azimuth, config, ws, &f_az);
  const cdouble y_el = mv_direction(projection.elevation, config, ws, &f_el);
  if (fallback) *fallback = f_az || f_el;
  return std::sqrt(y_az * std::conj(y_el));
}

cdouble combine(const BeamformerConfig& config, const ApertureData& data, CombineWorkspace& ws,
                VolumeStats& stats) {
  bool flag = false;
  switch (config.kind) {
    case Beamformer::das:
      return das_combine(data);
    case Beamformer::nsi: {
      const double e = nsi_combine(data, config.nsi, &flag);
      if (flag) ++stats.nsi_crops;
      return {e, 0.0};
    }
    case Beamformer::dcf: {
      const cdouble v = dcf_combine(data, ws.projection, &flag);
      if (flag) ++stats.square_crops;
      return v;
    }
    case Beamformer::mv: {
      project(data, ws.projection, &flag);
      if (flag) ++stats.square_crops;
      bool fb = false;
      const cdouble v = mv_beamform(ws.projection, config.mv, ws.mv, &fb);
      if (fb) ++stats.mv_fallbacks;
      return v;
    }
  }
  return {0.0, 0.0};
}

}  // namespace mxbf
