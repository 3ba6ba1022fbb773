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

#include "mxbf/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "mxbf/sigproc.hpp"

namespace mxbf {

std::string to_string(RoiRole role) {
  switch (role) {
    case RoiRole::interior: return "interior";
    case RoiRole::background: return "background";
    case RoiRole::mainlobe: return "mainlobe";
    case RoiRole::sidelobe: return "sidelobe";
  }
  return "unknown";
}

RoiRole parse_roi_role(const std::string& text) {
  if (text == "interior") return RoiRole::interior;
  if (text == "background") return RoiRole::background;
  if (text == "mainlobe") return RoiRole::mainlobe;
  if (text == "sidelobe") return RoiRole::sidelobe;
  throw std::invalid_argument("unknown ROI role `" + text + "`");
}

bool Roi::contains(const Vec3& p) const {
  constexpr double tol = 1e-9;
  return p.x >= min.x - tol && p.x <= max.x + tol && p.y >= min.y - tol && p.y <= max.y + tol &&
         p.z >= min.z - tol && p.z <= max.z + tol;
}

bool Roi::overlaps(const Roi& o) const {
  return min.x <= o.max.x && o.min.x <= max.x && min.y <= o.max.y && o.min.y <= max.y &&
         min.z <= o.max.z && o.min.z <= max.z;
}

std::vector<double> roi_samples(const std::vector<double>& envelope, const PixelGrid& grid,
                                const Roi& roi) {
  std::vector<double> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (roi.contains(grid.point(i))) out.push_back(envelope[i]);
  }
  if (out.empty()) throw std::invalid_argument("ROI `" + roi.id + "` contains no pixels");
  return out;
}

namespace {

std::vector<std::size_t> slab_indices(std::size_t n, double origin, double spacing, double center,
                                      double width) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = origin + static_cast<double>(i) * spacing;
    if (std::abs(p - center) <= 0.5 * width + 1e-9) idx.push_back(i);
  }
  return idx;
}

}  // namespace

std::vector<double> extract_lateral_profile(const BeamformedVolume& volume, double depth,
                                            double elevation, const SlabSpec& slab) {
  const PixelGrid& g = volume.grid;
  const auto iz = slab_indices(g.nz, g.origin.z, g.spacing.z, depth, slab.axial_thickness);
  const auto iy = slab_indices(g.ny, g.origin.y, g.spacing.y, elevation, slab.transverse_width);
  if (iz.empty() || iy.empty()) throw std::invalid_argument("profile slab lies outside the volume");
  const auto env = volume.envelope();
  std::vector<double> out(g.nx, 0.0);
  const double inv = 1.0 / static_cast<double>(iz.size() * iy.size());
  for (std::size_t ix = 0; ix < g.nx; ++ix) {
    double acc = 0.0;
    for (auto y : iy) {
      for (auto z : iz) acc += env[g.index(ix, y, z)];
    }
    out[ix] = acc * inv;
  }
  return out;
}

std::vector<double> extract_elevation_profile(const BeamformedVolume& volume, double depth,
                                              double lateral, const SlabSpec& slab) {
  const PixelGrid& g = volume.grid;
  const auto iz = slab_indices(g.nz, g.origin.z, g.spacing.z, depth, slab.axial_thickness);
  const auto ix = slab_indices(g.nx, g.origin.x, g.spacing.x, lateral, slab.transverse_width);
  if (iz.empty() || ix.empty()) throw std::invalid_argument("profile slab lies outside the volume");
  const auto env = volume.envelope();
  std::vector<double> out(g.ny, 0.0);
  const double inv = 1.0 / static_cast<double>(iz.size() * ix.size());
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    double acc = 0.0;
    for (auto x : ix) {
      for (auto z : iz) acc += env[g.index(x, iy, z)];
    }
    out[iy] = acc * inv;
  }
  return out;
}

double fwhm(const std::vector<double>& profile, double spacing, std::size_t upsample) {
  if (!(spacing > 0.0)) throw std::invalid_argument("profile spacing must be positive");
  const std::vector<double> u = spline_upsample(profile, upsample);
  const auto peak_it = std::max_element(u.begin(), u.end());
  const auto peak = static_cast<std::size_t>(peak_it - u.begin());
  if (peak == 0 || peak + 1 == u.size()) throw NumericError("profile peak lies on the boundary");
  const double half = 0.5 * *peak_it;
  if (!(half > 0.0)) throw NumericError("profile has no positive peak");

  std::size_t l = peak;
  while (l > 0 && u[l - 1] > half) --l;
  if (l == 0) throw NumericError("no half-maximum crossing left of the peak");
  std::size_t r = peak;
  while (r + 1 < u.size() && u[r + 1] > half) ++r;
  if (r + 1 == u.size()) throw NumericError("no half-maximum crossing right of the peak");

  // Linear interpolation between the samples straddling half maximum.
  const double xl = static_cast<double>(l - 1) + (half - u[l - 1]) / (u[l] - u[l - 1]);
  const double xr = static_cast<double>(r) + (u[r] - half) / (u[r] - u[r + 1]);
  return (xr - xl) * spacing / static_cast<double>(upsample);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean of empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

double gcnr(const std::vector<double>& inside, const std::vector<double>& outside,
            std::size_t bins) {
  if (inside.empty() || outside.empty()) throw std::invalid_argument("gCNR needs two non-empty samples");
  if (bins == 0) throw std::invalid_argument("gCNR needs at least one bin");
  double hi = 0.0;
  for (double v : inside) hi = std::max(hi, v);
  for (double v : outside) hi = std::max(hi, v);
  auto histogram = [&](const std::vector<double>& s) {
    std::vector<double> h(bins, 0.0);
    for (double v : s) {
      std::size_t b = 0;
      if (hi > 0.0) {
        b = static_cast<std::size_t>(std::max(0.0, v) / hi * static_cast<double>(bins));
        b = std::min(b, bins - 1);
      }
      h[b] += 1.0;
    }
    for (auto& x : h) x /= static_cast<double>(s.size());
    return h;
  };
  const auto pi = histogram(inside);
  const auto po = histogram(outside);
  double overlap = 0.0;
  for (std::size_t b = 0; b < bins; ++b) overlap += std::min(pi[b], po[b]);
  return std::clamp(1.0 - overlap, 0.0, 1.0);
}

ContrastMetrics contrast_metrics(const std::vector<double>& inside,
                                 const std::vector<double>& outside) {
  const double mi = mean(inside);
  const double mo = mean(outside);
  ContrastMetrics m;
  m.cr_db = mo > 0.0 && mi > 0.0 ? 10.0 * std::log10(mi / mo)
                                 : std::numeric_limits<double>::quiet_NaN();
  const double denom = std::sqrt(variance(inside) + variance(outside));
  m.cnr = denom > 0.0 ? (mi - mo) / denom : 0.0;
  m.gcnr = gcnr(inside, outside);
  return m;
}

ContrastMetrics contrast_metrics(const BeamformedVolume& volume, const Roi& interior,
                                 const Roi& background) {
  const auto env = volume.envelope();
  return contrast_metrics(roi_samples(env, volume.grid, interior),
                          roi_samples(env, volume.grid, background));
}

double ssnr(const std::vector<double>& samples) {
  const double m = mean(samples);
  const double v = variance(samples);
  if (v == 0.0) return std::numeric_limits<double>::infinity();
  return m / std::sqrt(v);
}

double ssnr(const BeamformedVolume& volume, const Roi& roi) {
  return ssnr(roi_samples(volume.envelope(), volume.grid, roi));
}

std::vector<double> max_depth_projection(const BeamformedVolume& volume) {
  const PixelGrid& g = volume.grid;
  const auto env = volume.envelope();
  std::vector<double> out(g.nx * g.ny, 0.0);
  for (std::size_t ix = 0; ix < g.nx; ++ix) {
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
      double m = 0.0;
      for (std::size_t iz = 0; iz < g.nz; ++iz) m = std::max(m, env[g.index(ix, iy, iz)]);
      out[ix * g.ny + iy] = m;
    }
  }
  return out;
}

double psf_contrast(const BeamformedVolume& volume, const Roi& mainlobe, const Roi& sidelobe) {
  const PixelGrid& g = volume.grid;
  const auto proj = max_depth_projection(volume);
  auto collect = [&](const Roi& roi) {
    std::vector<double> s;
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      for (std::size_t iy = 0; iy < g.ny; ++iy) {
        Vec3 p = g.point(ix, iy, 0);
        p.z = 0.5 * (roi.min.z + roi.max.z);
        if (roi.contains(p)) s.push_back(proj[ix * g.ny + iy]);
      }
    }
    if (s.empty()) throw std::invalid_argument("ROI `" + roi.id + "` contains no pixels");
    return s;
  };
  const double main = mean(collect(mainlobe));
  const double side = mean(collect(sidelobe));
  if (!(side > 0.0)) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(main / side);
}

std::string MetricsReport::csv() const {
  std::ostringstream out;
  out.precision(10);
  out << "beamformer,coupling,metric,value,roi_id\n";
  for (const auto& r : rows) {
    out << r.beamformer << ',' << r.coupling << ',' << r.metric << ',' << r.value << ','
        << r.roi_id << '\n';
  }
  return out.str();
}

std::string MetricsReport::table() const {
  // Rows: beamformer x coupling; columns: metric names in first-seen order.
  std::vector<std::string> metrics;
  std::vector<std::pair<std::string, std::size_t>> keys;
  std::map<std::pair<std::pair<std::string, std::size_t>, std::string>, double> cell;
  for (const auto& r : rows) {
    if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end()) {
      metrics.push_back(r.metric);
    }
    const auto key = std::make_pair(r.beamformer, r.coupling);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    cell[{key, r.metric}] = r.value;
  }
  std::ostringstream out;
  out << std::left << std::setw(12) << "beamformer" << std::setw(10) << "coupling";
  std::vector<int> width;
  for (const auto& m : metrics) width.push_back(static_cast<int>(std::max<std::size_t>(14, m.size()) + 2));
  for (std::size_t j = 0; j < metrics.size(); ++j) out << std::setw(width[j]) << metrics[j];
  out << '\n';
  for (const auto& k : keys) {
    out << std::setw(12) << k.first << std::setw(10) << k.second;
    for (std::size_t j = 0; j < metrics.size(); ++j) {
      auto it = cell.find({k, metrics[j]});
      std::ostringstream v;
      if (it == cell.end()) {
        v << "-";
      } else {
        v << std::setprecision(5) << it->second;
      }
      out << std::setw(width[j]) << v.str();
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace mxbf
