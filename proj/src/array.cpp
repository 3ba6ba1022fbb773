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

#include "mxbf/array.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cstdint>
#include <sstream>
#include <utility>

#include "mxbf/config.hpp"

namespace mxbf {

void MediumSpec::validate() const {
  if (!(sound_speed > 0.0) || !std::isfinite(sound_speed)) {
    throw std::invalid_argument("sound speed must be positive and finite");
  }
}

MatrixArrayGeometry::MatrixArrayGeometry(std::size_t rows, std::size_t cols, double pitch_x,
                                         double pitch_y, ElementSpec element,
                                         std::vector<RowRange> panels)
    : rows_(rows),
      cols_(cols),
      pitch_x_(pitch_x),
      pitch_y_(pitch_y),
      element_(element),
      panels_(std::move(panels)) {
  if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("array dimensions must be positive");
  if (!(pitch_x_ > 0.0) || !(pitch_y_ > 0.0)) throw std::invalid_argument("pitch must be positive");
  if (!(element_.width > 0.0) || !(element_.height > 0.0)) {
    throw std::invalid_argument("element size must be positive");
  }
  if (element_.width > pitch_x_ || element_.height > pitch_y_) {
    throw std::invalid_argument("element larger than pitch");
  }
  std::size_t next = 0;
  for (const auto& p : panels_) {
    if (p.begin != next || p.end <= p.begin) {
      throw std::invalid_argument("panel row ranges must partition the rows");
    }
    next = p.end;
  }
  if (next != rows_) throw std::invalid_argument("panel row ranges must partition the rows");

  positions_.reserve(rows_ * cols_);
  const double cx = 0.5 * static_cast<double>(cols_ - 1);
  const double cy = 0.5 * static_cast<double>(rows_ - 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      positions_.push_back({(static_cast<double>(c) - cx) * pitch_x_,
                            (static_cast<double>(r) - cy) * pitch_y_, 0.0});
    }
  }
}

std::size_t MatrixArrayGeometry::panel_of_row(std::size_t row) const {
  for (std::size_t i = 0; i < panels_.size(); ++i) {
    if (row >= panels_[i].begin && row < panels_[i].end) return i;
  }
  throw std::out_of_range("row outside array");
}

MatrixArrayGeometry build_matrix_array(std::size_t rows, std::size_t cols, double pitch_x,
                                       double pitch_y, ElementSpec element,
                                       std::size_t panel_count) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("array dimensions must be positive");
  if (panel_count == 0 || rows % panel_count != 0) {
    throw std::invalid_argument("panel count must divide the row count");
  }
  const std::size_t band = rows / panel_count;
  std::vector<RowRange> panels;
  for (std::size_t p = 0; p < panel_count; ++p) panels.push_back({p * band, (p + 1) * band});
  return MatrixArrayGeometry(rows, cols, pitch_x, pitch_y, element, std::move(panels));
}

ElementSpec BlockShape::outer() const {
  const double f = static_cast<double>(factor);
  return {(f - 1.0) * pitch_x + member.width, (f - 1.0) * pitch_y + member.height};
}

CoupledArray::CoupledArray(MatrixArrayGeometry base, std::size_t factor,
                           std::vector<CoupledBlock> blocks)
    : base_(std::move(base)), factor_(factor), blocks_(std::move(blocks)) {}

BlockShape CoupledArray::shape() const {
  return {factor_, base_.pitch_x(), base_.pitch_y(), base_.element()};
}

CoupledArray couple(const MatrixArrayGeometry& geometry, std::size_t factor) {
  if (factor != 1 && factor != 2 && factor != 4) {
    throw std::invalid_argument("coupling factor must be 1, 2 or 4");
  }
  if (geometry.rows() % factor != 0 || geometry.cols() % factor != 0) {
    throw std::invalid_argument("coupling factor must divide the array dimensions");
  }
  for (const auto& p : geometry.panels()) {
    if (p.begin % factor != 0 || (p.end - p.begin) % factor != 0) {
      throw std::invalid_argument("coupled block would cross a panel boundary");
    }
  }
  const BlockShape shape{factor, geometry.pitch_x(), geometry.pitch_y(), geometry.element()};
  const ElementSpec outer = shape.outer();
  const std::size_t brows = geometry.rows() / factor;
  const std::size_t bcols = geometry.cols() / factor;
  const double inv = 1.0 / static_cast<double>(factor * factor);

  std::vector<CoupledBlock> blocks;
  blocks.reserve(brows * bcols);
  for (std::size_t br = 0; br < brows; ++br) {
    for (std::size_t bc = 0; bc < bcols; ++bc) {
      CoupledBlock block;
      block.row = br;
      block.col = bc;
      block.width = outer.width;
      block.height = outer.height;
      Vec3 sum;
      for (std::size_t r = br * factor; r < (br + 1) * factor; ++r) {
        for (std::size_t c = bc * factor; c < (bc + 1) * factor; ++c) {
          block.members.push_back(geometry.index(r, c));
          sum = sum + geometry.position(r, c);
        }
      }
      block.centroid = factor == 1 ? geometry.position(br, bc) : sum * inv;
      blocks.push_back(std::move(block));
    }
  }
  return CoupledArray(geometry, factor, std::move(blocks));
}

Vec3 DirectionAngles::unit() const {
  return {std::sin(azimuth_rad) * std::cos(elevation_rad), std::sin(elevation_rad),
          std::cos(azimuth_rad) * std::cos(elevation_rad)};
}

namespace {

Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  if (n == 0.0) return {0.0, 0.0, 1.0};
  return v * (1.0 / n);
}

// Normalized array factor of n equally spaced point sources, 1 at u = 0.
double array_factor(std::size_t n, double pitch_over_lambda, double u) {
  if (n == 1) return 1.0;
  const double half = kPi * pitch_over_lambda * u;
  const double den = std::sin(half);
  if (std::abs(den) < 1e-12) {
    // Grating-lobe or broadside: the limit is (+-1)^(n-1).
    const double k = std::round(pitch_over_lambda * u);
    return (n % 2 == 0 && static_cast<std::int64_t>(k) % 2 != 0) ? -1.0 : 1.0;
  }
  return std::sin(static_cast<double>(n) * half) / (static_cast<double>(n) * den);
}

}  // namespace

double element_directivity(const ElementSpec& element, double wavelength, const Vec3& direction) {
  const Vec3 u = normalized(direction);
  return sinc(element.width * u.x / wavelength) * sinc(element.height * u.y / wavelength);
}

double element_directivity(const ElementSpec& element, double wavelength, DirectionAngles angles) {
  return element_directivity(element, wavelength, angles.unit());
}

double block_directivity(const BlockShape& shape, double wavelength, const Vec3& direction) {
  const Vec3 u = normalized(direction);
  return element_directivity(shape.member, wavelength, u) *
         array_factor(shape.factor, shape.pitch_x / wavelength, u.x) *
         array_factor(shape.factor, shape.pitch_y / wavelength, u.y);
}

double block_directivity(const BlockShape& shape, double wavelength, DirectionAngles angles) {
  return block_directivity(shape, wavelength, angles.unit());
}

double sinc_half_power_point() {
  static const double x0 = [] {
    const double target = 1.0 / std::sqrt(2.0);
    std::uintmax_t iters = 100;
    auto f = [target](double x) { return sinc(x) - target; };
    auto tol = boost::math::tools::eps_tolerance<double>(52);
    const auto r = boost::math::tools::toms748_solve(f, 0.1, 0.9, tol, iters);
    return 0.5 * (r.first + r.second);
  }();
  return x0;
}

double min_f_number(double width_in_wavelengths) {
  if (!(width_in_wavelengths > 0.0)) throw std::invalid_argument("element width must be positive");
  const double sin_alpha = sinc_half_power_point() / width_in_wavelengths;
  if (sin_alpha >= 1.0) return 0.5;
  return 1.0 / (2.0 * sin_alpha);
}

VirtualAperture::VirtualAperture(std::vector<Quadrant> quadrants)
    : quadrants_(std::move(quadrants)) {
  if (quadrants_.size() != 4) throw std::invalid_argument("virtual aperture needs four quadrants");
  const std::size_t br = quadrants_[0].array.block_rows();
  const std::size_t bc = quadrants_[0].array.block_cols();
  for (const auto& q : quadrants_) {
    if (q.array.block_rows() != br || q.array.block_cols() != bc) {
      throw std::invalid_argument("quadrants must share one block layout");
    }
  }
  rows_ = 2 * br;
  cols_ = 2 * bc;
  positions_.reserve(rows_ * cols_);
  sources_.reserve(rows_ * cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      const std::size_t q = (r / br) * 2 + (c / bc);
      const std::size_t b = (r % br) * bc + (c % bc);
      positions_.push_back(quadrants_[q].array.blocks()[b].centroid + quadrants_[q].offset);
      sources_.push_back({q, b});
    }
  }
}

VirtualAperture tile_virtual_aperture(const CoupledArray& array) {
  const double hx = 0.5 * array.base().footprint_x();
  const double hy = 0.5 * array.base().footprint_y();
  std::vector<Quadrant> quadrants;
  quadrants.push_back({{-hx, -hy, 0.0}, array});
  quadrants.push_back({{+hx, -hy, 0.0}, array});
  quadrants.push_back({{-hx, +hy, 0.0}, array});
  quadrants.push_back({{+hx, +hy, 0.0}, array});
  return VirtualAperture(std::move(quadrants));
}

ReceiverGrid receiver_grid(const CoupledArray& array) {
  ReceiverGrid grid;
  grid.rows = array.block_rows();
  grid.cols = array.block_cols();
  grid.shape = array.shape();
  grid.positions.reserve(array.blocks().size());
  for (const auto& b : array.blocks()) grid.positions.push_back(b.centroid);
  return grid;
}

ReceiverGrid receiver_grid(const VirtualAperture& aperture) {
  ReceiverGrid grid;
  grid.rows = aperture.rows();
  grid.cols = aperture.cols();
  grid.shape = aperture.quadrants().front().array.shape();
  grid.positions = aperture.positions();
  return grid;
}

MatrixArrayGeometry GeometryConfig::build() const {
  return build_matrix_array(rows, cols, pitch_x_m, pitch_y_m, {elem_w_m, elem_h_m}, panels);
}

CoupledArray GeometryConfig::build_coupled() const { return couple(build(), coupling_factor); }

GeometryConfig read_geometry_config(const KeyValueConfig& config) {
  GeometryConfig g;
  g.rows = config.get_size("rows");
  g.cols = config.get_size("cols");
  g.pitch_x_m = config.get_double("pitch_x_m");
  g.pitch_y_m = config.get_double("pitch_y_m", g.pitch_x_m);
  g.elem_w_m = config.get_double("elem_w_m");
  g.elem_h_m = config.get_double("elem_h_m", g.elem_w_m);
  g.panels = config.get_size("panels", 1);
  g.coupling_factor = config.get_size("coupling_factor", 1);
  try {
    (void)g.build_coupled();
  } catch (const std::invalid_argument& e) {
    const std::string key = config.has("coupling_factor") ? "coupling_factor" : "rows";
    throw ConfigError(config.where(key) + ": invalid geometry: " + e.what());
  }
  return g;
}

std::string write_geometry_config(const GeometryConfig& g) {
  std::ostringstream out;
  out.precision(17);
  out << "rows = " << g.rows << '\n'
      << "cols = " << g.cols << '\n'
      << "pitch_x_m = " << g.pitch_x_m << '\n'
      << "pitch_y_m = " << g.pitch_y_m << '\n'
      << "elem_w_m = " << g.elem_w_m << '\n'
      << "elem_h_m = " << g.elem_h_m << '\n'
      << "panels = " << g.panels << '\n'
      << "coupling_factor = " << g.coupling_factor << '\n';
  return out.str();
}

}  // namespace mxbf
