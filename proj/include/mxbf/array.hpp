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

#ifndef MXBF_ARRAY_HPP
#define MXBF_ARRAY_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "mxbf/common.hpp"

namespace mxbf {

class KeyValueConfig;

struct MediumSpec {
  double sound_speed = 1540.0;  ///< m/s

  void validate() const;
  double wavelength(double frequency_hz) const { return sound_speed / frequency_hz; }
};

/// Rectangular piston element. Width along x (lateral), height along y (elevation).
struct ElementSpec {
  double width = 0.0;
  double height = 0.0;
};

/// Half-open range of array rows belonging to one physical panel.
struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const RowRange&) const = default;
};

/**
 * Fully populated 2D matrix array on a regular grid.
 *
 * Element (r, c) sits at row r (elevation, y) and column c (lateral, x); the flat
 * index is r * cols + c. Positions are centered on the array centroid at z = 0.
 */
class MatrixArrayGeometry {
 public:
  MatrixArrayGeometry(std::size_t rows, std::size_t cols, double pitch_x, double pitch_y,
                      ElementSpec element, std::vector<RowRange> panels);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return rows_ * cols_; }
  double pitch_x() const { return pitch_x_; }
  double pitch_y() const { return pitch_y_; }
  const ElementSpec& element() const { return element_; }
  const std::vector<RowRange>& panels() const { return panels_; }
  const std::vector<Vec3>& positions() const { return positions_; }

  std::size_t index(std::size_t row, std::size_t col) const { return row * cols_ + col; }
  const Vec3& position(std::size_t row, std::size_t col) const { return positions_[index(row, col)]; }

  /// Extent of the array footprint, pitch times count along each axis.
  double footprint_x() const { return static_cast<double>(cols_) * pitch_x_; }
  double footprint_y() const { return static_cast<double>(rows_) * pitch_y_; }

  /// Index of the panel containing the given row.
  std::size_t panel_of_row(std::size_t row) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  double pitch_x_;
  double pitch_y_;
  ElementSpec element_;
  std::vector<RowRange> panels_;
  std::vector<Vec3> positions_;
};

/// Builds a matrix array whose panels are equal contiguous row bands.
/// Throws std::invalid_argument for zero dimensions, a panel count that does not
/// divide the rows, or an element larger than the pitch.
MatrixArrayGeometry build_matrix_array(std::size_t rows, std::size_t cols, double pitch_x,
                                       double pitch_y, ElementSpec element,
                                       std::size_t panel_count);

/// Square group of adjacent elements wired together to act as one large element.
struct CoupledBlock {
  std::vector<std::size_t> members;  ///< flat indices into the base geometry
  Vec3 centroid;
  double width = 0.0;   ///< outer edge to outer edge, kerf included
  double height = 0.0;
  std::size_t row = 0;  ///< block-grid row
  std::size_t col = 0;  ///< block-grid column
};

/// Element shape used for directivity: a factor x factor block of members at the given pitch.
/// A factor of 1 is a single solid element.
struct BlockShape {
  std::size_t factor = 1;
  double pitch_x = 0.0;
  double pitch_y = 0.0;
  ElementSpec member;

  ElementSpec outer() const;
};

class CoupledArray {
 public:
  CoupledArray(MatrixArrayGeometry base, std::size_t factor, std::vector<CoupledBlock> blocks);

  const MatrixArrayGeometry& base() const { return base_; }
  std::size_t factor() const { return factor_; }
  const std::vector<CoupledBlock>& blocks() const { return blocks_; }
  std::size_t block_rows() const { return base_.rows() / factor_; }
  std::size_t block_cols() const { return base_.cols() / factor_; }
  BlockShape shape() const;
  /// Width of one block in the lateral direction, kerf between members included.
  double block_width() const { return shape().outer().width; }

 private:
  MatrixArrayGeometry base_;
  std::size_t factor_;
  std::vector<CoupledBlock> blocks_;
};

/// Groups factor x factor blocks of adjacent elements. Allowed factors are 1, 2 and 4; a
/// block may not straddle two panels.
CoupledArray couple(const MatrixArrayGeometry& geometry, std::size_t factor);

/// Direction of arrival as steering angles. The unit vector is
/// (sin az cos el, sin el, cos az cos el).
struct DirectionAngles {
  double azimuth_rad = 0.0;
  double elevation_rad = 0.0;

  Vec3 unit() const;
};

/// Far-field amplitude of a solid rectangular element, separable sinc, 1 at broadside.
double element_directivity(const ElementSpec& element, double wavelength, const Vec3& direction);
double element_directivity(const ElementSpec& element, double wavelength, DirectionAngles angles);

/// Far-field amplitude of a coupled block: member sinc times the block's sub-array factor.
double block_directivity(const BlockShape& shape, double wavelength, const Vec3& direction);
double block_directivity(const BlockShape& shape, double wavelength, DirectionAngles angles);

/// Argument x of sinc(x) = 1/sqrt(2), the half-power point of the amplitude sinc.
double sinc_half_power_point();

/// Minimum F-number supported by an element of the given width (in wavelengths).
/// F# = 1 / (2 sin a), a the half-power angle of the 1D sinc directivity. Elements narrower
/// than the half-power point have an omnidirectional main lobe and yield 0.5.
double min_f_number(double width_in_wavelengths);

struct Quadrant {
  Vec3 offset;
  CoupledArray array;
};

/**
 * Large aperture assembled from four placements of the same coupled array in a 2x2 layout.
 *
 * The combined receiver grid has 2 * block_rows rows and 2 * block_cols columns; quadrant q
 * (row-major: 0 = -x/-y, 1 = +x/-y, 2 = -x/+y, 3 = +x/+y) covers one corner.
 */
class VirtualAperture {
 public:
  explicit VirtualAperture(std::vector<Quadrant> quadrants);

  const std::vector<Quadrant>& quadrants() const { return quadrants_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return positions_.size(); }
  /// Block centroids of the combined aperture, row-major over the combined grid.
  const std::vector<Vec3>& positions() const { return positions_; }

  struct Source {
    std::size_t quadrant;
    std::size_t block;
  };
  /// Which quadrant and which block within it supplies combined receiver i.
  const Source& source(std::size_t i) const { return sources_[i]; }

 private:
  std::vector<Quadrant> quadrants_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Vec3> positions_;
  std::vector<Source> sources_;
};

VirtualAperture tile_virtual_aperture(const CoupledArray& array);

/// Regular grid of receive channels as seen by the beamformer.
struct ReceiverGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Vec3> positions;  ///< row-major
  BlockShape shape;

  std::size_t size() const { return positions.size(); }
  const Vec3& position(std::size_t row, std::size_t col) const { return positions[row * cols + col]; }
};

ReceiverGrid receiver_grid(const CoupledArray& array);
ReceiverGrid receiver_grid(const VirtualAperture& aperture);

/// Geometry as stored in a config: the base array plus its coupling factor.
struct GeometryConfig {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double pitch_x_m = 0.0;
  double pitch_y_m = 0.0;
  double elem_w_m = 0.0;
  double elem_h_m = 0.0;
  std::size_t panels = 1;
  std::size_t coupling_factor = 1;

  MatrixArrayGeometry build() const;
  CoupledArray build_coupled() const;
  bool operator==(const GeometryConfig&) const = default;
};

GeometryConfig read_geometry_config(const KeyValueConfig& config);
std::string write_geometry_config(const GeometryConfig& geometry);

}  // namespace mxbf

#endif  // MXBF_ARRAY_HPP
