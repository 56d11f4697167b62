/*
 * Copyright 2025-present the resext authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef RESEXT_RASTER_HPP_
#define RESEXT_RASTER_HPP_

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "resext/date.hpp"
#include "resext/errors.hpp"

namespace resext {

enum class CrsKind { Geographic, ProjectedMeters };

enum class Units {
  LinearPower,
  Decibel,
  MillimetersPerDay,
  Millimeters,
  Dimensionless,
  Label
};

/// Grid georeferencing: square cells, lower-left corner origin.
struct GridGeo {
  int ncols = 0;
  int nrows = 0;
  double x_origin = 0.0;  // x of the lower-left corner
  double y_origin = 0.0;  // y of the lower-left corner
  double cellsize = 0.0;
  CrsKind crs_kind = CrsKind::ProjectedMeters;

  friend bool operator==(const GridGeo&, const GridGeo&) = default;
};

void validate(const GridGeo& geo);

/// x coordinate of the center of column `col`.
inline double col_center_x(const GridGeo& geo, int col) {
  return geo.x_origin + (col + 0.5) * geo.cellsize;
}

/// y coordinate of the center of row `row`. Row 0 is the top row.
inline double row_center_y(const GridGeo& geo, int row) {
  return geo.y_origin + (geo.nrows - row - 0.5) * geo.cellsize;
}

/// 2-D grid of doubles, row-major, top row first. Cells equal to the
/// nodata sentinel (or non-finite) are excluded from every statistic.
struct Raster {
  GridGeo geo;
  std::vector<double> values;
  double nodata = -9999.0;
  Units units = Units::Dimensionless;

  double& at(int row, int col) {
    return values[std::size_t(row) * geo.ncols + col];
  }
  double at(int row, int col) const {
    return values[std::size_t(row) * geo.ncols + col];
  }

  bool is_valid(double v) const { return std::isfinite(v) && v != nodata; }
  bool valid_at(int row, int col) const { return is_valid(at(row, col)); }

  std::size_t cell_count() const { return values.size(); }
};

Raster make_raster(const GridGeo& geo, double fill, double nodata,
                   Units units);
Raster make_raster(const GridGeo& geo, std::vector<double> values,
                   double nodata = -9999.0, Units units = Units::Dimensionless);
void validate(const Raster& r);

/// Count of valid (finite, non-nodata) cells.
std::size_t valid_count(const Raster& r);

/// Per-pixel 10^(x/10); nodata preserved, units Decibel -> LinearPower.
Raster db_to_linear(const Raster& r);
/// Per-pixel 10*log10(x); requires strictly positive valid values.
Raster linear_to_db(const Raster& r);

/// A dated pair of co-registered VV and VH backscatter rasters.
struct Scene {
  Raster vv;
  Raster vh;
  Date date;
  std::string reservoir_id;
};

void validate(const Scene& s);

}  // namespace resext

#endif  // RESEXT_RASTER_HPP_
