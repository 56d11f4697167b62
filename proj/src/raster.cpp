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
#include "resext/raster.hpp"

#include <cmath>
#include <string>

namespace resext {

void validate(const GridGeo& geo) {
  if (geo.ncols < 1 || geo.nrows < 1) {
    throw ParamError("grid must have ncols >= 1 and nrows >= 1, got " +
                     std::to_string(geo.ncols) + "x" +
                     std::to_string(geo.nrows));
  }
  if (!(geo.cellsize > 0.0)) {
    throw ParamError("cellsize must be > 0, got " +
                     std::to_string(geo.cellsize));
  }
  if (geo.crs_kind == CrsKind::Geographic) {
    // Degree grids must fit inside the +-90 latitude band.
    const double top = geo.y_origin + geo.nrows * geo.cellsize;
    if (geo.y_origin < -90.0 - 1e-9 || top > 90.0 + 1e-9) {
      throw CrsError("geographic grid exceeds the latitude band: y in [" +
                     std::to_string(geo.y_origin) + ", " +
                     std::to_string(top) + "]");
    }
  }
}

Raster make_raster(const GridGeo& geo, double fill, double nodata,
                   Units units) {
  validate(geo);
  Raster r;
  r.geo = geo;
  r.values.assign(std::size_t(geo.ncols) * geo.nrows, fill);
  r.nodata = nodata;
  r.units = units;
  return r;
}

Raster make_raster(const GridGeo& geo, std::vector<double> values, double nodata,
                   Units units) {
  Raster r;
  r.geo = geo;
  r.values = std::move(values);
  r.nodata = nodata;
  r.units = units;
  validate(r);
  return r;
}

void validate(const Raster& r) {
  validate(r.geo);
  const std::size_t expected = std::size_t(r.geo.ncols) * r.geo.nrows;
  if (r.values.size() != expected) {
    throw ParamError("raster value count " + std::to_string(r.values.size()) +
                     " does not match " + std::to_string(r.geo.ncols) + "x" +
                     std::to_string(r.geo.nrows));
  }
}

std::size_t valid_count(const Raster& r) {
  std::size_t n = 0;
  for (double v : r.values) {
    if (r.is_valid(v)) ++n;
  }
  return n;
}

Raster db_to_linear(const Raster& r) {
  if (r.units != Units::Decibel) {
    throw UnitsError("db_to_linear expects Decibel input");
  }
  Raster out = r;
  out.units = Units::LinearPower;
  for (double& v : out.values) {
    if (r.is_valid(v)) v = std::pow(10.0, v / 10.0);
  }
  return out;
}

Raster linear_to_db(const Raster& r) {
  if (r.units != Units::LinearPower) {
    throw UnitsError("linear_to_db expects LinearPower input");
  }
  Raster out = r;
  out.units = Units::Decibel;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double& v = out.values[i];
    if (!r.is_valid(v)) continue;
    if (!(v > 0.0)) {
      throw DomainError("nonpositive linear power " + std::to_string(v) +
                        " at pixel index " + std::to_string(i));
    }
    v = 10.0 * std::log10(v);
  }
  return out;
}

void validate(const Scene& s) {
  validate(s.vv);
  validate(s.vh);
  if (!(s.vv.geo == s.vh.geo)) {
    throw GridMismatch("scene bands are not co-registered (VV and VH grids "
                       "differ)");
  }
  if (s.vv.geo.crs_kind != CrsKind::ProjectedMeters) {
    throw CrsError("scene must be in a projected metric CRS");
  }
  if (s.vv.units != s.vh.units) {
    throw UnitsError("scene bands carry different units");
  }
  if (s.vv.units != Units::Decibel && s.vv.units != Units::LinearPower) {
    throw UnitsError("scene bands must be Decibel or LinearPower");
  }
  if (!is_valid_date(s.date)) {
    throw ParamError("scene date is not a valid calendar date");
  }
}

}  // namespace resext
