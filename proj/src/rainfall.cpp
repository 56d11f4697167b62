// Copyright 2025-present the resext authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "resext/rainfall.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "resext/ascii_grid.hpp"
#include "resext/errors.hpp"

namespace resext {

DailyStack load_stack(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("'" + dir + "' is not a readable directory");
  }

  struct Entry {
    Date date;
    std::string path;
  };
  std::vector<Entry> entries;
  for (const fs::directory_entry& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".asc") continue;
    Date date;
    try {
      date = parse_date(e.path().stem().string());
    } catch (Error& err) {
      err.prepend_context("daily file '" + e.path().string() +
                          "' is not named YYYY-MM-DD.asc");
      throw;
    }
    entries.push_back(Entry{date, e.path().string()});
  }
  if (entries.empty()) throw EmptyInput("no .asc files in '" + dir + "'");
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.date < b.date; });

  DailyStack stack;
  std::string first_path;
  for (const Entry& e : entries) {
    Raster layer = read_ascii_grid(e.path, CrsKind::Geographic, Units::MillimetersPerDay);
    if (stack.layers.empty()) {
      stack.geo = layer.geo;
      first_path = e.path;
    } else if (!(layer.geo == stack.geo)) {
      throw GridMismatch("daily file '" + e.path + "' does not match the grid of '" +
                         first_path + "'");
    }
    stack.dates.push_back(e.date);
    stack.layers.push_back(std::move(layer));
  }
  for (Date d = stack.dates.front(); d < stack.dates.back(); d = next_day(d)) {
    if (!std::binary_search(stack.dates.begin(), stack.dates.end(), d)) {
      stack.gaps.push_back(d);
    }
  }
  return stack;
}

MonthlyTotal monthly_total(const DailyStack& stack, int year, int month) {
  if (month < 1 || month > 12) {
    throw ParamError("month must be 1..12, got " + std::to_string(month));
  }
  MonthlyTotal out;
  out.days_in_month = days_in_month(year, month);
  out.total = make_raster(stack.geo, 0.0, -9999.0, Units::Millimeters);
  std::vector<char> invalid(out.total.cell_count(), 0);
  for (std::size_t i = 0; i < stack.dates.size(); ++i) {
    if (stack.dates[i].year != year || stack.dates[i].month != month) continue;
    ++out.days_present;
    const Raster& layer = stack.layers[i];
    for (std::size_t c = 0; c < layer.values.size(); ++c) {
      if (!layer.is_valid(layer.values[c])) {
        invalid[c] = 1;
      } else {
        out.total.values[c] += layer.values[c];
      }
    }
  }
  if (out.days_present == 0) {
    throw EmptyPeriod("no daily layers for " + std::to_string(year) + "-" +
                      (month < 10 ? "0" : "") + std::to_string(month));
  }
  for (std::size_t c = 0; c < invalid.size(); ++c) {
    if (invalid[c]) out.total.values[c] = out.total.nodata;
  }
  return out;
}

namespace {

/// Spatial mean over every valid cell (cos-latitude weighted when the
/// grid is Geographic); pivot-based so constant fields are exact.
double region_mean(const Raster& r) {
  const bool weighted = r.geo.crs_kind == CrsKind::Geographic;
  double pivot = 0.0;
  bool have_pivot = false;
  double wsum = 0.0, dev = 0.0;
  for (int row = 0; row < r.geo.nrows; ++row) {
    const double w =
        weighted ? std::cos(row_center_y(r.geo, row) * std::numbers::pi / 180.0) : 1.0;
    for (int col = 0; col < r.geo.ncols; ++col) {
      const double v = r.at(row, col);
      if (!r.is_valid(v)) continue;
      if (!have_pivot) {
        pivot = v;
        have_pivot = true;
      }
      wsum += w;
      dev += w * (v - pivot);
    }
  }
  if (!have_pivot) throw EmptyMask("no valid cells in region");
  return pivot + dev / wsum;
}

}  // namespace

Climatology monthly_climatology(const DailyStack& stack, int start_year, int end_year) {
  if (start_year > end_year) {
    throw ParamError("start_year " + std::to_string(start_year) + " after end_year " +
                     std::to_string(end_year));
  }
  Climatology clim;
  clim.table.start_year = start_year;
  clim.table.end_year = end_year;
  const std::size_t cells = std::size_t(stack.geo.ncols) * stack.geo.nrows;

  for (int month = 1; month <= 12; ++month) {
    MonthClimatology& mc = clim.table.months[std::size_t(month - 1)];
    std::vector<double> cell_sum(cells, 0.0);
    std::vector<int> cell_n(cells, 0);
    for (int year = start_year; year <= end_year; ++year) {
      MonthlyTotal mt;
      try {
        mt = monthly_total(stack, year, month);
      } catch (const EmptyPeriod&) {
        mc.excluded_years.push_back(year);
        continue;
      }
      double region;
      try {
        region = region_mean(mt.total);
      } catch (const EmptyMask&) {
        mc.excluded_years.push_back(year);  // coverage exists but no valid cell
        continue;
      }
      mc.per_year.push_back(YearValue{year, region});
      for (std::size_t c = 0; c < cells; ++c) {
        if (!mt.total.is_valid(mt.total.values[c])) continue;
        cell_sum[c] += mt.total.values[c];
        ++cell_n[c];
      }
    }
    if (mc.per_year.empty()) {
      throw EmptyPeriod("no year in " + std::to_string(start_year) + ".." +
                        std::to_string(end_year) + " has data for month " +
                        std::to_string(month));
    }
    double sum = 0.0;
    for (const YearValue& yv : mc.per_year) sum += yv.value;
    mc.mean_mm = sum / double(mc.per_year.size());

    Raster& mean_raster = clim.cell_means[std::size_t(month - 1)];
    mean_raster = make_raster(stack.geo, 0.0, -9999.0, Units::Millimeters);
    for (std::size_t c = 0; c < cells; ++c) {
      mean_raster.values[c] =
          cell_n[c] > 0 ? cell_sum[c] / cell_n[c] : mean_raster.nodata;
    }
  }
  return clim;
}

Raster annual_mean(const DailyStack& stack, int start_year, int end_year) {
  if (start_year > end_year) {
    throw ParamError("start_year " + std::to_string(start_year) + " after end_year " +
                     std::to_string(end_year));
  }
  const std::size_t cells = std::size_t(stack.geo.ncols) * stack.geo.nrows;
  std::vector<double> cell_sum(cells, 0.0);
  std::vector<int> cell_n(cells, 0);
  bool any_year = false;
  for (int year = start_year; year <= end_year; ++year) {
    std::vector<double> year_total(cells, 0.0);
    std::vector<char> invalid(cells, 0);
    bool has_layers = false;
    for (std::size_t i = 0; i < stack.dates.size(); ++i) {
      if (stack.dates[i].year != year) continue;
      has_layers = true;
      const Raster& layer = stack.layers[i];
      for (std::size_t c = 0; c < cells; ++c) {
        if (!layer.is_valid(layer.values[c])) {
          invalid[c] = 1;
        } else {
          year_total[c] += layer.values[c];
        }
      }
    }
    if (!has_layers) continue;
    any_year = true;
    for (std::size_t c = 0; c < cells; ++c) {
      if (invalid[c]) continue;
      cell_sum[c] += year_total[c];
      ++cell_n[c];
    }
  }
  if (!any_year) {
    throw EmptyPeriod("no year in " + std::to_string(start_year) + ".." +
                      std::to_string(end_year) + " has daily layers");
  }
  Raster out = make_raster(stack.geo, 0.0, -9999.0, Units::Millimeters);
  for (std::size_t c = 0; c < cells; ++c) {
    out.values[c] = cell_n[c] > 0 ? cell_sum[c] / cell_n[c] : out.nodata;
  }
  return out;
}

namespace {

/// Even-odd crossing test for one ring. A horizontal ray runs toward +x;
/// the half-open straddle test (y1 > py) != (y2 > py) counts lower edges
/// and skips upper ones, so edge-sharing polygons partition cells.
bool ring_crossings_odd(const Ring& ring, double px, double py) {
  bool odd = false;
  for (std::size_t i = 1; i < ring.size(); ++i) {
    const double x1 = ring[i - 1].x, y1 = ring[i - 1].y;
    const double x2 = ring[i].x, y2 = ring[i].y;
    if ((y1 > py) == (y2 > py)) continue;
    const double x_cross = x1 + (x2 - x1) * (py - y1) / (y2 - y1);
    if (px < x_cross) odd = !odd;
  }
  return odd;
}

bool point_in_polygon(const Polygon& poly, double px, double py) {
  // Even-odd over all rings: holes flip the parity back to outside.
  bool inside = ring_crossings_odd(poly.outer, px, py);
  for (const Ring& hole : poly.holes) {
    if (ring_crossings_odd(hole, px, py)) inside = !inside;
  }
  return inside;
}

}  // namespace

Raster rasterize_polygon(const PolygonSet& poly, const GridGeo& geo,
                         std::vector<std::string>* warnings) {
  validate(poly);
  Raster mask = make_raster(geo, 0.0, -9999.0, Units::Label);
  long long covered = 0;
  for (int row = 0; row < geo.nrows; ++row) {
    const double py = row_center_y(geo, row);
    for (int col = 0; col < geo.ncols; ++col) {
      const double px = col_center_x(geo, col);
      for (const Polygon& p : poly.polygons) {
        if (point_in_polygon(p, px, py)) {
          mask.at(row, col) = 1.0;
          ++covered;
          break;
        }
      }
    }
  }
  if (covered == 0 && warnings) {
    warnings->push_back("polygon '" + poly.id + "' covers no cell center; mask is empty");
  }
  return mask;
}

double zonal_mean(const Raster& r, const Raster& mask, bool latitude_weighting) {
  if (!(r.geo == mask.geo)) {
    throw GridMismatch("raster and mask grids are not congruent");
  }
  const bool weighted = latitude_weighting && r.geo.crs_kind == CrsKind::Geographic;
  double pivot = 0.0;
  bool have_pivot = false;
  double wsum = 0.0, dev = 0.0;
  for (int row = 0; row < r.geo.nrows; ++row) {
    const double w =
        weighted ? std::cos(row_center_y(r.geo, row) * std::numbers::pi / 180.0) : 1.0;
    for (int col = 0; col < r.geo.ncols; ++col) {
      if (!mask.valid_at(row, col) || mask.at(row, col) != 1.0) continue;
      const double v = r.at(row, col);
      if (!r.is_valid(v)) continue;
      // Accumulating deviations from the first valid value keeps the
      // zonal mean of a constant field exactly that constant.
      if (!have_pivot) {
        pivot = v;
        have_pivot = true;
      }
      wsum += w;
      dev += w * (v - pivot);
    }
  }
  if (!have_pivot) throw EmptyMask("no valid masked cells");
  return pivot + dev / wsum;
}

}  // namespace resext
