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

#ifndef RESEXT_RAINFALL_HPP_
#define RESEXT_RAINFALL_HPP_

#include <array>
#include <string>
#include <vector>

#include "resext/polygon.hpp"
#include "resext/raster.hpp"

namespace resext {

/// Daily precipitation layers sharing one grid, sorted by date.
struct DailyStack {
  GridGeo geo;
  std::vector<Date> dates;    // strictly increasing
  std::vector<Raster> layers; // parallel to dates, MillimetersPerDay
  std::vector<Date> gaps;     // calendar days absent between first and last date
};

/// Loads every YYYY-MM-DD.asc file in a directory into a sorted stack.
/// Files with other extensions are ignored; an .asc file whose stem is not
/// a date is a ParseError. Missing days are permitted and recorded in
/// `gaps`. Throws EmptyInput for a directory with no .asc files,
/// GridMismatch (naming both files) when grids differ, IoError for an
/// unreadable directory.
DailyStack load_stack(const std::string& dir);

/// Per-cell monthly accumulation over the month's available layers.
struct MonthlyTotal {
  Raster total;          // Millimeters; nodata where any contributing day is nodata
  int days_present = 0;  // layers that contributed
  int days_in_month = 0; // calendar length of the month
  double coverage() const { return double(days_present) / double(days_in_month); }
};

/// Sums the month's daily layers cellwise in date order (fixed
/// left-to-right summation keeps results bit-reproducible). A cell is
/// nodata if any contributing layer is nodata there. Throws EmptyPeriod
/// when the stack holds no layer in that month, ParamError for a bad month.
MonthlyTotal monthly_total(const DailyStack& stack, int year, int month);

struct YearValue {
  int year = 0;
  double value = 0.0; // region-mean monthly total, mm
};

/// One month's climatology over the analysis region (the whole grid):
/// the per-year region means, their average, and the years that had no
/// coverage for this month.
struct MonthClimatology {
  double mean_mm = 0.0;
  std::vector<YearValue> per_year;
  std::vector<int> excluded_years;
};

struct ClimatologyTable {
  int start_year = 0;
  int end_year = 0;
  std::array<MonthClimatology, 12> months;
};

/// Per-cell 12-layer climatology plus the region summary table.
struct Climatology {
  /// cell_means[m-1]: mean over contributing years of the month-m total;
  /// a cell's nodata years are excluded cellwise, and the cell is nodata
  /// only when no year was valid there.
  std::array<Raster, 12> cell_means;
  ClimatologyTable table;
};

/// Climatology of monthly totals over [start_year, end_year]. Region
/// scalars are spatial means (cos-latitude weighted on Geographic grids);
/// the table's mean_mm averages the per-year scalars. Years with zero
/// coverage for a month are excluded and recorded; a month no year covers
/// throws EmptyPeriod tagged with the month.
Climatology monthly_climatology(const DailyStack& stack, int start_year, int end_year);

/// Per-cell mean over years of the annual daily-layer total. Years with
/// no layers are skipped; a cell's nodata years are excluded cellwise.
/// Throws EmptyPeriod when no year in the period has any layer.
Raster annual_mean(const DailyStack& stack, int start_year, int end_year);

/// Burns the polygons into a 0/1 Label raster: a cell is 1 iff its center
/// lies inside (even-odd rule; holes subtract; multiple polygons union).
/// Points exactly on an edge follow the half-open scanline convention
/// (inside iff the edge is a lower edge), so two polygons sharing an edge
/// never both claim a cell. A polygon covering no cell center yields an
/// all-zero raster and a warning appended to `warnings` if given.
Raster rasterize_polygon(const PolygonSet& poly, const GridGeo& geo,
                         std::vector<std::string>* warnings = nullptr);

/// Mean of r over mask==1 cells, excluding nodata. With
/// latitude_weighting on a Geographic grid, cells weigh proportionally to
/// cos(center latitude). Constant fields return the constant exactly
/// under any weighting. Throws GridMismatch for incongruent grids,
/// EmptyMask when no masked valid cell exists.
double zonal_mean(const Raster& r, const Raster& mask, bool latitude_weighting = true);

}  // namespace resext

#endif  // RESEXT_RAINFALL_HPP_
