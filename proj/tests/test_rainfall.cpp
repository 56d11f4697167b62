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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "resext/ascii_grid.hpp"
#include "resext/date.hpp"
#include "resext/errors.hpp"
#include "resext/rainfall.hpp"
#include "resext/raster.hpp"
#include "resext/rng.hpp"
#include "resext/synth.hpp"
#include "test_util.hpp"

using namespace resext;
using namespace testutil;

namespace {

GridGeo rain_geo(int nrows = 4, int ncols = 5) {
  return GridGeo{ncols, nrows, 30.0, -2.0, 0.05, CrsKind::Geographic};
}

/// In-memory daily stack with one constant layer per day of [start, end].
DailyStack constant_stack(const GridGeo& geo, const Date& start, const Date& end,
                          double mm_per_day) {
  DailyStack stack;
  stack.geo = geo;
  for (Date d = start; d <= end; d = next_day(d)) {
    stack.dates.push_back(d);
    stack.layers.push_back(make_raster(geo, mm_per_day, -9999.0,
                                       Units::MillimetersPerDay));
  }
  return stack;
}

DailyStack random_stack(Rng& rng, const GridGeo& geo, const Date& start,
                        const Date& end, double nodata_prob = 0.0) {
  DailyStack stack;
  stack.geo = geo;
  for (Date d = start; d <= end; d = next_day(d)) {
    Raster layer = make_raster(geo, 0.0, -9999.0, Units::MillimetersPerDay);
    for (double& v : layer.values) {
      v = rng.uniform() < nodata_prob ? layer.nodata : rng.uniform() * 25.0;
    }
    stack.dates.push_back(d);
    stack.layers.push_back(std::move(layer));
  }
  return stack;
}

Raster ones_mask(const GridGeo& geo) {
  return make_raster(geo, 1.0, -9999.0, Units::Label);
}

}  // namespace

TEST_CASE("load_stack: sorted stack, ignored extensions, gap bookkeeping") {
  TempDir tmp;
  GridGeo geo = rain_geo();
  // Written out of order; loader must sort. 2019-01-03 is missing.
  for (const char* name : {"2019-01-04", "2019-01-01", "2019-01-02"}) {
    Raster layer = make_raster(geo, 1.5, -9999.0, Units::MillimetersPerDay);
    write_ascii_grid(layer, tmp.path() / (std::string(name) + ".asc"));
  }
  write_file((tmp.path() / "README.txt").string(), "not a grid\n");

  DailyStack stack = load_stack(tmp.path().string());
  REQUIRE(stack.dates.size() == 3);
  CHECK(stack.dates[0] == Date{2019, 1, 1});
  CHECK(stack.dates[1] == Date{2019, 1, 2});
  CHECK(stack.dates[2] == Date{2019, 1, 4});
  CHECK(stack.gaps == std::vector<Date>{Date{2019, 1, 3}});
  CHECK(stack.geo == geo);
  CHECK(stack.layers[0].units == Units::MillimetersPerDay);
  CHECK(stack.geo.crs_kind == CrsKind::Geographic);
}

TEST_CASE("load_stack: error cases carry the offending file names") {
  TempDir tmp;
  GridGeo geo = rain_geo();

  SUBCASE("empty directory") {
    CHECK_THROWS_AS(load_stack(tmp.path().string()), EmptyInput);
  }
  SUBCASE("missing directory") {
    CHECK_THROWS_AS(load_stack((tmp.path() / "nope").string()), IoError);
  }
  SUBCASE("non-date stem") {
    write_ascii_grid(make_raster(geo, 1.0, -9999.0, Units::MillimetersPerDay),
                     tmp.path() / "grid_final.asc");
    try {
      load_stack(tmp.path().string());
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("grid_final") != std::string::npos);
    }
  }
  SUBCASE("geometry mismatch names both files") {
    write_ascii_grid(make_raster(geo, 1.0, -9999.0, Units::MillimetersPerDay),
                     tmp.path() / "2019-01-01.asc");
    write_ascii_grid(make_raster(rain_geo(4, 9), 1.0, -9999.0, Units::MillimetersPerDay),
                     tmp.path() / "2019-01-02.asc");
    try {
      load_stack(tmp.path().string());
      FAIL("expected GridMismatch");
    } catch (const GridMismatch& e) {
      const std::string msg = e.what();
      CHECK(msg.find("2019-01-01") != std::string::npos);
      CHECK(msg.find("2019-01-02") != std::string::npos);
    }
  }
}

TEST_CASE("monthly_total: constant closed form and coverage") {
  GridGeo geo = rain_geo();
  DailyStack june = constant_stack(geo, Date{2019, 6, 1}, Date{2019, 6, 30}, 1.0);
  MonthlyTotal t = monthly_total(june, 2019, 6);
  CHECK(t.days_present == 30);
  CHECK(t.days_in_month == 30);
  CHECK(t.coverage() == 1.0);
  CHECK(t.total.units == Units::Millimeters);
  for (double v : t.total.values) CHECK(v == 30.0);  // exact, not approx

  DailyStack zero = constant_stack(geo, Date{2019, 6, 1}, Date{2019, 6, 30}, 0.0);
  for (double v : monthly_total(zero, 2019, 6).total.values) CHECK(v == 0.0);

  // Missing days shrink coverage but still total the present layers.
  DailyStack partial = constant_stack(geo, Date{2019, 6, 1}, Date{2019, 6, 10}, 2.0);
  MonthlyTotal p = monthly_total(partial, 2019, 6);
  CHECK(p.days_present == 10);
  CHECK(p.coverage() == doctest::Approx(10.0 / 30.0));
  for (double v : p.total.values) CHECK(v == 20.0);

  CHECK_THROWS_AS(monthly_total(june, 2019, 7), EmptyPeriod);
  CHECK_THROWS_AS(monthly_total(june, 2019, 13), ParamError);
}

TEST_CASE("monthly_total: bitwise equality with per-cell re-summation") {
  Rng rng(505u);
  GridGeo geo = rain_geo(6, 7);
  for (int trial = 0; trial < 10; ++trial) {
    DailyStack stack = random_stack(rng, geo, Date{2020, 2, 1}, Date{2020, 2, 29},
                                    trial % 2 == 0 ? 0.05 : 0.0);
    MonthlyTotal t = monthly_total(stack, 2020, 2);
    CHECK(t.days_present == 29);
    for (std::size_t i = 0; i < t.total.values.size(); ++i) {
      // Oracle: independent left-to-right re-summation in date order.
      double sum = 0.0;
      bool poisoned = false;
      for (const Raster& layer : stack.layers) {
        if (!layer.is_valid(layer.values[i])) {
          poisoned = true;
          break;
        }
        sum += layer.values[i];
      }
      if (poisoned) {
        CHECK_FALSE(t.total.is_valid(t.total.values[i]));
      } else {
        CHECK(t.total.values[i] == sum);  // bitwise
      }
    }
  }
}

TEST_CASE("monthly_total: additivity over merged stacks") {
  Rng rng(71u);
  GridGeo geo = rain_geo();
  DailyStack a = random_stack(rng, geo, Date{2019, 3, 1}, Date{2019, 3, 31});
  DailyStack b = random_stack(rng, geo, Date{2019, 3, 1}, Date{2019, 3, 31});
  DailyStack merged = a;
  for (std::size_t d = 0; d < merged.layers.size(); ++d) {
    for (std::size_t i = 0; i < merged.layers[d].values.size(); ++i) {
      merged.layers[d].values[i] += b.layers[d].values[i];
    }
  }
  Raster ta = monthly_total(a, 2019, 3).total;
  Raster tb = monthly_total(b, 2019, 3).total;
  Raster tm = monthly_total(merged, 2019, 3).total;
  for (std::size_t i = 0; i < tm.values.size(); ++i) {
    CHECK(tm.values[i] == doctest::Approx(ta.values[i] + tb.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("climatology: two-point mean, identity, exclusions") {
  GridGeo geo = rain_geo();
  // 2019 at 1 mm/day, 2020 at 2 mm/day, both full years except that 2020
  // is missing June entirely.
  DailyStack stack = constant_stack(geo, Date{2019, 1, 1}, Date{2019, 12, 31}, 1.0);
  DailyStack y2 = constant_stack(geo, Date{2020, 1, 1}, Date{2020, 5, 31}, 2.0);
  DailyStack y2b = constant_stack(geo, Date{2020, 7, 1}, Date{2020, 12, 31}, 2.0);
  auto append = [&](const DailyStack& more) {
    stack.dates.insert(stack.dates.end(), more.dates.begin(), more.dates.end());
    stack.layers.insert(stack.layers.end(), more.layers.begin(), more.layers.end());
  };
  append(y2);
  append(y2b);

  Climatology c = monthly_climatology(stack, 2019, 2020);
  // July: 31 mm and 62 mm -> 46.5.
  const MonthClimatology& july = c.table.months[6];
  CHECK(july.mean_mm == 46.5);
  REQUIRE(july.per_year.size() == 2);
  CHECK(july.per_year[0].year == 2019);
  CHECK(july.per_year[0].value == 31.0);
  CHECK(july.per_year[1].value == 62.0);
  CHECK(july.excluded_years.empty());
  for (double v : c.cell_means[6].values) CHECK(v == 46.5);

  // June exists only in 2019; 2020 is excluded and reported.
  const MonthClimatology& june = c.table.months[5];
  CHECK(june.mean_mm == 30.0);
  REQUIRE(june.per_year.size() == 1);
  CHECK(june.per_year[0].year == 2019);
  CHECK(june.excluded_years == std::vector<int>{2020});
  for (double v : c.cell_means[5].values) CHECK(v == 30.0);

  // A month no year covers fails the call, tagged with the month.
  DailyStack june_only = constant_stack(geo, Date{2019, 6, 1}, Date{2019, 6, 30}, 1.0);
  try {
    monthly_climatology(june_only, 2019, 2019);
    FAIL("expected EmptyPeriod");
  } catch (const EmptyPeriod& e) {
    CHECK(std::string(e.what()).find("month") != std::string::npos);
  }

  // Single-year climatology is that year's totals.
  DailyStack solo = constant_stack(geo, Date{2019, 1, 1}, Date{2019, 12, 31}, 1.5);
  Climatology cs = monthly_climatology(solo, 2019, 2019);
  Raster june_total = monthly_total(solo, 2019, 6).total;
  CHECK(cs.cell_means[5].values == june_total.values);
  CHECK(cs.table.months[5].mean_mm == doctest::Approx(45.0));
  CHECK(cs.table.months[6].mean_mm == doctest::Approx(46.5));
}

TEST_CASE("climatology: matches brute-force re-aggregation") {
  Rng rng(31u);
  GridGeo geo = rain_geo(5, 4);
  DailyStack stack = random_stack(rng, geo, Date{2019, 1, 1}, Date{2020, 12, 31}, 0.02);
  Climatology c = monthly_climatology(stack, 2019, 2020);

  for (int month = 1; month <= 12; ++month) {
    std::vector<Raster> year_totals;
    for (int year : {2019, 2020}) {
      year_totals.push_back(monthly_total(stack, year, month).total);
    }
    const Raster& got = c.cell_means[std::size_t(month - 1)];
    for (std::size_t i = 0; i < got.values.size(); ++i) {
      double sum = 0.0;
      int n = 0;
      for (const Raster& t : year_totals) {
        if (!t.is_valid(t.values[i])) continue;
        sum += t.values[i];
        ++n;
      }
      if (n == 0) {
        CHECK_FALSE(got.is_valid(got.values[i]));
      } else {
        REQUIRE(got.is_valid(got.values[i]));
        CHECK(got.values[i] == doctest::Approx(sum / n).epsilon(1e-12));
        // Climatology bounds: cell mean within that cell's per-year range.
        double lo = 1e300, hi = -1e300;
        for (const Raster& t : year_totals) {
          if (!t.is_valid(t.values[i])) continue;
          lo = std::min(lo, t.values[i]);
          hi = std::max(hi, t.values[i]);
        }
        CHECK(got.values[i] >= lo - 1e-9);
        CHECK(got.values[i] <= hi + 1e-9);
      }
    }
  }
}

TEST_CASE("annual_mean: closed forms and oracle") {
  GridGeo geo = rain_geo();
  // Constant 4 mm/day over the full (non-leap) year 2019.
  DailyStack year = constant_stack(geo, Date{2019, 1, 1}, Date{2019, 12, 31}, 4.0);
  Raster mean = annual_mean(year, 2019, 2019);
  CHECK(mean.units == Units::Millimeters);
  for (double v : mean.values) CHECK(v == 1460.0);  // 4 * 365, exact

  // Two years totalling 1000 and 2000 -> mean 1500.
  DailyStack y1 = constant_stack(geo, Date{2019, 1, 1}, Date{2019, 1, 10}, 100.0);
  DailyStack y2 = constant_stack(geo, Date{2020, 1, 1}, Date{2020, 1, 10}, 200.0);
  y1.dates.insert(y1.dates.end(), y2.dates.begin(), y2.dates.end());
  y1.layers.insert(y1.layers.end(), y2.layers.begin(), y2.layers.end());
  for (double v : annual_mean(y1, 2019, 2020).values) CHECK(v == 1500.0);

  // Years without any layer are skipped, not zero-counted.
  for (double v : annual_mean(y1, 2018, 2021).values) CHECK(v == 1500.0);
  CHECK_THROWS_AS(annual_mean(y1, 2021, 2025), EmptyPeriod);

  // Random stack vs direct per-cell re-summation.
  Rng rng(88u);
  DailyStack rnd = random_stack(rng, geo, Date{2019, 1, 1}, Date{2019, 12, 31});
  Raster got = annual_mean(rnd, 2019, 2019);
  for (std::size_t i = 0; i < got.values.size(); ++i) {
    double sum = 0.0;
    for (const Raster& layer : rnd.layers) sum += layer.values[i];
    CHECK(got.values[i] == sum);  // single year: mean == total, bitwise
  }
}

TEST_CASE("rasterize: center-inclusion squares and holes") {
  // 8x8 grid over [0,8]x[0,8]; polygon [3,5]^2 covers exactly the four
  // cells whose centers are (3.5, 3.5)...(4.5, 4.5).
  GridGeo geo{8, 8, 0.0, 0.0, 1.0, CrsKind::ProjectedMeters};
  PolygonSet set;
  Polygon square;
  square.outer = {{3, 3}, {5, 3}, {5, 5}, {3, 5}, {3, 3}};
  set.polygons.push_back(square);
  Raster mask = rasterize_polygon(set, geo);
  long long ones = 0;
  for (double v : mask.values) ones += v == 1.0 ? 1 : 0;
  CHECK(ones == 4);
  CHECK(mask.at(3, 3) == 1.0);  // row 3 from top: y center 4.5
  CHECK(mask.at(4, 4) == 1.0);
  CHECK(mask.at(2, 3) == 0.0);

  // A hole over one covered cell removes exactly that cell.
  Polygon holed = square;
  holed.holes.push_back({{3.1, 3.1}, {3.9, 3.1}, {3.9, 3.9}, {3.1, 3.9}, {3.1, 3.1}});
  PolygonSet hset;
  hset.polygons.push_back(holed);
  Raster hmask = rasterize_polygon(hset, geo);
  long long hones = 0;
  for (double v : hmask.values) hones += v == 1.0 ? 1 : 0;
  CHECK(hones == 3);
  CHECK(hmask.at(4, 3) == 0.0);  // center (3.5, 3.5) inside the hole

  // Fully-outside polygon: all zeros plus a warning.
  PolygonSet off;
  Polygon far;
  far.outer = {{20, 20}, {21, 20}, {21, 21}, {20, 21}, {20, 20}};
  off.polygons.push_back(far);
  std::vector<std::string> warnings;
  Raster zero = rasterize_polygon(off, geo, &warnings);
  for (double v : zero.values) CHECK(v == 0.0);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("no cell center") != std::string::npos);
}

TEST_CASE("rasterize: agreement with dense even-odd oracle on random convex polygons") {
  Rng rng(2024u);
  GridGeo geo{16, 16, 0.0, 0.0, 1.0, CrsKind::ProjectedMeters};
  for (int trial = 0; trial < 40; ++trial) {
    // Convex polygon: sorted angles around a center.
    const double cx = 2.0 + rng.uniform() * 12.0;
    const double cy = 2.0 + rng.uniform() * 12.0;
    const int nv = 3 + int(rng.below(6));
    std::vector<double> angles;
    for (int i = 0; i < nv; ++i) angles.push_back(rng.uniform() * 2.0 * M_PI);
    std::sort(angles.begin(), angles.end());
    Ring ring;
    for (double a : angles) {
      const double rad = 1.0 + rng.uniform() * 5.0;
      ring.push_back({cx + rad * std::cos(a), cy + rad * std::sin(a)});
    }
    ring.push_back(ring.front());
    PolygonSet set;
    Polygon poly;
    poly.outer = ring;
    set.polygons.push_back(poly);

    Raster mask = rasterize_polygon(set, geo);
    for (int row = 0; row < geo.nrows; ++row) {
      for (int col = 0; col < geo.ncols; ++col) {
        // Oracle: independent even-odd crossing count at the cell center.
        const double px = col_center_x(geo, col);
        const double py = row_center_y(geo, row);
        int crossings = 0;
        for (std::size_t i = 1; i < ring.size(); ++i) {
          const Vertex& a = ring[i - 1];
          const Vertex& b = ring[i];
          if ((a.y > py) != (b.y > py)) {
            const double x_cross = a.x + (py - a.y) / (b.y - a.y) * (b.x - a.x);
            if (px < x_cross) ++crossings;
          }
        }
        CHECK(mask.at(row, col) == (crossings % 2 == 1 ? 1.0 : 0.0));
      }
    }
  }
}

TEST_CASE("rasterize: polygons sharing an edge partition the grid") {
  GridGeo geo{10, 10, 0.0, 0.0, 1.0, CrsKind::ProjectedMeters};
  // Two rectangles splitting [1,9]x[2,8] along x = 5; the shared edge
  // runs straight through the column of centers at x = 5? No: centers
  // are at half-integers, so put the seam on a center column: x = 4.5.
  Polygon left, right;
  left.outer = {{1, 2}, {4.5, 2}, {4.5, 8}, {1, 8}, {1, 2}};
  right.outer = {{4.5, 2}, {9, 2}, {9, 8}, {4.5, 8}, {4.5, 2}};
  PolygonSet ls, rs;
  ls.polygons.push_back(left);
  rs.polygons.push_back(right);
  Raster lm = rasterize_polygon(ls, geo);
  Raster rm = rasterize_polygon(rs, geo);
  long long both = 0, either = 0;
  for (std::size_t i = 0; i < lm.values.size(); ++i) {
    if (lm.values[i] == 1.0 && rm.values[i] == 1.0) ++both;
    if (lm.values[i] == 1.0 || rm.values[i] == 1.0) ++either;
  }
  CHECK(both == 0);  // the half-open rule gives the seam to exactly one side

  // The union of the two halves equals rasterizing the outer rectangle.
  Polygon outer;
  outer.outer = {{1, 2}, {9, 2}, {9, 8}, {1, 8}, {1, 2}};
  PolygonSet os;
  os.polygons.push_back(outer);
  Raster om = rasterize_polygon(os, geo);
  long long outer_ones = 0;
  for (double v : om.values) outer_ones += v == 1.0 ? 1 : 0;
  CHECK(either == outer_ones);
}

TEST_CASE("zonal_mean: constants, equal weights, and errors") {
  GridGeo geo = rain_geo(3, 3);
  Raster mask = ones_mask(geo);

  // Constant field -> the constant, exactly, mask and weighting agnostic.
  for (double c : {0.0, 17.25, 0.1 + 0.2}) {
    Raster r = make_raster(geo, c, -9999.0, Units::Millimeters);
    CHECK(zonal_mean(r, mask, true) == c);
    CHECK(zonal_mean(r, mask, false) == c);
  }

  // Two unmasked cells, projected grid: plain average.
  GridGeo pg{2, 1, 0.0, 0.0, 10.0, CrsKind::ProjectedMeters};
  Raster two = make_raster(pg, {10.0, 20.0}, -9999.0, Units::Millimeters);
  Raster m2 = ones_mask(pg);
  CHECK(zonal_mean(two, m2, true) == 15.0);

  // Mask selecting nothing, or only nodata cells, is EmptyMask.
  Raster none = make_raster(geo, 0.0, -9999.0, Units::Label);
  Raster r = make_raster(geo, 5.0, -9999.0, Units::Millimeters);
  CHECK_THROWS_AS(zonal_mean(r, none, true), EmptyMask);
  Raster holey = r;
  for (double& v : holey.values) v = holey.nodata;
  CHECK_THROWS_AS(zonal_mean(holey, mask, true), EmptyMask);

  Raster small = make_raster(pg, 1.0, -9999.0, Units::Millimeters);
  CHECK_THROWS_AS(zonal_mean(small, mask, true), GridMismatch);
}

TEST_CASE("zonal_mean: cos-latitude weights on a meridian strip") {
  // One-column strip with centers at 60, 30, 0 degrees (top to bottom).
  GridGeo geo{1, 3, 10.0, -15.0, 30.0, CrsKind::Geographic};
  CHECK(row_center_y(geo, 0) == 60.0);
  CHECK(row_center_y(geo, 2) == 0.0);

  Raster r = make_raster(geo, {40.0, 999.0, 10.0}, -9999.0, Units::Millimeters);
  Raster mask = make_raster(geo, {1.0, 0.0, 1.0}, -9999.0, Units::Label);

  // Hand-computed: weights cos(60) = 0.5 and cos(0) = 1.0:
  // (0.5*40 + 1.0*10) / 1.5 = 20.
  CHECK(zonal_mean(r, mask, true) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(zonal_mean(r, mask, false) == 25.0);

  // All three cells: weights 0.5, cos(30), 1.0.
  Raster full = ones_mask(geo);
  const double w30 = std::cos(30.0 * M_PI / 180.0);
  const double expected = (0.5 * 40.0 + w30 * 999.0 + 1.0 * 10.0) / (1.5 + w30);
  CHECK(zonal_mean(r, full, true) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("zonal_mean: synthetic rain stack recovers the pattern") {
  GridGeo geo = rain_geo(6, 6);
  std::array<double, 12> pattern{10, 20, 40, 80, 160, 320, 320, 160, 80, 40, 20, 10};
  DailyStack stack = gen_rain_stack(geo, Date{2019, 1, 1}, Date{2019, 12, 31},
                                    pattern, 99u, 0.0);
  Raster mask = ones_mask(geo);
  for (int month = 1; month <= 12; ++month) {
    MonthlyTotal t = monthly_total(stack, 2019, month);
    // noise_shape = 0: every day is exactly pattern/days, so the monthly
    // region mean must equal the pattern entry up to summation rounding.
    CHECK(zonal_mean(t.total, mask, true) ==
          doctest::Approx(pattern[std::size_t(month - 1)]).epsilon(1e-12));
  }
}
