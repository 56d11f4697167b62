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
#include <cmath>
#include <vector>

#include "resext/errors.hpp"
#include "resext/raster.hpp"
#include "resext/rng.hpp"
#include "resext/speckle.hpp"

using namespace resext;

namespace {

Raster speckled_field(int ncols, int nrows, double mean, double looks, Rng& rng) {
  GridGeo geo{ncols, nrows, 0.0, 0.0, 10.0, CrsKind::ProjectedMeters};
  Raster r = make_raster(geo, 0.0, -9999.0, Units::LinearPower);
  for (double& v : r.values) v = mean * rng.unit_mean_gamma(looks);
  return r;
}

double sample_mean(const Raster& r) {
  double sum = 0;
  std::size_t n = 0;
  for (double v : r.values) {
    if (!r.is_valid(v)) continue;
    sum += v;
    ++n;
  }
  return sum / double(n);
}

double sample_variance(const Raster& r) {
  const double m = sample_mean(r);
  double ss = 0;
  std::size_t n = 0;
  for (double v : r.values) {
    if (!r.is_valid(v)) continue;
    ss += (v - m) * (v - m);
    ++n;
  }
  return ss / double(n);
}

}  // namespace

TEST_CASE("refined lee: parameter and unit validation") {
  GridGeo geo{8, 8, 0, 0, 10, CrsKind::ProjectedMeters};
  Raster linear = make_raster(geo, 1.0, -9999.0, Units::LinearPower);
  Raster db = make_raster(geo, 0.0, -9999.0, Units::Decibel);

  CHECK_THROWS_AS(refined_lee(db, SpeckleParams{}), UnitsError);
  CHECK_THROWS_AS(refined_lee(linear, SpeckleParams{6, 4.4, 9}), ParamError);
  CHECK_THROWS_AS(refined_lee(linear, SpeckleParams{3, 4.4, 9}), ParamError);
  CHECK_THROWS_AS(refined_lee(linear, SpeckleParams{7, 0.0, 9}), ParamError);
  CHECK_THROWS_AS(refined_lee(linear, SpeckleParams{7, -1.0, 9}), ParamError);
  CHECK_THROWS_AS(refined_lee(linear, SpeckleParams{7, 4.4, 0}), ParamError);
  CHECK_NOTHROW(refined_lee(linear, SpeckleParams{5, 1.0, 1}));
}

TEST_CASE("refined lee: constant fields are exact fixed points") {
  GridGeo geo{20, 15, 0, 0, 10, CrsKind::ProjectedMeters};
  for (double c : {5.0, 0.1 + 0.2, 3.14159265358979, 1e-7}) {
    Raster r = make_raster(geo, c, -9999.0, Units::LinearPower);
    Raster out = refined_lee(r);
    CHECK(out.values == r.values);  // bitwise identical
  }
}

TEST_CASE("refined lee: nodata passes through, insufficient support passes through") {
  GridGeo geo{9, 9, 0, 0, 10, CrsKind::ProjectedMeters};
  Raster r = make_raster(geo, -9999.0, -9999.0, Units::LinearPower);
  r.at(4, 4) = 2.5;  // single valid pixel in a sea of nodata
  Raster out = refined_lee(r, SpeckleParams{7, 4.4, 9});
  CHECK(out.values == r.values);

  // A fully valid grid smaller than any directional half-window also
  // passes through when min_valid cannot be met.
  GridGeo tiny{3, 3, 0, 0, 10, CrsKind::ProjectedMeters};
  Rng rng(31u);
  Raster t = make_raster(tiny, 0.0, -9999.0, Units::LinearPower);
  for (double& v : t.values) v = rng.unit_mean_gamma(4.4);
  Raster tout = refined_lee(t, SpeckleParams{7, 4.4, 9});
  CHECK(tout.values == t.values);
}

TEST_CASE("refined lee: variance reduction and mean preservation on homogeneous fields") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    Raster in = speckled_field(256, 256, 1.0, 4.4, rng);
    Raster out = refined_lee(in);
    const double vin = sample_variance(in);
    const double vout = sample_variance(out);
    CHECK(vout < vin);          // strict reduction
    CHECK(vout <= 0.5 * vin);   // at least halved at L=4.4, window 7
    CHECK(std::abs(sample_mean(out) - sample_mean(in)) / sample_mean(in) <= 0.01);
  }
}

TEST_CASE("refined lee: step edge stays within one pixel") {
  const int size = 128;
  GridGeo geo{size, size, 0, 0, 10, CrsKind::ProjectedMeters};
  Rng rng(77u);
  Raster in = make_raster(geo, 0.0, -9999.0, Units::LinearPower);
  for (int row = 0; row < size; ++row) {
    for (int col = 0; col < size; ++col) {
      const double mean = col < size / 2 ? 0.01 : 1.0;
      in.at(row, col) = mean * rng.unit_mean_gamma(4.4);
    }
  }
  Raster out = refined_lee(in);
  const double midpoint = (0.01 + 1.0) / 2.0;
  int crossing = -1;
  for (int col = 0; col < size; ++col) {
    double sum = 0;
    for (int row = 0; row < size; ++row) sum += out.at(row, col);
    if (sum / size > midpoint) {
      crossing = col;
      break;
    }
  }
  REQUIRE(crossing >= 0);
  CHECK(std::abs(crossing - size / 2) <= 1);
}

TEST_CASE("refined lee: changing one pixel only affects a window radius") {
  GridGeo geo{40, 40, 0, 0, 10, CrsKind::ProjectedMeters};
  Rng rng(5u);
  Raster a = make_raster(geo, 0.0, -9999.0, Units::LinearPower);
  for (double& v : a.values) v = 0.5 + rng.uniform();
  Raster b = a;
  b.at(20, 20) = 5.0;

  Raster out_a = refined_lee(a);
  Raster out_b = refined_lee(b);
  const int radius = (7 - 1) / 2;
  for (int row = 0; row < 40; ++row) {
    for (int col = 0; col < 40; ++col) {
      const int dist = std::max(std::abs(row - 20), std::abs(col - 20));
      if (dist > radius) {
        CHECK(out_a.at(row, col) == out_b.at(row, col));
      }
    }
  }
}

TEST_CASE("refined lee: output bounded by the valid window extremes") {
  Rng rng(11u);
  Raster in = speckled_field(64, 64, 2.0, 4.4, rng);
  // Punch in some nodata; the bound below only considers valid pixels, so
  // any filter that consumed the sentinel would fall outside it.
  for (int i = 0; i < 200; ++i) {
    in.values[rng.below(in.values.size())] = in.nodata;
  }
  Raster out = refined_lee(in);
  for (int row = 0; row < 64; ++row) {
    for (int col = 0; col < 64; ++col) {
      if (!in.valid_at(row, col)) {
        CHECK(out.at(row, col) == in.at(row, col));  // nodata passthrough
        continue;
      }
      double lo = in.at(row, col), hi = lo;
      for (int dy = -3; dy <= 3; ++dy) {
        for (int dx = -3; dx <= 3; ++dx) {
          const int r = row + dy, c = col + dx;
          if (r < 0 || r >= 64 || c < 0 || c >= 64) continue;
          if (!in.valid_at(r, c)) continue;
          lo = std::min(lo, in.at(r, c));
          hi = std::max(hi, in.at(r, c));
        }
      }
      CHECK(out.at(row, col) >= lo - 1e-12 * std::abs(lo));
      CHECK(out.at(row, col) <= hi + 1e-12 * std::abs(hi));
    }
  }
}

TEST_CASE("refined lee: determinism") {
  Rng rng(123u);
  Raster in = speckled_field(50, 50, 1.0, 4.4, rng);
  Raster a = refined_lee(in);
  Raster b = refined_lee(in);
  CHECK(a.values == b.values);
}
