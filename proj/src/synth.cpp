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

#include "resext/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "resext/errors.hpp"
#include "resext/rng.hpp"

namespace resext {

void validate(const SynthSceneSpec& spec) {
  validate(spec.geo);
  if (spec.geo.crs_kind != CrsKind::ProjectedMeters) {
    throw CrsError("synthetic scenes need a projected metric grid");
  }
  validate(spec.water);
  if (!(spec.water_db_vv < spec.land_db_vv) || !(spec.water_db_vh < spec.land_db_vh)) {
    throw ParamError("synthetic scene needs positive contrast: water class means must "
                     "be below land class means in both bands");
  }
  if (!(spec.looks > 0)) {
    throw ParamError("looks must be positive, got " + std::to_string(spec.looks));
  }
  if (spec.noise_blobs < 0) {
    throw ParamError("noise_blobs must be >= 0, got " + std::to_string(spec.noise_blobs));
  }
  if (spec.max_blob_pixels < 1) {
    throw ParamError("max_blob_pixels must be >= 1, got " +
                     std::to_string(spec.max_blob_pixels));
  }
}

SynthScene gen_scene(const SynthSceneSpec& spec) {
  validate(spec);

  SynthScene out;
  out.true_mask = rasterize_polygon(spec.water, spec.geo);
  long long water_cells = 0;
  for (double v : out.true_mask.values) water_cells += v == 1.0 ? 1 : 0;
  out.true_area_km2 = double(water_cells) * spec.geo.cellsize * spec.geo.cellsize / 1e6;

  const double water_vv = std::pow(10.0, spec.water_db_vv / 10.0);
  const double land_vv = std::pow(10.0, spec.land_db_vv / 10.0);
  const double water_vh = std::pow(10.0, spec.water_db_vh / 10.0);
  const double land_vh = std::pow(10.0, spec.land_db_vh / 10.0);

  Rng rng(spec.seed);
  auto base_field = [&](double water_mean, double land_mean) {
    Raster band = make_raster(spec.geo, 0.0, -9999.0, Units::LinearPower);
    for (std::size_t i = 0; i < band.values.size(); ++i) {
      const double mean = out.true_mask.values[i] == 1.0 ? water_mean : land_mean;
      band.values[i] = mean * rng.unit_mean_gamma(spec.looks);
    }
    return band;
  };
  out.scene.vv = base_field(water_vv, land_vv);
  out.scene.vh = base_field(water_vh, land_vh);

  // False-water islands on land, small enough for the size filter to kill.
  // Blobs keep a shore buffer so they stay genuine islands: without it a
  // blob hugging the reservoir edge merges into the main component (or
  // gets bridged to it by despeckle blooming) and corrupts its area.
  constexpr int kShoreBuffer = 8;  // Chebyshev distance, in cells
  const int nrows = spec.geo.nrows;
  const int ncols = spec.geo.ncols;
  std::vector<char> near_water(out.true_mask.cell_count(), 0);
  {
    // Separable dilation of the true mask by kShoreBuffer.
    std::vector<char> row_hit(out.true_mask.cell_count(), 0);
    for (int row = 0; row < nrows; ++row) {
      for (int col = 0; col < ncols; ++col) {
        if (out.true_mask.values[std::size_t(row) * ncols + col] != 1.0) continue;
        const int lo = std::max(0, col - kShoreBuffer);
        const int hi = std::min(ncols - 1, col + kShoreBuffer);
        for (int c = lo; c <= hi; ++c) row_hit[std::size_t(row) * ncols + c] = 1;
      }
    }
    for (int row = 0; row < nrows; ++row) {
      for (int col = 0; col < ncols; ++col) {
        if (!row_hit[std::size_t(row) * ncols + col]) continue;
        const int lo = std::max(0, row - kShoreBuffer);
        const int hi = std::min(nrows - 1, row + kShoreBuffer);
        for (int r = lo; r <= hi; ++r) near_water[std::size_t(r) * ncols + col] = 1;
      }
    }
  }
  std::vector<char> in_blob(out.true_mask.cell_count(), 0);
  auto is_land = [&](int row, int col) {
    const std::size_t i = std::size_t(row) * ncols + col;
    return !near_water[i] && !in_blob[i];
  };
  auto paint = [&](int row, int col) {
    const std::size_t i = std::size_t(row) * ncols + col;
    in_blob[i] = 1;
    out.scene.vv.values[i] = water_vv * rng.unit_mean_gamma(spec.looks);
    out.scene.vh.values[i] = water_vh * rng.unit_mean_gamma(spec.looks);
  };
  constexpr int kNeighbors[4][2] = {{-1, 0}, {0, 1}, {1, 0}, {0, -1}};  // N, E, S, W
  for (int blob = 0; blob < spec.noise_blobs; ++blob) {
    const int size = 1 + int(rng.below(std::uint64_t(spec.max_blob_pixels)));
    int seed_row = -1, seed_col = -1;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const int row = int(rng.below(std::uint64_t(nrows)));
      const int col = int(rng.below(std::uint64_t(ncols)));
      if (is_land(row, col)) {
        seed_row = row;
        seed_col = col;
        break;
      }
    }
    if (seed_row < 0) break;  // grid is essentially all water; give up
    std::vector<std::pair<int, int>> pixels{{seed_row, seed_col}};
    paint(seed_row, seed_col);
    while (int(pixels.size()) < size) {
      bool grown = false;
      for (int attempt = 0; attempt < 16 && !grown; ++attempt) {
        const auto [row, col] = pixels[std::size_t(rng.below(pixels.size()))];
        const auto [dr, dc] = kNeighbors[rng.below(4)];
        const int nr = row + dr, nc = col + dc;
        if (nr < 0 || nr >= nrows || nc < 0 || nc >= ncols || !is_land(nr, nc)) continue;
        pixels.emplace_back(nr, nc);
        paint(nr, nc);
        grown = true;
      }
      if (!grown) break;  // boxed in; accept a smaller blob
    }
  }

  out.scene.date = Date{2019, 1, 1};
  out.scene.reservoir_id = spec.water.id.empty() ? "synthetic" : spec.water.id;
  return out;
}

DailyStack gen_rain_stack(const GridGeo& geo, const Date& start, const Date& end,
                          const std::array<double, 12>& monthly_pattern,
                          std::uint64_t seed, double noise_shape) {
  validate(geo);
  if (geo.crs_kind != CrsKind::Geographic) {
    throw CrsError("synthetic rainfall needs a Geographic grid");
  }
  if (!is_valid_date(start) || !is_valid_date(end)) {
    throw ParamError("invalid stack date bounds");
  }
  if (end < start) throw ParamError("stack end date before start date");
  for (double p : monthly_pattern) {
    if (!(p >= 0)) throw ParamError("monthly pattern must be non-negative");
  }
  if (noise_shape < 0) {
    throw ParamError("noise_shape must be >= 0, got " + std::to_string(noise_shape));
  }

  DailyStack stack;
  stack.geo = geo;
  Rng rng(seed);
  for (Date d = start;; d = next_day(d)) {
    const double daily_mean =
        monthly_pattern[std::size_t(d.month - 1)] / days_in_month(d.year, d.month);
    Raster layer = make_raster(geo, daily_mean, -9999.0, Units::MillimetersPerDay);
    if (noise_shape > 0) {
      for (double& v : layer.values) v = daily_mean * rng.unit_mean_gamma(noise_shape);
    }
    stack.dates.push_back(d);
    stack.layers.push_back(std::move(layer));
    if (!(d < end)) break;
  }
  return stack;
}

}  // namespace resext
