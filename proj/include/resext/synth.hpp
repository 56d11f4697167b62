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

#ifndef RESEXT_SYNTH_HPP_
#define RESEXT_SYNTH_HPP_

#include <array>
#include <cstdint>

#include "resext/polygon.hpp"
#include "resext/rainfall.hpp"
#include "resext/raster.hpp"

namespace resext {

/// Recipe for a synthetic dual-pol SAR scene with known ground truth.
/// Class means are in dB; water must be darker than land in both bands.
struct SynthSceneSpec {
  GridGeo geo{200, 200, 0.0, 0.0, 10.0, CrsKind::ProjectedMeters};
  PolygonSet water;
  double land_db_vv = -8.0;
  double water_db_vv = -20.0;
  double land_db_vh = -14.0;
  double water_db_vh = -26.0;
  double looks = 4.4;        // gamma speckle shape L
  int noise_blobs = 0;       // count of false-water islands on land
  int max_blob_pixels = 24;  // blob sizes are drawn from [1, max_blob_pixels]
  std::uint64_t seed = 0;
};

void validate(const SynthSceneSpec& spec);

struct SynthScene {
  Scene scene;  // LinearPower, both bands speckled
  double true_area_km2 = 0.0;
  Raster true_mask;  // rasterized water polygon (1 = water)
};

/// Deterministic synthetic scene: per pixel, the class mean in linear
/// power times unit-mean gamma speckle of shape `looks`.
///
/// The random stream (one Rng seeded with spec.seed; see rng.hpp for the
/// generator contract) is consumed in this documented order:
///   1. VV base field, row-major, one gamma variate per pixel;
///   2. VH base field, row-major, one gamma variate per pixel;
///   3. per noise blob: size = 1 + below(max_blob_pixels); seed-pixel
///      candidates below(nrows), below(ncols) until an eligible pixel is
///      hit; growth picks below(current blob size) then a 4-neighbor via
///      below(4) in N, E, S, W order, up to 16 rejected picks per added
///      pixel; each accepted pixel then overwrites VV and VH (in that
///      order) with fresh water-class draws.
/// Eligible blob pixels keep a Chebyshev distance > 8 cells from the true
/// mask, so blobs stay genuine islands: they never merge with (or get
/// despeckle-bridged to) the main water body, and true_area is unaffected.
/// Throws ParamError for zero/negative contrast or bad parameters,
/// CrsError unless the grid is ProjectedMeters.
SynthScene gen_scene(const SynthSceneSpec& spec);

/// Deterministic daily rainfall stack on [start, end]. Each day's cell
/// value is pattern[month-1]/days_in_month scaled by unit-mean gamma
/// noise of shape `noise_shape`; noise_shape = 0 disables noise (values
/// exactly equal the daily mean). Stream order: days chronologically,
/// cells row-major, one draw per cell (when noise is on).
/// Throws ParamError for negative pattern entries, negative noise_shape,
/// or end < start; CrsError unless the grid is Geographic.
DailyStack gen_rain_stack(const GridGeo& geo, const Date& start, const Date& end,
                          const std::array<double, 12>& monthly_pattern,
                          std::uint64_t seed, double noise_shape = 2.0);

}  // namespace resext

#endif  // RESEXT_SYNTH_HPP_
