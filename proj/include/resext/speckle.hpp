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

#ifndef RESEXT_SPECKLE_HPP_
#define RESEXT_SPECKLE_HPP_

#include "resext/raster.hpp"

namespace resext {

/// Refined Lee filter parameters. The window is partitioned into a 3x3
/// grid of directional sub-means for edge detection; `looks` is the
/// equivalent number of looks L of the intensity data (speckle variance
/// coefficient sigma_v^2 = 1/L); pixels whose selected directional
/// sub-window holds fewer than `min_valid` valid samples pass through.
struct SpeckleParams {
  int window = 7;       // odd, >= 5
  double looks = 4.4;   // > 0
  int min_valid = 9;    // >= 1
};

/// Throws ParamError when a field violates its bound.
void validate(const SpeckleParams& p);

/// Despeckles a linear-power raster with the refined Lee filter.
///
/// For each valid pixel: the window's 3x3 sub-means give eight directional
/// means (N, NE, E, SE, S, SW, W, NW); the axis with the largest absolute
/// gradient between opposing sub-means is the edge normal (ties pick the
/// earliest axis of (N,S), (NE,SW), (E,W), (SE,NW)); within that axis the
/// side whose sub-mean is nearer the center sub-mean is kept (ties pick the
/// direction listed first in the fixed order above). Statistics m, v over
/// the kept half-window (inclusive of the center row/column) then produce
/// out = m + k*(x_c - m) with k = (v - m^2/L) / (v*(1 + 1/L)) clamped to
/// [0, 1], and out = m when v = 0.
///
/// Windows crop at raster edges; nodata pixels pass through unfiltered and
/// never enter any window statistic. Constant fields are exact fixed
/// points. Throws UnitsError unless r is LinearPower (the Lee speckle
/// model is multiplicative on intensity; dB inputs must be converted
/// first), ParamError for invalid parameters.
Raster refined_lee(const Raster& r, const SpeckleParams& p = {});

}  // namespace resext

#endif  // RESEXT_SPECKLE_HPP_
