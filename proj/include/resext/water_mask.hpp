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

#ifndef RESEXT_WATER_MASK_HPP_
#define RESEXT_WATER_MASK_HPP_

#include <string>
#include <vector>

#include "resext/raster.hpp"
#include "resext/speckle.hpp"
#include "resext/threshold.hpp"

namespace resext {

/// How the per-band water tests combine into one mask.
enum class Combine { And, Or, VvOnly, VhOnly };
enum class Connectivity { Four, Eight };

struct MaskParams {
  /// And (default) demands low backscatter in both polarizations, which
  /// suppresses single-band false positives such as smooth bare soil.
  Combine combine = Combine::And;
  /// Components smaller than this many pixels are treated as speckle
  /// residue and removed (default 25 px = 0.25 ha at 10 m).
  int min_pixels = 25;
  Connectivity connectivity = Connectivity::Eight;
};

void validate(const MaskParams& p);

/// One dated water-extent measurement of one reservoir.
struct WaterExtentRecord {
  std::string reservoir_id;
  Date date;
  double area_km2 = 0.0;
  double t_vv = 0.0;  // dB
  double t_vh = 0.0;  // dB
  long long water_pixels = 0;
  long long removed_components = 0;
  bool low_confidence = false;
};

/// Binary water mask: pixel is 1 where the combine rule holds (water is
/// backscatter BELOW the band threshold), 0 otherwise; nodata in any band
/// the rule uses makes the output pixel nodata. Scene must be in dB.
Raster classify_water(const Scene& s, double t_vv, double t_vh, Combine combine);

/// Connected components of a binary mask. labels holds 0 for background,
/// nodata passthrough, and 1..K for components numbered by row-major
/// discovery order; sizes[k-1] is the pixel count of label k.
struct Components {
  Raster labels;
  std::vector<long long> sizes;
};
Components connected_components(const Raster& mask, Connectivity connectivity);

/// Zeroes every component smaller than min_pixels.
struct FilterResult {
  Raster mask;  // binary again
  long long removed_components = 0;
};
FilterResult filter_small_components(const Components& cc, int min_pixels);

/// Water area in km^2: count of 1-pixels x cellsize^2 / 10^6. Refuses
/// Geographic grids (degree cells have no fixed metric area) with CrsError.
double compute_area_km2(const Raster& mask, const GridGeo& geo);

/// Despeckles both bands in linear power and returns the scene in dB.
/// Accepts LinearPower or Decibel scenes and converts as needed.
Scene despeckle_to_db(const Scene& s, const SpeckleParams& sp = {});

/// Output of the per-scene pipeline: the measurement record, the cleaned
/// binary mask, and the per-band threshold diagnostics.
struct SceneResult {
  WaterExtentRecord record;
  Raster mask;
  SceneThresholds thresholds;
};

/// Classify + label + size-filter + area on an already despeckled dB
/// scene with the given thresholds. Lets callers re-measure a scene under
/// substitute thresholds (the low-confidence fallback) without repeating
/// the despeckle step.
SceneResult classify_and_measure(const Scene& db_scene, const SceneThresholds& t,
                                 const MaskParams& mp = {});

/// The full per-scene pipeline, fixed order: despeckle (linear) -> dB ->
/// per-band Otsu -> classify -> connected components -> size filter ->
/// area. Errors are annotated with the scene's reservoir_id and date.
SceneResult process_scene(const Scene& s, const SpeckleParams& sp = {},
                          const MaskParams& mp = {}, int nbins = 256);

/// Extent CSV, header
/// "reservoir_id,date,area_km2,t_vv,t_vh,water_pixels,removed_components,low_confidence".
/// Numeric fields use shortest-exact formatting; low_confidence is 0/1.
void write_extent_csv(const std::vector<WaterExtentRecord>& records,
                      const std::string& path);
std::vector<WaterExtentRecord> read_extent_csv(const std::string& path);

}  // namespace resext

#endif  // RESEXT_WATER_MASK_HPP_
