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

#ifndef RESEXT_THRESHOLD_HPP_
#define RESEXT_THRESHOLD_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "resext/raster.hpp"

namespace resext {

/// Fixed-width histogram over [lo, hi]. Bin i covers
/// [lo + i*w, lo + (i+1)*w) with w = (hi - lo)/nbins; the last bin is
/// closed above so hi itself is counted.
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<long long> counts;
  long long total = 0;

  int nbins() const { return int(counts.size()); }
  double bin_width() const { return (hi - lo) / double(counts.size()); }
  /// Center of bin i; bins are represented by their centers in all
  /// moment computations.
  double bin_center(int i) const { return lo + (i + 0.5) * bin_width(); }
};

/// Two-class split of a histogram at an interior bin boundary:
/// "water" (w) is the lower class, bins [0, boundary_bin]; "non-water"
/// (nw) is bins (boundary_bin, nbins).
struct SplitMoments {
  double p_w = 0.0;        // class probabilities (sum to 1)
  double p_nw = 0.0;
  double mu_w = 0.0;       // class means over bin centers
  double mu_nw = 0.0;
  double sigma_w2 = 0.0;   // class variances
  double sigma_nw2 = 0.0;
  double sigma_within = 0.0;   // p_w*sigma_w2 + p_nw*sigma_nw2
  double sigma_between = 0.0;  // p_w*p_nw*(mu_w - mu_nw)^2
};

struct OtsuResult {
  double threshold = 0.0;      // chosen boundary, same units as the domain
  double sigma_within = 0.0;   // minimized within-class weighted variance
  double p_w = 0.0;
  double p_nw = 0.0;
  double sigma_w2 = 0.0;
  double sigma_nw2 = 0.0;
  /// True when the between-class variance at the optimum explains less
  /// than 70% of the total variance. Genuinely bimodal scenes (>= 8 dB
  /// class contrast) score well above this; single-class scenes —
  /// all-water or all-land, where the split only halves one noise
  /// cluster — score around 0.64 and are flagged.
  bool low_confidence = false;
};

/// Histogram of the valid pixels of r. With no explicit range, (lo, hi)
/// is the min/max of the valid values; with an explicit range,
/// out-of-range pixels are clamped into the end bins.
/// Throws EmptyInput for an all-nodata raster, DegenerateDistribution
/// when the valid values are all equal, ParamError for nbins < 2 or a
/// backwards range.
Histogram build_histogram(const Raster& r, int nbins = 256,
                          std::optional<std::pair<double, double>> range = std::nullopt);

/// Moments of the two classes split after `boundary_bin`
/// (0 <= boundary_bin < nbins-1). Requires both classes nonempty;
/// throws ParamError otherwise.
SplitMoments split_moments(const Histogram& h, int boundary_bin);

/// Otsu's threshold: scans every interior bin boundary that splits the
/// histogram into two nonempty classes and picks the one minimizing the
/// within-class weighted variance p_w*sigma_w2 + p_nw*sigma_nw2. This
/// implementation minimizes the within-class form directly (rather than
/// maximizing the equivalent between-class variance); ties break toward
/// the smallest threshold. Water is the lower class.
/// Throws EmptyInput for an empty histogram and DegenerateDistribution
/// when fewer than two bins are nonempty.
OtsuResult otsu_threshold(const Histogram& h);

/// Population variance of the histogram (bin centers, count weights).
double histogram_variance(const Histogram& h);

/// Per-band Otsu thresholds of a despeckled scene in dB.
struct SceneThresholds {
  OtsuResult vv;
  OtsuResult vh;
};

/// Runs build_histogram + otsu_threshold on each band of a Decibel scene.
/// Errors from a band are annotated with the band name; non-dB input
/// throws UnitsError.
SceneThresholds scene_thresholds(const Scene& s, int nbins = 256);

}  // namespace resext

#endif  // RESEXT_THRESHOLD_HPP_
