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

#include "resext/speckle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "resext/errors.hpp"

namespace resext {

namespace {

// Directions in the fixed tie-break order; (band_row, band_col) addresses
// the 3x3 sub-mean grid, (dy, dx) is the outward unit step with rows
// growing downward.
struct Direction {
  int band_row, band_col;
  int dy, dx;
};
constexpr Direction kDirections[8] = {
    {0, 1, -1, 0},   // N
    {0, 2, -1, 1},   // NE
    {1, 2, 0, 1},    // E
    {2, 2, 1, 1},    // SE
    {2, 1, 1, 0},    // S
    {2, 0, 1, -1},   // SW
    {1, 0, 0, -1},   // W
    {0, 0, -1, -1},  // NW
};
// Opposing pairs; ties between axes resolve to the earliest entry.
constexpr int kAxes[4][2] = {{0, 4}, {1, 5}, {2, 6}, {3, 7}};

}  // namespace

void validate(const SpeckleParams& p) {
  if (p.window < 5 || p.window % 2 == 0) {
    throw ParamError("speckle window must be an odd integer >= 5, got " +
                     std::to_string(p.window));
  }
  if (!(p.looks > 0)) {
    throw ParamError("speckle looks must be positive, got " + std::to_string(p.looks));
  }
  if (p.min_valid < 1) {
    throw ParamError("speckle min_valid must be >= 1, got " +
                     std::to_string(p.min_valid));
  }
}

Raster refined_lee(const Raster& r, const SpeckleParams& p) {
  validate(p);
  validate(r);
  if (r.units != Units::LinearPower) {
    throw UnitsError("refined_lee expects LinearPower input; convert dB first");
  }

  const int half = p.window / 2;
  const int outer = p.window / 3;  // outer band width of the 3x3 partition
  const int inner_end = p.window - outer;
  const double sv2 = 1.0 / p.looks;

  // Band index (0/1/2) of a window-relative offset in [-half, half].
  auto band = [&](int offset) {
    const int i = offset + half;
    if (i < outer) return 0;
    if (i < inner_end) return 1;
    return 2;
  };

  Raster out = r;  // passthrough by default (covers nodata and low support)
  for (int row = 0; row < r.geo.nrows; ++row) {
    const int dy_lo = std::max(-half, -row);
    const int dy_hi = std::min(half, r.geo.nrows - 1 - row);
    for (int col = 0; col < r.geo.ncols; ++col) {
      const double center = r.at(row, col);
      if (!r.is_valid(center)) continue;
      const int dx_lo = std::max(-half, -col);
      const int dx_hi = std::min(half, r.geo.ncols - 1 - col);

      // 3x3 sub-means over the (cropped) window, valid pixels only.
      double sum[3][3] = {};
      int n[3][3] = {};
      for (int dy = dy_lo; dy <= dy_hi; ++dy) {
        const int br = band(dy);
        for (int dx = dx_lo; dx <= dx_hi; ++dx) {
          const double v = r.at(row + dy, col + dx);
          if (!r.is_valid(v)) continue;
          sum[br][band(dx)] += v;
          ++n[br][band(dx)];
        }
      }
      auto sub_mean = [&](const Direction& d) { return sum[d.band_row][d.band_col] / n[d.band_row][d.band_col]; };
      auto defined = [&](const Direction& d) { return n[d.band_row][d.band_col] > 0; };

      // Pick the axis with the largest gradient between opposing sub-means.
      int best_axis = -1;
      double best_grad = -1.0;
      for (int a = 0; a < 4; ++a) {
        const Direction& d1 = kDirections[kAxes[a][0]];
        const Direction& d2 = kDirections[kAxes[a][1]];
        if (!defined(d1) || !defined(d2)) continue;
        const double grad = std::abs(sub_mean(d1) - sub_mean(d2));
        if (grad > best_grad) {
          best_grad = grad;
          best_axis = a;
        }
      }
      if (best_axis < 0) continue;  // no opposing pair defined: passthrough

      // Keep the side of the edge the center belongs to: the direction
      // whose sub-mean is nearer the center sub-mean (always defined —
      // the center pixel itself is valid and lies in band (1,1)).
      const double center_mean = sum[1][1] / n[1][1];
      const Direction& da = kDirections[kAxes[best_axis][0]];
      const Direction& db = kDirections[kAxes[best_axis][1]];
      const Direction& dir =
          std::abs(sub_mean(da) - center_mean) <= std::abs(sub_mean(db) - center_mean)
              ? da
              : db;

      // Directional half-window: offsets with nonnegative projection on
      // the direction vector (center row/column included).
      double s1 = 0.0;
      double vmin = center, vmax = center;
      int count = 0;
      for (int dy = dy_lo; dy <= dy_hi; ++dy) {
        for (int dx = dx_lo; dx <= dx_hi; ++dx) {
          if (dir.dy * dy + dir.dx * dx < 0) continue;
          const double v = r.at(row + dy, col + dx);
          if (!r.is_valid(v)) continue;
          s1 += v;
          vmin = std::min(vmin, v);
          vmax = std::max(vmax, v);
          ++count;
        }
      }
      if (count < p.min_valid) continue;  // insufficient support: passthrough
      if (vmin == vmax) {
        out.at(row, col) = vmin;  // exact fixed point on locally constant data
        continue;
      }
      const double m = s1 / count;
      double ss = 0.0;  // second pass keeps the variance numerically clean
      for (int dy = dy_lo; dy <= dy_hi; ++dy) {
        for (int dx = dx_lo; dx <= dx_hi; ++dx) {
          if (dir.dy * dy + dir.dx * dx < 0) continue;
          const double v = r.at(row + dy, col + dx);
          if (!r.is_valid(v)) continue;
          ss += (v - m) * (v - m);
        }
      }
      const double var = ss / count;
      if (var <= 0.0) {
        out.at(row, col) = m;
        continue;
      }
      const double k = std::clamp((var - m * m * sv2) / (var * (1.0 + sv2)), 0.0, 1.0);
      out.at(row, col) = m + k * (center - m);
    }
  }
  return out;
}

}  // namespace resext
