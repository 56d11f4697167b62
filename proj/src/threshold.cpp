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

#include "resext/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "resext/errors.hpp"

namespace resext {

Histogram build_histogram(const Raster& r, int nbins,
                          std::optional<std::pair<double, double>> range) {
  if (nbins < 2) {
    throw ParamError("histogram needs nbins >= 2, got " + std::to_string(nbins));
  }
  double vmin = 0.0, vmax = 0.0;
  bool any = false;
  for (double v : r.values) {
    if (!r.is_valid(v)) continue;
    if (!any) {
      vmin = vmax = v;
      any = true;
    } else {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  if (!any) throw EmptyInput("histogram over all-nodata raster");
  if (vmin == vmax) {
    throw DegenerateDistribution("histogram over constant raster (all valid values = " +
                                 std::to_string(vmin) + ")");
  }

  Histogram h;
  if (range) {
    h.lo = range->first;
    h.hi = range->second;
    if (!(h.lo < h.hi)) throw ParamError("histogram range must have lo < hi");
  } else {
    h.lo = vmin;
    h.hi = vmax;
  }
  h.counts.assign(std::size_t(nbins), 0);
  const double w = h.bin_width();
  for (double v : r.values) {
    if (!r.is_valid(v)) continue;
    int bin = int(std::floor((v - h.lo) / w));
    bin = std::clamp(bin, 0, nbins - 1);  // clamps out-of-range, closes the last bin
    ++h.counts[std::size_t(bin)];
  }
  h.total = 0;
  for (long long c : h.counts) h.total += c;
  return h;
}

SplitMoments split_moments(const Histogram& h, int boundary_bin) {
  const int nbins = h.nbins();
  if (boundary_bin < 0 || boundary_bin >= nbins - 1) {
    throw ParamError("split boundary " + std::to_string(boundary_bin) +
                     " outside interior bins of " + std::to_string(nbins));
  }
  long long n_w = 0, n_nw = 0;
  double s1_w = 0, s2_w = 0, s1_nw = 0, s2_nw = 0;
  for (int i = 0; i < nbins; ++i) {
    const double c = h.bin_center(i);
    const double count = double(h.counts[std::size_t(i)]);
    if (i <= boundary_bin) {
      n_w += h.counts[std::size_t(i)];
      s1_w += count * c;
      s2_w += count * c * c;
    } else {
      n_nw += h.counts[std::size_t(i)];
      s1_nw += count * c;
      s2_nw += count * c * c;
    }
  }
  if (n_w == 0 || n_nw == 0) {
    throw ParamError("split at boundary " + std::to_string(boundary_bin) +
                     " leaves an empty class");
  }
  SplitMoments m;
  const double total = double(n_w + n_nw);
  m.p_w = double(n_w) / total;
  m.p_nw = double(n_nw) / total;
  m.mu_w = s1_w / double(n_w);
  m.mu_nw = s1_nw / double(n_nw);
  m.sigma_w2 = std::max(0.0, s2_w / double(n_w) - m.mu_w * m.mu_w);
  m.sigma_nw2 = std::max(0.0, s2_nw / double(n_nw) - m.mu_nw * m.mu_nw);
  m.sigma_within = m.p_w * m.sigma_w2 + m.p_nw * m.sigma_nw2;
  m.sigma_between = m.p_w * m.p_nw * (m.mu_w - m.mu_nw) * (m.mu_w - m.mu_nw);
  return m;
}

double histogram_variance(const Histogram& h) {
  if (h.total <= 0) throw EmptyInput("variance of empty histogram");
  double s1 = 0, s2 = 0;
  for (int i = 0; i < h.nbins(); ++i) {
    const double c = h.bin_center(i);
    const double count = double(h.counts[std::size_t(i)]);
    s1 += count * c;
    s2 += count * c * c;
  }
  const double mean = s1 / double(h.total);
  return std::max(0.0, s2 / double(h.total) - mean * mean);
}

OtsuResult otsu_threshold(const Histogram& h) {
  if (h.total <= 0) throw EmptyInput("Otsu over empty histogram");
  int nonempty = 0;
  for (long long c : h.counts) nonempty += c > 0 ? 1 : 0;
  if (nonempty < 2) {
    throw DegenerateDistribution("Otsu needs at least two nonempty bins, got " +
                                 std::to_string(nonempty));
  }

  // Scan all interior boundaries that give two nonempty classes; keep the
  // within-class minimum. Strict comparison makes ties resolve to the
  // smallest threshold.
  int best = -1;
  SplitMoments best_m;
  long long left = 0;
  for (int b = 0; b < h.nbins() - 1; ++b) {
    left += h.counts[std::size_t(b)];
    if (left == 0 || left == h.total) continue;
    const SplitMoments m = split_moments(h, b);
    if (best < 0 || m.sigma_within < best_m.sigma_within) {
      best = b;
      best_m = m;
    }
  }

  OtsuResult result;
  result.threshold = h.lo + (best + 1) * h.bin_width();
  result.sigma_within = best_m.sigma_within;
  result.p_w = best_m.p_w;
  result.p_nw = best_m.p_nw;
  result.sigma_w2 = best_m.sigma_w2;
  result.sigma_nw2 = best_m.sigma_nw2;
  // Bimodality guard: the optimal split of a unimodal (single-class)
  // histogram explains only ~64% of the variance, while a real two-class
  // histogram explains well over 80%. 0.70 separates the regimes; note a
  // "< 5% of total" style cutoff can never trip, because the *optimal*
  // split of any histogram with two distinct values already explains at
  // least ~half the variance.
  result.low_confidence = best_m.sigma_between < 0.70 * histogram_variance(h);
  return result;
}

SceneThresholds scene_thresholds(const Scene& s, int nbins) {
  validate(s);
  if (s.vv.units != Units::Decibel) {
    throw UnitsError("scene_thresholds expects Decibel scenes; convert after despeckling");
  }
  auto band_otsu = [&](const Raster& band, const char* name) {
    try {
      return otsu_threshold(build_histogram(band, nbins));
    } catch (Error& e) {
      e.prepend_context(std::string(name) + " band of scene " + s.reservoir_id + " " +
                        to_string(s.date));
      throw;
    }
  };
  SceneThresholds t;
  t.vv = band_otsu(s.vv, "VV");
  t.vh = band_otsu(s.vh, "VH");
  return t;
}

}  // namespace resext
