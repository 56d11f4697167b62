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

#ifndef RESEXT_ANALYSIS_HPP_
#define RESEXT_ANALYSIS_HPP_

#include <array>
#include <string>
#include <vector>

#include "resext/series.hpp"

namespace resext {

/// Five-number summary with Tukey whiskers.
///
/// Quartiles use linear interpolation with h = (n-1)*p (the "type 7"
/// convention); whiskers reach the most extreme data points inside the
/// 1.5*IQR fences, clamped to the box edges so the ordering chain
///   min <= whisker_lo <= q1 <= median <= q3 <= whisker_hi <= max
/// holds even when every point on one side of a quartile is an outlier
/// (e.g. [0, 0, 0, 100], where no data point reaches q3's fence).
struct BoxStats {
  long long n = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double iqr = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
  std::vector<double> outliers;  // points beyond the fences, ascending
};

/// Computes BoxStats over the values. Throws EmptyInput for an empty
/// list, DomainError (naming the index) for non-finite values.
BoxStats box_stats(const std::vector<double>& values);

/// Buckets series values by calendar month (index 0 = January). Empty
/// months come back as empty lists; the bucket sizes sum to the series
/// length. Throws EmptyInput for an empty series.
std::array<std::vector<double>, 12> group_by_month(const SeriesTable& series);

/// Reduces a series to one entry per (year, month): the arithmetic mean
/// of that month's values, dated to the month's first day.
/// Throws EmptyInput for an empty series.
SeriesTable monthly_mean_series(const SeriesTable& series);

/// Sample Pearson correlation coefficient. The result is clamped to
/// [-1, 1]; exactly collinear inputs return exactly +/-1.
/// Throws ShapeError for length mismatch, ParamError for n < 3,
/// DegenerateDistribution when either input is constant, DomainError for
/// non-finite values.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct LagCorrEntry {
  int lag = 0;        // months the extent series trails the rain series
  double r = 0.0;
  long long n = 0;    // paired samples behind this coefficient
};

struct LagCorrResult {
  std::vector<LagCorrEntry> lags;  // one entry per lag 0..max_lag
  int best_lag = 0;                // argmax of r; ties to the smallest lag
};

/// Correlates rain month t against extent month t+k for each lag
/// k = 0..max_lag. Both inputs must be monthly series (every entry dated
/// the 1st; see monthly_mean_series). Months present in only one series
/// are skipped pairwise. Throws EmptyPeriod when any lag has fewer than
/// 3 pairs (overlap too short), ParamError for a negative max_lag or
/// non-monthly input.
LagCorrResult lag_correlation(const SeriesTable& rain, const SeriesTable& extent,
                              int max_lag = 3);

/// Renders 12 month slots of box-and-whisker summaries as a standalone
/// SVG 1.1 document. A slot with n = 0 is an empty month: its axis label
/// is drawn but no box. The only <rect> elements in the output are the
/// boxes, one per nonempty month. Byte-deterministic for equal inputs.
/// Throws EmptyInput when every month is empty.
std::string render_box_svg(const std::array<BoxStats, 12>& months,
                           const std::string& title, const std::string& unit_label);

/// Renders two series as polylines against dual y axes (first series on
/// the left axis, second on the right) over a shared date axis.
/// Byte-deterministic. Throws EmptyInput if either series is empty.
std::string render_series_svg(const SeriesTable& left, const SeriesTable& right,
                              const std::string& title);

/// Writes "month,n,min,q1,median,q3,max,n_outliers" rows, months 1..12 in
/// order, empty months as "month,0,,,,,,0".
void write_box_csv(const std::array<BoxStats, 12>& months, const std::string& path);

/// Writes "lag,r,n,best" rows in lag order; best is 1 on the best lag.
void write_lag_csv(const LagCorrResult& result, const std::string& path);

}  // namespace resext

#endif  // RESEXT_ANALYSIS_HPP_
