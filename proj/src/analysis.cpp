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

#include "resext/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "resext/errors.hpp"
#include "resext/format.hpp"

namespace resext {

namespace {

/// Type-7 quantile of a sorted sample: h = (n-1)p, linear interpolation
/// between the bracketing order statistics.
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = double(n - 1) * p;
  const std::size_t lo = std::size_t(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - double(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

void require_finite(const std::vector<double>& values, const char* which) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw DomainError(std::string(which) + " value at index " + std::to_string(i) +
                        " is not finite");
    }
  }
}

}  // namespace

BoxStats box_stats(const std::vector<double>& values) {
  if (values.empty()) throw EmptyInput("box_stats needs at least one value");
  require_finite(values, "box_stats");

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());

  BoxStats s;
  s.n = (long long)(sorted.size());
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  s.iqr = s.q3 - s.q1;

  const double fence_lo = s.q1 - 1.5 * s.iqr;
  const double fence_hi = s.q3 + 1.5 * s.iqr;
  // Most extreme data points inside the fences; the box edges themselves
  // are the fallback when a whole side lies outside (keeps the ordering
  // chain intact -- see the header note).
  s.whisker_lo = s.q1;
  s.whisker_hi = s.q3;
  for (double v : sorted) {
    if (v >= fence_lo) {
      s.whisker_lo = std::min(s.whisker_lo, v);
      break;  // sorted: the first in-fence value is the lowest
    }
  }
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    if (*it <= fence_hi) {
      s.whisker_hi = std::max(s.whisker_hi, *it);
      break;
    }
  }
  for (double v : sorted) {
    if (v < fence_lo || v > fence_hi) s.outliers.push_back(v);
  }
  return s;
}

std::array<std::vector<double>, 12> group_by_month(const SeriesTable& series) {
  if (series.empty()) throw EmptyInput("cannot group an empty series by month");
  validate(series);
  std::array<std::vector<double>, 12> buckets;
  for (const SeriesEntry& e : series.entries) {
    buckets[std::size_t(e.date.month - 1)].push_back(e.value);
  }
  return buckets;
}

SeriesTable monthly_mean_series(const SeriesTable& series) {
  if (series.empty()) throw EmptyInput("cannot reduce an empty series to months");
  validate(series);

  SeriesTable out;
  out.label = series.label;
  out.units = series.units;
  // Entries are date-ordered, so equal months are contiguous.
  std::size_t i = 0;
  while (i < series.entries.size()) {
    const Date first = series.entries[i].date;
    double sum = 0.0;
    long long count = 0;
    std::size_t j = i;
    while (j < series.entries.size() &&
           series.entries[j].date.year == first.year &&
           series.entries[j].date.month == first.month) {
      sum += series.entries[j].value;
      ++count;
      ++j;
    }
    out.entries.push_back({Date{first.year, first.month, 1}, sum / double(count)});
    i = j;
  }
  return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw ShapeError("pearson needs equal lengths, got " + std::to_string(x.size()) +
                     " and " + std::to_string(y.size()));
  }
  if (x.size() < 3) {
    throw ParamError("pearson needs at least 3 samples, got " +
                     std::to_string(x.size()));
  }
  require_finite(x, "pearson x");
  require_finite(y, "pearson y");

  const double n = double(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DegenerateDistribution("pearson is undefined for a constant input");
  }
  // Exactly collinear pairs must come out as exactly +/-1 (rounding in
  // the quotient could otherwise nudge them off by one ulp either way).
  if (sxy * sxy == sxx * syy) return sxy > 0.0 ? 1.0 : -1.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

LagCorrResult lag_correlation(const SeriesTable& rain, const SeriesTable& extent,
                              int max_lag) {
  if (max_lag < 0) {
    throw ParamError("max_lag must be >= 0, got " + std::to_string(max_lag));
  }
  validate(rain);
  validate(extent);
  for (const SeriesTable* t : {&rain, &extent}) {
    for (const SeriesEntry& e : t->entries) {
      if (e.date.day != 1) {
        throw ParamError("lag correlation expects monthly series (entries dated "
                         "the 1st); found " + to_string(e.date) +
                         " -- reduce with monthly_mean_series first");
      }
    }
  }

  std::map<long, double> extent_by_month;
  for (const SeriesEntry& e : extent.entries) {
    extent_by_month[month_index(e.date)] = e.value;
  }

  LagCorrResult out;
  double best_r = -2.0;
  for (int lag = 0; lag <= max_lag; ++lag) {
    std::vector<double> xs, ys;
    for (const SeriesEntry& e : rain.entries) {
      auto it = extent_by_month.find(month_index(e.date) + lag);
      if (it == extent_by_month.end()) continue;
      xs.push_back(e.value);
      ys.push_back(it->second);
    }
    if (xs.size() < 3) {
      throw EmptyPeriod("series overlap too short: lag " + std::to_string(lag) +
                        " has " + std::to_string(xs.size()) +
                        " paired months, need >= 3");
    }
    LagCorrEntry entry;
    entry.lag = lag;
    entry.n = (long long)(xs.size());
    entry.r = pearson(xs, ys);
    out.lags.push_back(entry);
    if (entry.r > best_r) {
      best_r = entry.r;
      out.best_lag = lag;
    }
  }
  return out;
}

void write_box_csv(const std::array<BoxStats, 12>& months, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "month,n,min,q1,median,q3,max,n_outliers\n";
  for (int m = 1; m <= 12; ++m) {
    const BoxStats& s = months[std::size_t(m - 1)];
    out << m << ',' << s.n << ',';
    if (s.n > 0) {
      out << format_shortest(s.min) << ',' << format_shortest(s.q1) << ','
          << format_shortest(s.median) << ',' << format_shortest(s.q3) << ','
          << format_shortest(s.max);
    } else {
      out << ",,,,";
    }
    out << ',' << s.outliers.size() << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

void write_lag_csv(const LagCorrResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "lag,r,n,best\n";
  for (const LagCorrEntry& e : result.lags) {
    out << e.lag << ',' << format_shortest(e.r) << ',' << e.n << ','
        << (e.lag == result.best_lag ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace resext
