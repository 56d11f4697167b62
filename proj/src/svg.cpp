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
//
// Hand-rolled SVG emission: the plots need a dozen primitive kinds, and
// every byte is under our control, which is what keeps rerenders of equal
// inputs byte-identical.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "resext/analysis.hpp"
#include "resext/date.hpp"
#include "resext/errors.hpp"
#include "resext/format.hpp"

namespace resext {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 520.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginTop = 50.0;
constexpr double kMarginBottom = 45.0;

constexpr const char* kMonthNames[12] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                         "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string px(double v) { return format_f(v, 2); }

/// Maps a value range to pixel rows (SVG y grows downward).
class YScale {
 public:
  YScale(double lo, double hi, double top, double bottom)
      : lo_(lo), hi_(hi), top_(top), bottom_(bottom) {
    if (lo_ == hi_) {  // degenerate domain: pad to a unit band
      lo_ -= 1.0;
      hi_ += 1.0;
    }
  }
  double operator()(double v) const {
    return bottom_ - (v - lo_) / (hi_ - lo_) * (bottom_ - top_);
  }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_, hi_, top_, bottom_;
};

void emit_header(std::ostringstream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << px(kWidth) << "\" height=\"" << px(kHeight) << "\" viewBox=\"0 0 "
      << px(kWidth) << " " << px(kHeight) << "\">\n";
}

void emit_title(std::ostringstream& out, const std::string& title) {
  out << "  <text x=\"" << px(kWidth / 2.0)
      << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << xml_escape(title) << "</text>\n";
}

void emit_line(std::ostringstream& out, double x1, double y1, double x2, double y2,
               const char* stroke, const char* extra = "") {
  out << "  <line x1=\"" << px(x1) << "\" y1=\"" << px(y1) << "\" x2=\"" << px(x2)
      << "\" y2=\"" << px(y2) << "\" stroke=\"" << stroke << "\"" << extra
      << "/>\n";
}

void emit_text(std::ostringstream& out, double x, double y, const char* anchor,
               const std::string& body, const char* extra = "") {
  out << "  <text x=\"" << px(x) << "\" y=\"" << px(y) << "\" text-anchor=\""
      << anchor << "\" font-family=\"sans-serif\" font-size=\"11\"" << extra << ">"
      << xml_escape(body) << "</text>\n";
}

/// Evenly spaced axis ticks; endpoints included. Deterministic and
/// domain-exact, which matters more here than "nice" rounded labels.
void emit_y_ticks(std::ostringstream& out, const YScale& scale, double axis_x,
                  bool labels_left) {
  constexpr int kTicks = 5;
  for (int i = 0; i < kTicks; ++i) {
    const double v = scale.lo() + (scale.hi() - scale.lo()) * i / (kTicks - 1);
    const double y = scale(v);
    const double dir = labels_left ? -1.0 : 1.0;
    emit_line(out, axis_x, y, axis_x + dir * 5.0, y, "#333333");
    emit_text(out, axis_x + dir * 8.0, y + 3.5, labels_left ? "end" : "start",
              format_g(v, 4));
  }
}

}  // namespace

std::string render_box_svg(const std::array<BoxStats, 12>& months,
                           const std::string& title, const std::string& unit_label) {
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const BoxStats& s : months) {
    if (s.n == 0) continue;
    if (!any) {
      lo = s.min;
      hi = s.max;
      any = true;
    } else {
      lo = std::min(lo, s.min);
      hi = std::max(hi, s.max);
    }
  }
  if (!any) throw EmptyInput("box plot needs at least one nonempty month");
  const double pad = (hi - lo) * 0.05;
  const double top = kMarginTop;
  const double bottom = kHeight - kMarginBottom;
  const double left = kMarginLeft;
  const double right = kWidth - 30.0;
  YScale y(lo - pad, hi + pad, top, bottom);

  std::ostringstream out;
  emit_header(out);
  emit_title(out, title);

  // Frame.
  emit_line(out, left, top, left, bottom, "#333333");
  emit_line(out, left, bottom, right, bottom, "#333333");
  emit_y_ticks(out, y, left, /*labels_left=*/true);
  if (!unit_label.empty()) {
    out << "  <text x=\"18\" y=\"" << px((top + bottom) / 2.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\""
        << " transform=\"rotate(-90 18 " << px((top + bottom) / 2.0) << ")\">"
        << xml_escape(unit_label) << "</text>\n";
  }

  const double slot = (right - left) / 12.0;
  const double box_w = slot * 0.55;
  for (int m = 0; m < 12; ++m) {
    const double cx = left + slot * (m + 0.5);
    emit_text(out, cx, bottom + 16.0, "middle", kMonthNames[m]);
    const BoxStats& s = months[std::size_t(m)];
    if (s.n == 0) continue;

    // Whiskers first so the box covers their joints.
    emit_line(out, cx, y(s.whisker_lo), cx, y(s.q1), "#2b5d85");
    emit_line(out, cx, y(s.q3), cx, y(s.whisker_hi), "#2b5d85");
    emit_line(out, cx - box_w / 4.0, y(s.whisker_lo), cx + box_w / 4.0,
              y(s.whisker_lo), "#2b5d85");
    emit_line(out, cx - box_w / 4.0, y(s.whisker_hi), cx + box_w / 4.0,
              y(s.whisker_hi), "#2b5d85");

    // The box itself is the only <rect> this renderer ever emits.
    out << "  <rect x=\"" << px(cx - box_w / 2.0) << "\" y=\"" << px(y(s.q3))
        << "\" width=\"" << px(box_w) << "\" height=\"" << px(y(s.q1) - y(s.q3))
        << "\" fill=\"#a7c8e4\" stroke=\"#2b5d85\"/>\n";
    emit_line(out, cx - box_w / 2.0, y(s.median), cx + box_w / 2.0, y(s.median),
              "#1a3a54", " stroke-width=\"2\"");

    for (double v : s.outliers) {
      out << "  <circle cx=\"" << px(cx) << "\" cy=\"" << px(y(v))
          << "\" r=\"2.5\" fill=\"none\" stroke=\"#b3402e\"/>\n";
    }
  }

  out << "</svg>\n";
  return out.str();
}

std::string render_series_svg(const SeriesTable& left_series,
                              const SeriesTable& right_series,
                              const std::string& title) {
  if (left_series.empty() || right_series.empty()) {
    throw EmptyInput("dual-series plot needs two nonempty series");
  }

  const double top = kMarginTop;
  const double bottom = kHeight - kMarginBottom;
  const double left = kMarginLeft;
  const double right = kWidth - 70.0;

  long s_lo = to_serial_day(left_series.entries.front().date);
  long s_hi = to_serial_day(left_series.entries.back().date);
  s_lo = std::min(s_lo, to_serial_day(right_series.entries.front().date));
  s_hi = std::max(s_hi, to_serial_day(right_series.entries.back().date));
  auto x_of = [&](const Date& d) {
    if (s_lo == s_hi) return (left + right) / 2.0;
    return left + double(to_serial_day(d) - s_lo) / double(s_hi - s_lo) *
                      (right - left);
  };

  auto value_scale = [&](const SeriesTable& t) {
    double lo = t.entries.front().value, hi = lo;
    for (const SeriesEntry& e : t.entries) {
      lo = std::min(lo, e.value);
      hi = std::max(hi, e.value);
    }
    const double pad = (hi - lo) * 0.05;
    return YScale(lo - pad, hi + pad, top, bottom);
  };
  const YScale yl = value_scale(left_series);
  const YScale yr = value_scale(right_series);

  std::ostringstream out;
  emit_header(out);
  emit_title(out, title);

  emit_line(out, left, top, left, bottom, "#1f77b4");
  emit_line(out, right, top, right, bottom, "#c26a1b");
  emit_line(out, left, bottom, right, bottom, "#333333");
  emit_y_ticks(out, yl, left, /*labels_left=*/true);
  emit_y_ticks(out, yr, right, /*labels_left=*/false);

  // Date ticks: 6 evenly spaced serial days labeled YYYY-MM.
  constexpr int kDateTicks = 6;
  for (int i = 0; i < kDateTicks; ++i) {
    const long serial =
        s_lo + (s_hi - s_lo) * (long)(i) / (kDateTicks - 1);
    const Date d = from_serial_day(serial);
    const double x = s_lo == s_hi ? (left + right) / 2.0
                                  : left + double(serial - s_lo) /
                                               double(s_hi - s_lo) * (right - left);
    emit_line(out, x, bottom, x, bottom + 5.0, "#333333");
    emit_text(out, x, bottom + 18.0, "middle", to_string(d).substr(0, 7));
    if (s_lo == s_hi) break;  // one tick is enough for a single date
  }

  auto emit_polyline = [&](const SeriesTable& t, const YScale& scale,
                           const char* stroke) {
    out << "  <polyline fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const SeriesEntry& e : t.entries) {
      if (!first) out << ' ';
      out << px(x_of(e.date)) << ',' << px(scale(e.value));
      first = false;
    }
    out << "\"/>\n";
  };
  emit_polyline(left_series, yl, "#1f77b4");
  emit_polyline(right_series, yr, "#c26a1b");

  // Legend: series labels colored like their lines, units appended.
  auto legend_label = [](const SeriesTable& t) {
    std::string s = t.label.empty() ? "series" : t.label;
    if (!t.units.empty()) s += " (" + t.units + ")";
    return s;
  };
  emit_text(out, left, top - 10.0, "start", legend_label(left_series),
            " fill=\"#1f77b4\"");
  emit_text(out, right, top - 10.0, "end", legend_label(right_series),
            " fill=\"#c26a1b\"");

  out << "</svg>\n";
  return out.str();
}

}  // namespace resext
