/*
 * Copyright 2025-present the resext authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef RESEXT_DATE_HPP_
#define RESEXT_DATE_HPP_

#include <chrono>
#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

#include "resext/errors.hpp"

namespace resext {

/// Calendar date (proleptic Gregorian). Serialized everywhere as YYYY-MM-DD.
struct Date {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  auto operator<=>(const Date&) const = default;
};

inline bool is_valid_date(const Date& d) {
  const std::chrono::year_month_day ymd{
      std::chrono::year{d.year}, std::chrono::month{unsigned(d.month)},
      std::chrono::day{unsigned(d.day)}};
  return ymd.ok();
}

inline Date parse_date(std::string_view text) {
  int y = 0, m = 0, d = 0;
  char tail = 0;
  const std::string s(text);
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3 ||
      s.size() != 10) {
    throw ParseError("invalid date '" + s + "', expected YYYY-MM-DD");
  }
  const Date date{y, m, d};
  if (!is_valid_date(date)) {
    throw ParseError("calendar-invalid date '" + s + "'");
  }
  return date;
}

inline std::string to_string(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

inline int days_in_month(int year, int month) {
  const std::chrono::year_month_day_last last{
      std::chrono::year{year},
      std::chrono::month_day_last{std::chrono::month{unsigned(month)}}};
  return int(unsigned(last.day()));
}

/// Linear month counter, year*12 + (month-1). Consecutive calendar months
/// differ by exactly 1, which makes lag arithmetic trivial.
inline long month_index(const Date& d) {
  return long(d.year) * 12 + (d.month - 1);
}

inline Date first_of_month(int year, int month) { return Date{year, month, 1}; }

inline Date next_day(const Date& d) {
  using namespace std::chrono;
  const sys_days sd = sys_days{year_month_day{
      year{d.year}, month{unsigned(d.month)}, day{unsigned(d.day)}}};
  const year_month_day n{sd + days{1}};
  return Date{int(n.year()), int(unsigned(n.month())), int(unsigned(n.day()))};
}

/// Days since 1970-01-01; used for time-axis placement in plots.
inline long to_serial_day(const Date& d) {
  using namespace std::chrono;
  const sys_days sd = sys_days{year_month_day{
      year{d.year}, month{unsigned(d.month)}, day{unsigned(d.day)}}};
  return sd.time_since_epoch().count();
}

inline Date from_serial_day(long serial) {
  using namespace std::chrono;
  const year_month_day ymd{sys_days{days{serial}}};
  return Date{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day()))};
}

}  // namespace resext

#endif  // RESEXT_DATE_HPP_
