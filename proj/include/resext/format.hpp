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
#ifndef RESEXT_FORMAT_HPP_
#define RESEXT_FORMAT_HPP_

#include <cstdio>
#include <cstdlib>
#include <string>

namespace resext {

/// %g-style formatting with a fixed significant-digit count. Every file the
/// library writes goes through these helpers so identical inputs always
/// produce byte-identical outputs.
inline std::string format_g(double v, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, v);
  return buf;
}

inline std::string format_f(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

/// Shortest %g representation that parses back to exactly `v`.
inline std::string format_shortest(double v) {
  char buf[64];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace resext

#endif  // RESEXT_FORMAT_HPP_
