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
#include "resext/ascii_grid.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "resext/format.hpp"

namespace resext {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

bool parse_double(const std::string& token, double& out) {
  char* end = nullptr;
  out = std::strtod(token.c_str(), &end);
  return end != token.c_str() && *end == '\0';
}

bool parse_int(const std::string& token, long& out) {
  char* end = nullptr;
  out = std::strtol(token.c_str(), &end, 10);
  return end != token.c_str() && *end == '\0';
}

}  // namespace

Raster read_ascii_grid(const std::filesystem::path& path, CrsKind crs_kind,
                       Units units) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

  long ncols = -1, nrows = -1;
  double xll = 0, yll = 0, cellsize = -1, nodata = -9999.0;
  bool have_xll = false, have_yll = false;

  // Header: key/value lines until the first token is numeric.
  std::string first_data_token;
  std::string token;
  while (in >> token) {
    double numeric;
    if (parse_double(token, numeric)) {
      first_data_token = token;
      break;
    }
    const std::string key = lower(token);
    std::string value_token;
    if (!(in >> value_token)) {
      throw ParseError("header key '" + token + "' has no value in '" +
                       path.string() + "'");
    }
    if (key == "ncols" || key == "nrows") {
      long v;
      if (!parse_int(value_token, v) || v < 1) {
        throw ParseError("malformed header value for key '" + token + "': '" +
                         value_token + "'");
      }
      (key == "ncols" ? ncols : nrows) = v;
    } else if (key == "xllcorner" || key == "yllcorner" || key == "cellsize" ||
               key == "nodata_value") {
      double v;
      if (!parse_double(value_token, v)) {
        throw ParseError("malformed header value for key '" + token + "': '" +
                         value_token + "'");
      }
      if (key == "xllcorner") {
        xll = v;
        have_xll = true;
      } else if (key == "yllcorner") {
        yll = v;
        have_yll = true;
      } else if (key == "cellsize") {
        cellsize = v;
      } else {
        nodata = v;
      }
    } else {
      throw ParseError("unknown header key '" + token + "' in '" +
                       path.string() + "'");
    }
  }

  if (ncols < 1) throw ParseError("missing or invalid header key 'ncols'");
  if (nrows < 1) throw ParseError("missing or invalid header key 'nrows'");
  if (!have_xll) throw ParseError("missing header key 'xllcorner'");
  if (!have_yll) throw ParseError("missing header key 'yllcorner'");
  if (!(cellsize > 0)) {
    throw ParseError("missing or invalid header key 'cellsize'");
  }

  const std::size_t expected = std::size_t(ncols) * std::size_t(nrows);
  std::vector<double> values;
  values.reserve(expected);

  if (!first_data_token.empty()) {
    double v;
    parse_double(first_data_token, v);
    values.push_back(v);
    while (in >> token) {
      if (!parse_double(token, v)) {
        throw ParseError("non-numeric data token '" + token + "' in '" +
                         path.string() + "'");
      }
      values.push_back(v);
      if (values.size() > expected) break;
    }
  }

  if (values.size() != expected) {
    throw ParseError("cell count mismatch in '" + path.string() +
                     "': expected " + std::to_string(expected) + ", got " +
                     std::to_string(values.size()) +
                     (values.size() > expected ? " or more" : ""));
  }

  Raster r;
  r.geo = GridGeo{int(ncols), int(nrows), xll, yll, cellsize, crs_kind};
  r.values = std::move(values);
  r.nodata = nodata;
  r.units = units;
  validate(r);
  return r;
}

void write_ascii_grid(const Raster& r, const std::filesystem::path& path) {
  validate(r);
  std::ostringstream out;
  out << "ncols " << r.geo.ncols << "\n";
  out << "nrows " << r.geo.nrows << "\n";
  out << "xllcorner " << format_shortest(r.geo.x_origin) << "\n";
  out << "yllcorner " << format_shortest(r.geo.y_origin) << "\n";
  out << "cellsize " << format_shortest(r.geo.cellsize) << "\n";
  out << "NODATA_value " << format_g(r.nodata, 9) << "\n";
  for (int row = 0; row < r.geo.nrows; ++row) {
    for (int col = 0; col < r.geo.ncols; ++col) {
      if (col) out << ' ';
      out << format_g(r.at(row, col), 9);
    }
    out << '\n';
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << out.str();
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace resext
