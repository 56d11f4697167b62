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

#include "resext/series.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "resext/errors.hpp"
#include "resext/format.hpp"

namespace resext {

void validate(const SeriesTable& table) {
  for (std::size_t i = 1; i < table.entries.size(); ++i) {
    const Date& prev = table.entries[i - 1].date;
    const Date& cur = table.entries[i].date;
    if (!(prev < cur)) {
      throw SeriesOrderError("series entry " + std::to_string(i) + " (" +
                             to_string(cur) + ") does not follow " +
                             to_string(prev) + "; dates must be strictly increasing");
    }
  }
}

namespace {

// Strips one trailing '\r' so CRLF input parses the same as LF input.
void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

SeriesTable read_series_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open series CSV '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("series CSV '" + path + "' is empty");
  }
  chomp(line);
  if (line != "date,value") {
    throw ParseError("series CSV '" + path + "': expected header \"date,value\", got \"" +
                     line + "\"");
  }

  SeriesTable table;
  table.label = std::filesystem::path(path).stem().string();

  int row = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row;
    chomp(line);
    if (line.empty()) {
      throw ParseError("series CSV '" + path + "' row " + std::to_string(row) +
                       ": empty row");
    }
    std::size_t comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError("series CSV '" + path + "' row " + std::to_string(row) +
                       ": expected exactly two comma-separated fields");
    }
    Date date;
    try {
      date = parse_date(line.substr(0, comma));
    } catch (Error& e) {
      e.prepend_context("series CSV '" + path + "' row " + std::to_string(row));
      throw;
    }
    const std::string value_text = line.substr(comma + 1);
    char* end = nullptr;
    double value = std::strtod(value_text.c_str(), &end);
    if (value_text.empty() || end != value_text.c_str() + value_text.size()) {
      throw ParseError("series CSV '" + path + "' row " + std::to_string(row) +
                       ": non-numeric value \"" + value_text + "\"");
    }
    if (!table.entries.empty() && !(table.entries.back().date < date)) {
      throw SeriesOrderError("series CSV '" + path + "' row " + std::to_string(row) +
                             ": date " + to_string(date) + " does not follow " +
                             to_string(table.entries.back().date) +
                             "; dates must be strictly increasing");
    }
    table.entries.push_back(SeriesEntry{date, value});
  }
  return table;
}

void write_series_csv(const SeriesTable& table, const std::string& path) {
  validate(table);
  std::ostringstream out;
  out << "date,value\n";
  for (const SeriesEntry& e : table.entries) {
    out << to_string(e.date) << ',' << format_shortest(e.value) << '\n';
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << out.str();
  if (!file) throw IoError("failed writing series CSV '" + path + "'");
}

}  // namespace resext
