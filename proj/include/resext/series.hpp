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

#ifndef RESEXT_SERIES_HPP_
#define RESEXT_SERIES_HPP_

#include <string>
#include <vector>

#include "resext/date.hpp"

namespace resext {

struct SeriesEntry {
  Date date;
  double value = 0.0;
};

/// Ordered (date -> value) time series. Dates are strictly increasing;
/// construction through read_series_csv / append_checked enforces this.
struct SeriesTable {
  std::vector<SeriesEntry> entries;
  std::string label;
  std::string units;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

/// Throws SeriesOrderError if the table's dates are not strictly increasing.
/// The message names the first offending (0-based) entry index and its date.
void validate(const SeriesTable& table);

/// Reads a CSV file with header "date,value" into a SeriesTable.
/// Dates are ISO-8601 (YYYY-MM-DD). Throws ParseError on malformed rows,
/// SeriesOrderError if dates are duplicated or out of order (the message
/// names the first offending row), IoError if the file cannot be opened.
/// The table label defaults to the file stem; units are left empty.
SeriesTable read_series_csv(const std::string& path);

/// Writes "date,value" CSV with LF line endings. Values are serialized with
/// the shortest representation that round-trips exactly, so
/// read_series_csv(write_series_csv(t)) reproduces t's values bit-for-bit.
void write_series_csv(const SeriesTable& table, const std::string& path);

}  // namespace resext

#endif  // RESEXT_SERIES_HPP_
