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
#ifndef RESEXT_ASCII_GRID_HPP_
#define RESEXT_ASCII_GRID_HPP_

#include <filesystem>

#include "resext/raster.hpp"

namespace resext {

/// Reads an ESRI ASCII grid (header keys ncols, nrows, xllcorner, yllcorner,
/// cellsize, NODATA_value; case-insensitive; data rows top-first).
///
/// The format carries no CRS, so the caller states how to interpret the
/// coordinates; units default to Dimensionless.
Raster read_ascii_grid(const std::filesystem::path& path,
                       CrsKind crs_kind = CrsKind::ProjectedMeters,
                       Units units = Units::Dimensionless);

/// Writes `r` so that read_ascii_grid reproduces it: geo fields exactly,
/// values to 9 significant digits, nodata sentinel verbatim.
void write_ascii_grid(const Raster& r, const std::filesystem::path& path);

}  // namespace resext

#endif  // RESEXT_ASCII_GRID_HPP_
