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

#ifndef RESEXT_POLYGON_HPP_
#define RESEXT_POLYGON_HPP_

#include <string>
#include <vector>

namespace resext {

struct Vertex {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vertex&) const = default;
};

/// Closed ring: >= 4 vertices with first == last.
using Ring = std::vector<Vertex>;

/// One polygon: outer boundary plus zero or more hole rings.
struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

/// One or more polygons sharing an id, in the coordinate system of the
/// grids they will be combined with (no CRS handling here).
struct PolygonSet {
  std::vector<Polygon> polygons;
  std::string id;
};

/// Throws ShapeError unless every ring is closed with >= 4 vertices.
void validate(const PolygonSet& set);

/// Reads a GeoJSON file holding one Polygon or MultiPolygon geometry,
/// either bare, as a Feature, or as the first feature of a
/// FeatureCollection. Unclosed rings are auto-closed by appending the
/// first vertex; each closure appends a message to `warnings` if given.
/// The id comes from the feature's "id" member or "id"/"name" property
/// when present, else the file stem.
/// Throws UnsupportedGeometry for other geometry types, ParseError for
/// malformed JSON/structure, IoError if the file cannot be opened.
PolygonSet read_polygons(const std::string& path,
                         std::vector<std::string>* warnings = nullptr);

}  // namespace resext

#endif  // RESEXT_POLYGON_HPP_
