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

#include "resext/polygon.hpp"

#include <filesystem>
#include <fstream>
#include <utility>

#include "json.hpp"

#include "resext/errors.hpp"

namespace resext {

void validate(const PolygonSet& set) {
  auto check = [](const Ring& ring, const std::string& where) {
    if (ring.size() < 4) {
      throw ShapeError(where + " has " + std::to_string(ring.size()) +
                       " vertices; a closed ring needs at least 4");
    }
    if (!(ring.front() == ring.back())) {
      throw ShapeError(where + " is not closed (first vertex != last)");
    }
  };
  for (std::size_t p = 0; p < set.polygons.size(); ++p) {
    const Polygon& poly = set.polygons[p];
    const std::string prefix = "polygon " + std::to_string(p);
    check(poly.outer, prefix + " outer ring");
    for (std::size_t h = 0; h < poly.holes.size(); ++h) {
      check(poly.holes[h], prefix + " hole " + std::to_string(h));
    }
  }
}

namespace {

using nlohmann::json;

std::string geometry_type(const json& node, const std::string& path) {
  if (!node.is_object() || !node.contains("type") || !node["type"].is_string()) {
    throw ParseError("GeoJSON '" + path + "': object lacks a string \"type\" member");
  }
  return node["type"].get<std::string>();
}

Vertex parse_position(const json& pos, const std::string& where) {
  if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
    throw ParseError(where + ": position must be an array of at least two numbers");
  }
  return Vertex{pos[0].get<double>(), pos[1].get<double>()};
}

Ring parse_ring(const json& arr, const std::string& where,
                std::vector<std::string>* warnings) {
  if (!arr.is_array() || arr.empty()) {
    throw ParseError(where + ": ring must be a non-empty array of positions");
  }
  Ring ring;
  ring.reserve(arr.size() + 1);
  for (const json& pos : arr) ring.push_back(parse_position(pos, where));
  if (!(ring.front() == ring.back())) {
    ring.push_back(ring.front());  // auto-close, warn rather than reject
    if (warnings) warnings->push_back(where + " was not closed; appended closing vertex");
  }
  return ring;
}

Polygon parse_polygon(const json& rings, const std::string& where,
                      std::vector<std::string>* warnings) {
  if (!rings.is_array() || rings.empty()) {
    throw ParseError(where + ": coordinates must be a non-empty array of rings");
  }
  Polygon poly;
  for (std::size_t i = 0; i < rings.size(); ++i) {
    Ring ring = parse_ring(rings[i], where + " ring " + std::to_string(i), warnings);
    if (i == 0) {
      poly.outer = std::move(ring);
    } else {
      poly.holes.push_back(std::move(ring));
    }
  }
  return poly;
}

// Pulls an id string out of a Feature's "id" member or its properties.
void extract_id(const json& feature, std::string* id) {
  if (feature.contains("id")) {
    const json& v = feature["id"];
    if (v.is_string()) {
      *id = v.get<std::string>();
      return;
    }
    if (v.is_number_integer()) {
      *id = std::to_string(v.get<long long>());
      return;
    }
  }
  if (feature.contains("properties") && feature["properties"].is_object()) {
    const json& props = feature["properties"];
    for (const char* key : {"id", "name"}) {
      if (props.contains(key) && props[key].is_string()) {
        *id = props[key].get<std::string>();
        return;
      }
    }
  }
}

}  // namespace

PolygonSet read_polygons(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open GeoJSON '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("GeoJSON '" + path + "': " + std::string(e.what()));
  }

  PolygonSet set;
  set.id = std::filesystem::path(path).stem().string();

  const json* node = &doc;
  std::string type = geometry_type(*node, path);
  if (type == "FeatureCollection") {
    if (!node->contains("features") || !(*node)["features"].is_array() ||
        (*node)["features"].empty()) {
      throw ParseError("GeoJSON '" + path + "': FeatureCollection contains no features");
    }
    const json& features = (*node)["features"];
    if (features.size() > 1 && warnings) {
      warnings->push_back("GeoJSON '" + path + "': using first of " +
                          std::to_string(features.size()) + " features");
    }
    node = &features[0];
    type = geometry_type(*node, path);
  }
  if (type == "Feature") {
    extract_id(*node, &set.id);
    if (!node->contains("geometry") || !(*node)["geometry"].is_object()) {
      throw ParseError("GeoJSON '" + path + "': feature lacks a geometry object");
    }
    node = &(*node)["geometry"];
    type = geometry_type(*node, path);
  }

  if (!node->contains("coordinates")) {
    throw ParseError("GeoJSON '" + path + "': geometry lacks \"coordinates\"");
  }
  const json& coords = (*node)["coordinates"];
  if (type == "Polygon") {
    set.polygons.push_back(parse_polygon(coords, "GeoJSON '" + path + "' Polygon", warnings));
  } else if (type == "MultiPolygon") {
    if (!coords.is_array() || coords.empty()) {
      throw ParseError("GeoJSON '" + path +
                       "': MultiPolygon coordinates must be a non-empty array");
    }
    for (std::size_t i = 0; i < coords.size(); ++i) {
      set.polygons.push_back(parse_polygon(
          coords[i], "GeoJSON '" + path + "' MultiPolygon part " + std::to_string(i),
          warnings));
    }
  } else {
    throw UnsupportedGeometry("GeoJSON '" + path + "': geometry type '" + type +
                              "' is not supported; expected Polygon or MultiPolygon");
  }

  validate(set);
  return set;
}

}  // namespace resext
