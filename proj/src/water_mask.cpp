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

#include "resext/water_mask.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "resext/errors.hpp"
#include "resext/format.hpp"

namespace resext {

void validate(const MaskParams& p) {
  if (p.min_pixels < 1) {
    throw ParamError("mask min_pixels must be >= 1, got " + std::to_string(p.min_pixels));
  }
}

Raster classify_water(const Scene& s, double t_vv, double t_vh, Combine combine) {
  validate(s);
  if (s.vv.units != Units::Decibel) {
    throw UnitsError("classify_water expects a Decibel scene");
  }
  if (!std::isfinite(t_vv) || !std::isfinite(t_vh)) {
    throw ParamError("water thresholds must be finite");
  }

  Raster mask = make_raster(s.vv.geo, 0.0, -9999.0, Units::Label);
  const bool use_vv = combine != Combine::VhOnly;
  const bool use_vh = combine != Combine::VvOnly;
  for (std::size_t i = 0; i < mask.values.size(); ++i) {
    const bool vv_ok = s.vv.is_valid(s.vv.values[i]);
    const bool vh_ok = s.vh.is_valid(s.vh.values[i]);
    if ((use_vv && !vv_ok) || (use_vh && !vh_ok)) {
      mask.values[i] = mask.nodata;
      continue;
    }
    const bool vv_water = s.vv.values[i] < t_vv;
    const bool vh_water = s.vh.values[i] < t_vh;
    bool water = false;
    switch (combine) {
      case Combine::And: water = vv_water && vh_water; break;
      case Combine::Or: water = vv_water || vh_water; break;
      case Combine::VvOnly: water = vv_water; break;
      case Combine::VhOnly: water = vh_water; break;
    }
    mask.values[i] = water ? 1.0 : 0.0;
  }
  return mask;
}

namespace {

// Union-find over provisional labels; unite keeps the smaller root.
class UnionFind {
 public:
  int add() {
    parent_.push_back(int(parent_.size()));
    return int(parent_.size()) - 1;
  }
  int find(int x) {
    while (parent_[std::size_t(x)] != x) {
      parent_[std::size_t(x)] = parent_[std::size_t(parent_[std::size_t(x)])];
      x = parent_[std::size_t(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[std::size_t(b)] = a;
  }

 private:
  std::vector<int> parent_;
};

void require_binary(const Raster& mask) {
  for (std::size_t i = 0; i < mask.values.size(); ++i) {
    const double v = mask.values[i];
    if (mask.is_valid(v) && v != 0.0 && v != 1.0) {
      throw ParamError("mask is not binary: value " + format_shortest(v) +
                       " at pixel index " + std::to_string(i));
    }
  }
}

}  // namespace

Components connected_components(const Raster& mask, Connectivity connectivity) {
  validate(mask);
  require_binary(mask);

  const int nrows = mask.geo.nrows;
  const int ncols = mask.geo.ncols;
  std::vector<int> prov(mask.cell_count(), 0);  // 0 = background
  UnionFind uf;
  uf.add();  // reserve index 0 for background

  // First pass: provisional labels from already-visited neighbors.
  for (int row = 0; row < nrows; ++row) {
    for (int col = 0; col < ncols; ++col) {
      if (!mask.valid_at(row, col) || mask.at(row, col) != 1.0) continue;
      const std::size_t idx = std::size_t(row) * ncols + col;
      int label = 0;
      auto consider = [&](int r, int c) {
        if (r < 0 || c < 0 || c >= ncols) return;
        const int other = prov[std::size_t(r) * ncols + c];
        if (other == 0) return;
        if (label == 0) {
          label = other;
        } else {
          uf.unite(label, other);
          label = std::min(label, other);
        }
      };
      consider(row, col - 1);
      consider(row - 1, col);
      if (connectivity == Connectivity::Eight) {
        consider(row - 1, col - 1);
        consider(row - 1, col + 1);
      }
      prov[idx] = label != 0 ? label : uf.add();
    }
  }

  // Second pass: dense labels 1..K in row-major discovery order.
  Components out;
  out.labels = mask;
  out.labels.units = Units::Label;
  std::vector<int> dense(mask.cell_count() + 1, 0);
  int next = 0;
  for (std::size_t i = 0; i < prov.size(); ++i) {
    if (prov[i] == 0) continue;
    const int root = uf.find(prov[i]);
    if (dense[std::size_t(root)] == 0) {
      dense[std::size_t(root)] = ++next;
      out.sizes.push_back(0);
    }
    const int label = dense[std::size_t(root)];
    out.labels.values[i] = double(label);
    ++out.sizes[std::size_t(label - 1)];
  }
  return out;
}

FilterResult filter_small_components(const Components& cc, int min_pixels) {
  if (min_pixels < 1) {
    throw ParamError("min_pixels must be >= 1, got " + std::to_string(min_pixels));
  }
  FilterResult out;
  out.mask = cc.labels;
  for (long long size : cc.sizes) {
    if (size < min_pixels) ++out.removed_components;
  }
  for (double& v : out.mask.values) {
    if (!out.mask.is_valid(v) || v == 0.0) continue;
    const long long size = cc.sizes[std::size_t(v) - 1];
    v = size >= min_pixels ? 1.0 : 0.0;
  }
  return out;
}

double compute_area_km2(const Raster& mask, const GridGeo& geo) {
  if (geo.crs_kind != CrsKind::ProjectedMeters) {
    throw CrsError("area computation requires a projected metric grid; "
                   "degree cells have no fixed area");
  }
  long long count = 0;
  for (double v : mask.values) {
    if (mask.is_valid(v) && v == 1.0) ++count;
  }
  return double(count) * geo.cellsize * geo.cellsize / 1e6;
}

Scene despeckle_to_db(const Scene& s, const SpeckleParams& sp) {
  validate(s);
  auto one_band = [&](const Raster& band) {
    if (band.units == Units::Decibel) {
      return linear_to_db(refined_lee(db_to_linear(band), sp));
    }
    return linear_to_db(refined_lee(band, sp));
  };
  Scene out;
  out.vv = one_band(s.vv);
  out.vh = one_band(s.vh);
  out.date = s.date;
  out.reservoir_id = s.reservoir_id;
  return out;
}

SceneResult classify_and_measure(const Scene& db_scene, const SceneThresholds& t,
                                 const MaskParams& mp) {
  validate(mp);
  Raster raw = classify_water(db_scene, t.vv.threshold, t.vh.threshold, mp.combine);
  Components cc = connected_components(raw, mp.connectivity);
  FilterResult fr = filter_small_components(cc, mp.min_pixels);

  SceneResult res;
  res.record.reservoir_id = db_scene.reservoir_id;
  res.record.date = db_scene.date;
  res.record.t_vv = t.vv.threshold;
  res.record.t_vh = t.vh.threshold;
  for (double v : fr.mask.values) {
    if (fr.mask.is_valid(v) && v == 1.0) ++res.record.water_pixels;
  }
  res.record.area_km2 = compute_area_km2(fr.mask, db_scene.vv.geo);
  res.record.removed_components = fr.removed_components;
  res.record.low_confidence = t.vv.low_confidence || t.vh.low_confidence;
  res.mask = std::move(fr.mask);
  res.thresholds = t;
  return res;
}

SceneResult process_scene(const Scene& s, const SpeckleParams& sp, const MaskParams& mp,
                          int nbins) {
  try {
    Scene db = despeckle_to_db(s, sp);
    SceneThresholds t = scene_thresholds(db, nbins);
    return classify_and_measure(db, t, mp);
  } catch (Error& e) {
    e.prepend_context("scene " + s.reservoir_id + " " + to_string(s.date));
    throw;
  }
}

void write_extent_csv(const std::vector<WaterExtentRecord>& records,
                      const std::string& path) {
  std::ostringstream out;
  out << "reservoir_id,date,area_km2,t_vv,t_vh,water_pixels,removed_components,"
         "low_confidence\n";
  for (const WaterExtentRecord& r : records) {
    if (r.reservoir_id.find_first_of(",\n\r") != std::string::npos) {
      throw ParamError("reservoir_id '" + r.reservoir_id + "' cannot contain , or newline");
    }
    out << r.reservoir_id << ',' << to_string(r.date) << ','
        << format_shortest(r.area_km2) << ',' << format_shortest(r.t_vv) << ','
        << format_shortest(r.t_vh) << ',' << r.water_pixels << ','
        << r.removed_components << ',' << (r.low_confidence ? 1 : 0) << '\n';
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << out.str();
  if (!file) throw IoError("failed writing extent CSV '" + path + "'");
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_number(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw ParseError(where + ": non-numeric field \"" + text + "\"");
  }
  return v;
}

}  // namespace

std::vector<WaterExtentRecord> read_extent_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open extent CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("extent CSV '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string header =
      "reservoir_id,date,area_km2,t_vv,t_vh,water_pixels,removed_components,"
      "low_confidence";
  if (line != header) {
    throw ParseError("extent CSV '" + path + "': unexpected header \"" + line + "\"");
  }

  std::vector<WaterExtentRecord> records;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "extent CSV '" + path + "' row " + std::to_string(row);
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != 8) {
      throw ParseError(where + ": expected 8 fields, got " + std::to_string(f.size()));
    }
    WaterExtentRecord r;
    r.reservoir_id = f[0];
    try {
      r.date = parse_date(f[1]);
    } catch (Error& e) {
      e.prepend_context(where);
      throw;
    }
    r.area_km2 = parse_number(f[2], where);
    r.t_vv = parse_number(f[3], where);
    r.t_vh = parse_number(f[4], where);
    r.water_pixels = (long long)(parse_number(f[5], where));
    r.removed_components = (long long)(parse_number(f[6], where));
    if (f[7] != "0" && f[7] != "1") {
      throw ParseError(where + ": low_confidence must be 0 or 1, got \"" + f[7] + "\"");
    }
    r.low_confidence = f[7] == "1";
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace resext
