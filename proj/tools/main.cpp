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
// resext command-line interface.
//
//   resext extent   VV/VH scene directories -> water-extent CSV (+ masks)
//   resext rain     daily rainfall directory -> annual mean / climatology /
//                   basin series
//   resext analyze  extent + rainfall series -> box stats, plots, lag table
//   resext synth    ground-truth generator for the two input kinds
//
// Exit codes: 0 success, 1 a scene hard-failed or an internal error
// occurred, 2 usage or input error. Every command writes byte-identical
// outputs when rerun over unchanged inputs.

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "resext/analysis.hpp"
#include "resext/ascii_grid.hpp"
#include "resext/date.hpp"
#include "resext/errors.hpp"
#include "resext/format.hpp"
#include "resext/polygon.hpp"
#include "resext/rainfall.hpp"
#include "resext/raster.hpp"
#include "resext/series.hpp"
#include "resext/speckle.hpp"
#include "resext/synth.hpp"
#include "resext/threshold.hpp"
#include "resext/water_mask.hpp"

namespace fs = std::filesystem;
using namespace resext;

namespace {

// --------------------------------------------------------------------------
// Configuration file
//
// A config file is flat `key=value` text ('#' comments, blank lines
// allowed). Keys are the long option names of any subcommand without the
// leading dashes, e.g. `min-pixels=50` or `vv-dir=/data/vv`. Values are
// applied as defaults before the command line is parsed, so flags always
// win. Unknown or duplicate keys are rejected. The file is named by
// --config or, when that flag is absent, by the RESEXT_CONFIG environment
// variable.

using ConfigApplier = std::function<void(const std::string&)>;
using ConfigRegistry = std::map<std::string, std::vector<ConfigApplier>>;

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::map<std::string, std::string> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected key=value, got \"" + stripped + "\"");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": empty key");
    }
    if (!entries.emplace(key, value).second) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": duplicate key \"" +
                       key + "\"");
    }
  }
  return entries;
}

int config_to_int(const std::string& key, const std::string& raw) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(raw, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != raw.size() || raw.empty()) {
    throw ParamError("config key '" + key + "': expected an integer, got \"" + raw +
                     "\"");
  }
  return v;
}

double config_to_double(const std::string& key, const std::string& raw) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(raw, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != raw.size() || raw.empty()) {
    throw ParamError("config key '" + key + "': expected a number, got \"" + raw +
                     "\"");
  }
  return v;
}

std::uint64_t config_to_u64(const std::string& key, const std::string& raw) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(raw, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != raw.size() || raw.empty()) {
    throw ParamError("config key '" + key + "': expected a non-negative integer, "
                     "got \"" + raw + "\"");
  }
  return v;
}

bool config_to_bool(const std::string& key, const std::string& raw) {
  if (raw == "1" || raw == "true") return true;
  if (raw == "0" || raw == "false") return false;
  throw ParamError("config key '" + key + "': expected true|false|1|0, got \"" +
                   raw + "\"");
}

/// Registers CLI11 options and, in parallel, config-file appliers that
/// write into the same bound variables.
class OptionBinder {
 public:
  OptionBinder(CLI::App* cmd, ConfigRegistry* registry)
      : cmd_(cmd), registry_(registry) {}

  template <typename T>
  CLI::Option* add(const std::string& flag, T& var, const std::string& desc) {
    const std::string key = key_of(flag);
    (*registry_)[key].push_back([&var, key](const std::string& raw) {
      if constexpr (std::is_same_v<T, std::string>) {
        var = raw;
      } else if constexpr (std::is_same_v<T, int>) {
        var = config_to_int(key, raw);
      } else if constexpr (std::is_same_v<T, double>) {
        var = config_to_double(key, raw);
      } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        var = config_to_u64(key, raw);
      } else {
        static_assert(std::is_same_v<T, std::string>, "unsupported option type");
      }
    });
    return cmd_->add_option(flag, var, desc);
  }

  CLI::Option* add_flag(const std::string& flag, bool& var, const std::string& desc) {
    const std::string key = key_of(flag);
    (*registry_)[key].push_back([&var, key](const std::string& raw) {
      var = config_to_bool(key, raw);
    });
    return cmd_->add_flag(flag, var, desc);
  }

 private:
  // "--min-pixels,-m" -> "min-pixels" (first long name names the config key).
  static std::string key_of(const std::string& flag) {
    const std::string first = flag.substr(0, flag.find(','));
    std::size_t dashes = 0;
    while (dashes < first.size() && first[dashes] == '-') ++dashes;
    return first.substr(dashes);
  }

  CLI::App* cmd_;
  ConfigRegistry* registry_;
};

// --------------------------------------------------------------------------
// Small shared helpers

void write_text(const fs::path& path, const std::string& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << body;
  if (!out) throw IoError("failed writing " + path.string());
}

void ensure_parent_dir(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

Combine combine_of(const std::string& s) {
  if (s == "and") return Combine::And;
  if (s == "or") return Combine::Or;
  if (s == "vv") return Combine::VvOnly;
  if (s == "vh") return Combine::VhOnly;
  throw ParamError("combine must be one of and|or|vv|vh, got \"" + s + "\"");
}

Connectivity connectivity_of(const std::string& s) {
  if (s == "4") return Connectivity::Four;
  if (s == "8") return Connectivity::Eight;
  throw ParamError("connectivity must be 4 or 8, got \"" + s + "\"");
}

Units input_units_of(const std::string& s) {
  if (s == "linear") return Units::LinearPower;
  if (s == "db") return Units::Decibel;
  throw ParamError("input-units must be linear or db, got \"" + s + "\"");
}

/// All YYYY-MM-DD.asc files of a directory, sorted by date. Other
/// extensions are ignored; an .asc stem that is not a date is an error.
std::map<Date, fs::path> scan_dated_dir(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir);
  std::map<Date, fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".asc") continue;
    try {
      out.emplace(parse_date(entry.path().stem().string()), entry.path());
    } catch (Error& e) {
      e.prepend_context(entry.path().string());
      throw;
    }
  }
  if (out.empty()) throw EmptyInput("no .asc files in " + dir);
  return out;
}

Date add_months(const Date& d, int months) {
  const long mi = month_index(d) + months;
  const int year = int(mi / 12);
  const int month = int(mi % 12) + 1;
  return Date{year, month, std::min(d.day, days_in_month(year, month))};
}

// --------------------------------------------------------------------------
// resext extent

struct ExtentArgs {
  std::string vv_dir;
  std::string vh_dir;
  std::string reservoir;
  std::string out_csv;
  std::string mask_out_dir;
  std::string input_units = "linear";
  int window = 7;
  double looks = 4.4;
  int min_valid = 9;
  std::string combine = "and";
  int min_pixels = 25;
  std::string connectivity = "8";
  int nbins = 256;
  int jobs = 1;
};

int cmd_extent(const ExtentArgs& args) {
  const SpeckleParams sp{args.window, args.looks, args.min_valid};
  validate(sp);
  const MaskParams mp{combine_of(args.combine), args.min_pixels,
                      connectivity_of(args.connectivity)};
  validate(mp);
  const Units units = input_units_of(args.input_units);

  const std::map<Date, fs::path> vv_files = scan_dated_dir(args.vv_dir);
  const std::map<Date, fs::path> vh_files = scan_dated_dir(args.vh_dir);

  struct ScenePrep {
    Date date;
    fs::path vv_path;
    fs::path vh_path;
    Scene db;                                   // despeckled, in dB
    std::optional<SceneThresholds> thresholds;  // nullopt: degenerate histogram
    std::string error;                          // nonempty: scene hard-failed
  };
  std::vector<ScenePrep> preps;
  for (const auto& [date, vv_path] : vv_files) {
    const auto vh_it = vh_files.find(date);
    if (vh_it == vh_files.end()) {
      std::fprintf(stderr, "warning: %s %s: no VH counterpart, scene skipped\n",
                   args.reservoir.c_str(), to_string(date).c_str());
      continue;
    }
    preps.push_back({date, vv_path, vh_it->second, {}, std::nullopt, {}});
  }
  for (const auto& [date, vh_path] : vh_files) {
    if (!vv_files.count(date)) {
      std::fprintf(stderr, "warning: %s %s: no VV counterpart, scene skipped\n",
                   args.reservoir.c_str(), to_string(date).c_str());
    }
  }
  if (preps.empty()) {
    throw EmptyInput("no VV/VH scene pairs between " + args.vv_dir + " and " +
                     args.vh_dir);
  }

  // Phase 1, parallel: load, despeckle, per-band Otsu. Results land at
  // fixed indices, so job count never changes the output.
  auto prepare = [&](ScenePrep& prep) {
    try {
      Scene scene{read_ascii_grid(prep.vv_path, CrsKind::ProjectedMeters, units),
                  read_ascii_grid(prep.vh_path, CrsKind::ProjectedMeters, units),
                  prep.date, args.reservoir};
      prep.db = despeckle_to_db(scene, sp);
      try {
        prep.thresholds = scene_thresholds(prep.db, args.nbins);
      } catch (const DegenerateDistribution&) {
        prep.thresholds = std::nullopt;  // single-class scene; see phase 2
      }
    } catch (const std::exception& e) {
      prep.error = e.what();
    }
  };
  const int jobs = std::max(1, args.jobs);
  if (jobs == 1 || preps.size() <= 1) {
    for (ScenePrep& prep : preps) prepare(prep);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < preps.size();) {
        prepare(preps[i]);
      }
    };
    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min<std::size_t>(std::size_t(jobs), preps.size());
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Phase 2, sequential in date order: resolve thresholds (with the
  // low-confidence fallback), measure, write masks, collect records.
  std::vector<WaterExtentRecord> records;
  std::optional<std::pair<Date, SceneThresholds>> last_good;
  bool any_hard_failure = false;
  for (ScenePrep& prep : preps) {
    const std::string scene_tag =
        args.reservoir + " " + to_string(prep.date);
    if (!prep.error.empty()) {
      std::fprintf(stderr, "error: %s: %s\n", scene_tag.c_str(), prep.error.c_str());
      any_hard_failure = true;
      continue;
    }
    bool substituted = false;
    SceneThresholds effective;
    if (prep.thresholds &&
        !(prep.thresholds->vv.low_confidence || prep.thresholds->vh.low_confidence)) {
      effective = *prep.thresholds;
      last_good = {prep.date, effective};
    } else if (last_good) {
      // Flagged or degenerate scene: reuse the reservoir's most recent
      // trustworthy thresholds instead of a split of a single-class
      // histogram.
      effective = last_good->second;
      substituted = true;
      const char* why = prep.thresholds ? "low-confidence thresholds"
                                        : "single-class histogram";
      std::fprintf(stderr, "warning: %s: %s; reusing thresholds from %s\n",
                   scene_tag.c_str(), why,
                   to_string(last_good->first).c_str());
    } else {
      const char* why = prep.thresholds
                            ? "low-confidence thresholds"
                            : "single-class histogram";
      std::fprintf(stderr,
                   "error: %s: %s and no earlier high-confidence scene to fall "
                   "back on; scene failed\n",
                   scene_tag.c_str(), why);
      any_hard_failure = true;
      continue;
    }

    SceneResult result = classify_and_measure(prep.db, effective, mp);
    if (substituted) result.record.low_confidence = true;
    if (!args.mask_out_dir.empty()) {
      fs::create_directories(args.mask_out_dir);
      write_ascii_grid(result.mask,
                       fs::path(args.mask_out_dir) / (to_string(prep.date) + ".asc"));
    }
    records.push_back(std::move(result.record));
    prep.db = Scene{};  // scenes can be large; drop the despeckled copy now
  }

  if (!records.empty()) {
    ensure_parent_dir(args.out_csv);
    write_extent_csv(records, args.out_csv);
    std::fprintf(stderr, "wrote %zu extent record(s) to %s\n", records.size(),
                 args.out_csv.c_str());
  } else {
    std::fprintf(stderr, "error: every scene failed; %s not written\n",
                 args.out_csv.c_str());
  }
  return any_hard_failure ? 1 : 0;
}

// --------------------------------------------------------------------------
// resext rain

struct RainArgs {
  std::string daily_dir;
  std::string mode;
  std::string polygon;
  int start_year = 0;  // 0: first year in the stack
  int end_year = 0;    // 0: last year in the stack
  std::string out;
  bool latitude_weighting = true;
};

void write_climatology_outputs(const Climatology& clim, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  for (int m = 1; m <= 12; ++m) {
    char name[16];
    std::snprintf(name, sizeof(name), "month_%02d.asc", m);
    write_ascii_grid(clim.cell_means[std::size_t(m - 1)], out_dir / name);
  }
  std::ostringstream csv;
  csv << "month,mean_mm,years,excluded_years\n";
  for (int m = 1; m <= 12; ++m) {
    const MonthClimatology& mc = clim.table.months[std::size_t(m - 1)];
    csv << m << ',' << format_shortest(mc.mean_mm) << ',' << mc.per_year.size()
        << ',';
    for (std::size_t i = 0; i < mc.excluded_years.size(); ++i) {
      if (i) csv << ';';
      csv << mc.excluded_years[i];
    }
    csv << '\n';
  }
  write_text(out_dir / "climatology.csv", csv.str());
}

int cmd_rain(const RainArgs& args) {
  const DailyStack stack = load_stack(args.daily_dir);
  const int start_year =
      args.start_year != 0 ? args.start_year : stack.dates.front().year;
  const int end_year = args.end_year != 0 ? args.end_year : stack.dates.back().year;
  if (end_year < start_year) {
    throw ParamError("end-year " + std::to_string(end_year) + " precedes start-year " +
                     std::to_string(start_year));
  }

  if (args.mode == "annual-mean") {
    const Raster mean = annual_mean(stack, start_year, end_year);
    ensure_parent_dir(args.out);
    write_ascii_grid(mean, args.out);
  } else if (args.mode == "monthly-climatology") {
    write_climatology_outputs(monthly_climatology(stack, start_year, end_year),
                              args.out);
  } else if (args.mode == "zonal") {
    if (args.polygon.empty()) {
      throw ParamError("zonal mode needs --polygon");
    }
    std::vector<std::string> warnings;
    const PolygonSet poly = read_polygons(args.polygon, &warnings);
    const Raster mask = rasterize_polygon(poly, stack.geo, &warnings);
    for (const std::string& w : warnings) {
      std::fprintf(stderr, "warning: %s\n", w.c_str());
    }
    SeriesTable series;
    series.label = poly.id;
    series.units = "mm/day";
    for (std::size_t i = 0; i < stack.dates.size(); ++i) {
      const Date& d = stack.dates[i];
      if (d.year < start_year || d.year > end_year) continue;
      series.entries.push_back(
          {d, zonal_mean(stack.layers[i], mask, args.latitude_weighting)});
    }
    if (series.empty()) {
      throw EmptyPeriod("no daily layers between " + std::to_string(start_year) +
                        " and " + std::to_string(end_year));
    }
    ensure_parent_dir(args.out);
    write_series_csv(series, args.out);
  } else {
    throw ParamError("mode must be annual-mean, monthly-climatology, or zonal, "
                     "got \"" + args.mode + "\"");
  }
  return 0;
}

// --------------------------------------------------------------------------
// resext analyze

struct AnalyzeArgs {
  std::string extent_csv;
  std::string rain_csv;
  std::string out_dir;
  int max_lag = 3;
};

std::array<BoxStats, 12> monthly_box_stats(const SeriesTable& series) {
  const std::array<std::vector<double>, 12> buckets = group_by_month(series);
  std::array<BoxStats, 12> stats{};
  for (int m = 0; m < 12; ++m) {
    if (!buckets[std::size_t(m)].empty()) {
      stats[std::size_t(m)] = box_stats(buckets[std::size_t(m)]);
    }
  }
  return stats;
}

SeriesTable extent_series_from_csv(const std::string& path) {
  const std::vector<WaterExtentRecord> records = read_extent_csv(path);
  SeriesTable series;
  series.units = "km^2";
  for (const WaterExtentRecord& r : records) {
    if (series.label.empty()) {
      series.label = r.reservoir_id;
    } else if (series.label != r.reservoir_id) {
      throw ParamError(path + " mixes reservoirs \"" + series.label + "\" and \"" +
                       r.reservoir_id + "\"; analyze one reservoir at a time");
    }
    series.entries.push_back({r.date, r.area_km2});
  }
  std::stable_sort(series.entries.begin(), series.entries.end(),
                   [](const SeriesEntry& a, const SeriesEntry& b) {
                     return a.date < b.date;
                   });
  validate(series);
  return series;
}

int cmd_analyze(const AnalyzeArgs& args) {
  if (args.extent_csv.empty() && args.rain_csv.empty()) {
    throw ParamError("analyze needs --extent-csv and/or --rain-csv");
  }
  fs::create_directories(args.out_dir);
  const fs::path out_dir(args.out_dir);

  std::optional<SeriesTable> rain;
  if (!args.rain_csv.empty()) {
    rain = read_series_csv(args.rain_csv);
    if (rain->units.empty()) rain->units = "mm";
    const auto stats = monthly_box_stats(*rain);
    write_box_csv(stats, (out_dir / "rain_box.csv").string());
    write_text(out_dir / "rain_box.svg",
               render_box_svg(stats, "Monthly rainfall (" + rain->label + ")",
                              rain->units));
  }

  std::optional<SeriesTable> extent;
  if (!args.extent_csv.empty()) {
    extent = extent_series_from_csv(args.extent_csv);
    const auto stats = monthly_box_stats(*extent);
    write_box_csv(stats, (out_dir / "extent_box.csv").string());
    write_text(out_dir / "extent_box.svg",
               render_box_svg(stats, "Monthly water extent (" + extent->label + ")",
                              extent->units));
  }

  if (!rain || !extent) {
    std::fprintf(stderr,
                 "notice: only one series provided; dual-series plot and lag "
                 "correlation skipped\n");
    return 0;
  }

  SeriesTable monthly_rain = monthly_mean_series(*rain);
  SeriesTable monthly_extent = monthly_mean_series(*extent);
  write_text(out_dir / "rain_extent_series.svg",
             render_series_svg(monthly_rain, monthly_extent,
                               "Monthly rainfall and water extent"));
  const LagCorrResult lag =
      lag_correlation(monthly_rain, monthly_extent, args.max_lag);
  write_lag_csv(lag, (out_dir / "lag.csv").string());
  return 0;
}

// --------------------------------------------------------------------------
// resext synth

struct SynthArgs {
  std::string kind;
  std::string out_dir;
  std::uint64_t seed = 0;
  // Zero/empty mean "kind-specific default": scenes are 200 cells at 10 m
  // starting 2022-01-15; rain stacks are 6 cells at 0.05 deg over
  // 2019-01-01..2020-12-31.
  std::string start_date;
  std::string end_date;
  int size = 0;
  double cellsize = 0.0;
  // scene kind
  int count = 1;
  std::string reservoir = "synthetic";
  double looks = 4.4;
  int noise_blobs = 0;
  int max_blob_pixels = 24;
  // rain kind
  std::string pattern = "10,10,20,45,90,180,240,220,150,70,25,10";
  double noise_shape = 2.0;
};

/// Centered square water body covering half the grid extent linearly.
PolygonSet square_water(const GridGeo& geo, const std::string& id) {
  const double w = geo.ncols * geo.cellsize;
  const double h = geo.nrows * geo.cellsize;
  const double x0 = geo.x_origin + 0.25 * w;
  const double x1 = geo.x_origin + 0.75 * w;
  const double y0 = geo.y_origin + 0.25 * h;
  const double y1 = geo.y_origin + 0.75 * h;
  PolygonSet set;
  set.id = id;
  set.polygons.push_back(
      {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}}, {}});
  return set;
}

std::array<double, 12> parse_pattern(const std::string& text) {
  std::array<double, 12> pattern{};
  std::stringstream in(text);
  std::string field;
  std::size_t i = 0;
  while (std::getline(in, field, ',')) {
    if (i >= pattern.size()) break;
    pattern[i++] = config_to_double("pattern", trim(field));
  }
  if (i != pattern.size() || in.rdbuf()->in_avail() != 0) {
    throw ParamError("pattern needs exactly 12 comma-separated monthly values, "
                     "got \"" + text + "\"");
  }
  return pattern;
}

int cmd_synth(const SynthArgs& args) {
  const fs::path out_dir(args.out_dir);
  nlohmann::json truth;
  truth["seed"] = args.seed;

  if (args.kind == "scene") {
    if (args.count < 1) throw ParamError("count must be >= 1");
    const int size = args.size != 0 ? args.size : 200;
    const double cellsize = args.cellsize != 0.0 ? args.cellsize : 10.0;
    SynthSceneSpec spec;
    spec.geo = GridGeo{size, size, 0.0, 0.0, cellsize, CrsKind::ProjectedMeters};
    spec.water = square_water(spec.geo, args.reservoir);
    spec.looks = args.looks;
    spec.noise_blobs = args.noise_blobs;
    spec.max_blob_pixels = args.max_blob_pixels;

    const Date start =
        parse_date(args.start_date.empty() ? "2022-01-15" : args.start_date);
    truth["kind"] = "scene";
    truth["reservoir"] = args.reservoir;
    truth["cellsize"] = cellsize;
    truth["size"] = size;
    truth["scenes"] = nlohmann::json::array();
    fs::create_directories(out_dir / "vv");
    fs::create_directories(out_dir / "vh");
    for (int i = 0; i < args.count; ++i) {
      spec.seed = args.seed + std::uint64_t(i);
      const Date date = add_months(start, i);  // one scene per month
      const SynthScene sample = gen_scene(spec);
      write_ascii_grid(sample.scene.vv, out_dir / "vv" / (to_string(date) + ".asc"));
      write_ascii_grid(sample.scene.vh, out_dir / "vh" / (to_string(date) + ".asc"));
      truth["scenes"].push_back({{"date", to_string(date)},
                                 {"seed", spec.seed},
                                 {"true_area_km2", sample.true_area_km2}});
    }
  } else if (args.kind == "rain") {
    const Date start =
        parse_date(args.start_date.empty() ? "2019-01-01" : args.start_date);
    const Date end = parse_date(args.end_date.empty() ? "2020-12-31" : args.end_date);
    const std::array<double, 12> pattern = parse_pattern(args.pattern);
    const int size = args.size != 0 ? args.size : 6;
    const double cellsize = args.cellsize != 0.0 ? args.cellsize : 0.05;
    const GridGeo geo{size, size, 30.0, -2.0, cellsize, CrsKind::Geographic};
    const DailyStack stack =
        gen_rain_stack(geo, start, end, pattern, args.seed, args.noise_shape);
    fs::create_directories(out_dir / "daily");
    for (std::size_t i = 0; i < stack.dates.size(); ++i) {
      write_ascii_grid(stack.layers[i],
                       out_dir / "daily" / (to_string(stack.dates[i]) + ".asc"));
    }

    // A basin polygon covering the grid, for zonal runs over this stack.
    const double w = geo.ncols * geo.cellsize;
    const double h = geo.nrows * geo.cellsize;
    nlohmann::json ring = nlohmann::json::array(
        {{geo.x_origin, geo.y_origin},
         {geo.x_origin + w, geo.y_origin},
         {geo.x_origin + w, geo.y_origin + h},
         {geo.x_origin, geo.y_origin + h},
         {geo.x_origin, geo.y_origin}});
    nlohmann::json basin = {
        {"type", "Feature"},
        {"id", "basin"},
        {"properties", nlohmann::json::object()},
        {"geometry",
         {{"type", "Polygon"}, {"coordinates", nlohmann::json::array({ring})}}}};
    write_text(out_dir / "basin.geojson", basin.dump(2) + "\n");

    truth["kind"] = "rain";
    truth["start"] = to_string(start);
    truth["end"] = to_string(end);
    truth["pattern"] = pattern;
    truth["noise_shape"] = args.noise_shape;
    truth["ncols"] = geo.ncols;
    truth["nrows"] = geo.nrows;
    truth["cellsize"] = geo.cellsize;
  } else {
    throw ParamError("kind must be scene or rain, got \"" + args.kind + "\"");
  }

  write_text(out_dir / "truth.json", truth.dump(2) + "\n");
  return 0;
}

}  // namespace

// --------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"resext: reservoir water extents from dual-pol SAR scenes and "
               "gridded-rainfall analysis"};
  app.require_subcommand(1);
  ConfigRegistry registry;

  std::string config_flag;
  app.add_option("--config", config_flag,
                 "flat key=value config file supplying flag defaults "
                 "(RESEXT_CONFIG names a default; flags always win)");

  ExtentArgs ex;
  CLI::App* extent_cmd = app.add_subcommand(
      "extent", "Derive dated water-extent records from VV/VH scene directories");
  extent_cmd->fallthrough();
  {
    OptionBinder bind(extent_cmd, &registry);
    bind.add("--vv-dir", ex.vv_dir, "directory of YYYY-MM-DD.asc VV scenes")
        ->required();
    bind.add("--vh-dir", ex.vh_dir, "directory of YYYY-MM-DD.asc VH scenes")
        ->required();
    bind.add("--reservoir", ex.reservoir, "reservoir id for the output records")
        ->required();
    bind.add("--out-csv", ex.out_csv, "water-extent CSV to write")->required();
    bind.add("--mask-out-dir", ex.mask_out_dir,
             "also write cleaned 0/1 masks here, one YYYY-MM-DD.asc per scene");
    bind.add("--input-units", ex.input_units,
             "scene pixel units: linear (power) or db")
        ->check(CLI::IsMember({"linear", "db"}));
    bind.add("--window", ex.window, "refined Lee window size (odd, >= 5)");
    bind.add("--looks", ex.looks, "equivalent number of looks of the scenes");
    bind.add("--min-valid", ex.min_valid,
             "minimum valid samples in the directional sub-window");
    bind.add("--combine", ex.combine, "band combination rule: and|or|vv|vh")
        ->check(CLI::IsMember({"and", "or", "vv", "vh"}));
    bind.add("--min-pixels", ex.min_pixels,
             "remove water components smaller than this many pixels");
    bind.add("--connectivity", ex.connectivity, "component connectivity: 4 or 8")
        ->check(CLI::IsMember({"4", "8"}));
    bind.add("--nbins", ex.nbins, "histogram bins for Otsu thresholding");
    bind.add("--jobs", ex.jobs, "scenes to despeckle in parallel");
  }

  RainArgs ra;
  CLI::App* rain_cmd = app.add_subcommand(
      "rain", "Aggregate a directory of daily rainfall grids");
  rain_cmd->fallthrough();
  {
    OptionBinder bind(rain_cmd, &registry);
    bind.add("--daily-dir", ra.daily_dir, "directory of YYYY-MM-DD.asc daily grids")
        ->required();
    bind.add("--mode", ra.mode,
             "annual-mean (raster), monthly-climatology (directory), or zonal "
             "(basin series CSV)")
        ->required()
        ->check(CLI::IsMember({"annual-mean", "monthly-climatology", "zonal"}));
    bind.add("--polygon", ra.polygon, "GeoJSON basin polygon (zonal mode)");
    bind.add("--start-year", ra.start_year, "first year (default: first in stack)");
    bind.add("--end-year", ra.end_year, "last year (default: last in stack)");
    bind.add("--out", ra.out, "output raster, directory, or CSV (per mode)")
        ->required();
    bind.add_flag("--latitude-weighting,!--no-latitude-weighting",
                  ra.latitude_weighting,
                  "cos-latitude weights for zonal means on geographic grids");
  }

  AnalyzeArgs an;
  CLI::App* analyze_cmd = app.add_subcommand(
      "analyze", "Box statistics, plots, and rain-vs-extent lag correlation");
  analyze_cmd->fallthrough();
  {
    OptionBinder bind(analyze_cmd, &registry);
    bind.add("--extent-csv", an.extent_csv, "water-extent CSV from `resext extent`");
    bind.add("--rain-csv", an.rain_csv, "date,value rainfall series CSV");
    bind.add("--out-dir", an.out_dir, "directory for CSV/SVG outputs")->required();
    bind.add("--max-lag", an.max_lag, "largest extent-after-rain lag in months");
  }

  SynthArgs sy;
  CLI::App* synth_cmd = app.add_subcommand(
      "synth", "Generate synthetic inputs with a truth.json ground-truth file");
  synth_cmd->fallthrough();
  {
    OptionBinder bind(synth_cmd, &registry);
    bind.add("--kind", sy.kind, "scene (VV/VH pairs) or rain (daily stack)")
        ->required()
        ->check(CLI::IsMember({"scene", "rain"}));
    bind.add("--out-dir", sy.out_dir, "directory to populate")->required();
    bind.add("--seed", sy.seed, "random seed");
    bind.add("--count", sy.count, "scene kind: number of monthly scenes");
    bind.add("--start-date", sy.start_date,
             "scene kind: first scene date, later scenes step one month "
             "(default 2022-01-15); rain kind: first day (default 2019-01-01)");
    bind.add("--end-date", sy.end_date, "rain kind: last day (default 2020-12-31)");
    bind.add("--reservoir", sy.reservoir, "scene kind: reservoir id");
    bind.add("--size", sy.size,
             "grid side length in cells (default: 200 scene, 6 rain)");
    bind.add("--cellsize", sy.cellsize,
             "cell size (default: 10 m scene, 0.05 deg rain)");
    bind.add("--looks", sy.looks, "scene kind: speckle looks L");
    bind.add("--noise-blobs", sy.noise_blobs,
             "scene kind: false-water islands to inject");
    bind.add("--max-blob-pixels", sy.max_blob_pixels,
             "scene kind: largest injected island, in pixels");
    bind.add("--pattern", sy.pattern,
             "rain kind: 12 comma-separated monthly totals (mm)");
    bind.add("--noise-shape", sy.noise_shape,
             "rain kind: gamma noise shape (0 = noiseless)");
  }

  // Config file: --config wins over RESEXT_CONFIG; values become defaults
  // for the bound variables, so explicit flags override them.
  try {
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) {
        config_path = argv[i + 1];
      } else if (arg.rfind("--config=", 0) == 0) {
        config_path = arg.substr(9);
      }
    }
    if (config_path.empty()) {
      if (const char* env = std::getenv("RESEXT_CONFIG")) config_path = env;
    }
    if (!config_path.empty()) {
      for (const auto& [key, value] : load_config_file(config_path)) {
        const auto it = registry.find(key);
        if (it == registry.end()) {
          throw ParamError("unknown config key \"" + key + "\" in " + config_path);
        }
        for (const ConfigApplier& apply : it->second) apply(value);
      }
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (extent_cmd->parsed()) return cmd_extent(ex);
    if (rain_cmd->parsed()) return cmd_rain(ra);
    if (analyze_cmd->parsed()) return cmd_analyze(an);
    if (synth_cmd->parsed()) return cmd_synth(sy);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 0;
}
