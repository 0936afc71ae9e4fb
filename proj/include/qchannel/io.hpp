// Copyright 2026 The qchannel Authors
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

// io.hpp: flat result tables as CSV or JSON, and run manifests.
//
// Doubles are written in shortest round-trip form, so equal results give
// byte-identical files.

#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qchannel/analysis.hpp"
#include "qchannel/config.hpp"
#include "qchannel/version.hpp"

namespace qchannel {

inline constexpr int kSchemaVersion = 1;

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
      throw std::logic_error("table '" + name + "': row has " + std::to_string(row.size()) +
                             " cells, expected " + std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
  }
};

inline std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, *d);
    return std::string(buf, r.ptr);
  }
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

inline void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
}

/// {"schema_version", "table", "columns", "rows"}; non-finite numbers become strings.
inline nlohmann::json table_json(const Table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) {
      if (const auto* i = std::get_if<std::int64_t>(&c)) {
        r.push_back(*i);
      } else if (const auto* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) {
          r.push_back(*d);
        } else {
          r.push_back(format_cell(c));
        }
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(std::move(r));
  }
  return {{"schema_version", kSchemaVersion}, {"table", t.name}, {"columns", t.columns}, {"rows", rows}};
}

inline std::string extension(OutputFormat f) { return f == OutputFormat::csv ? ".csv" : ".json"; }

/// Writes `<prefix>.<table name>.<ext>` and returns the path.
inline std::string write_table(const Table& t, const std::string& prefix, OutputFormat f) {
  const std::filesystem::path path = prefix + "." + t.name + extension(f);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  if (f == OutputFormat::csv) {
    write_csv(t, os);
  } else {
    os << table_json(t).dump(1) << '\n';
  }
  if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
  return path.string();
}

// ---------------------------------------------------------------------------
// Standard tables

inline Table spectrum_table() {
  return {"spectrum", {"realization", "step", "rank_index", "eigenvalue", "energy"}, {}};
}

/// Energy is −log λ; +inf for eigenvalues that are exactly zero after clamping.
inline void add_spectrum_rows(Table& t, const SpectrumRecord& rec) {
  for (std::size_t i = 0; i < rec.eigenvalues.size(); ++i) {
    const double l = rec.eigenvalues[i];
    t.add({static_cast<std::int64_t>(rec.realization), static_cast<std::int64_t>(rec.step),
           static_cast<std::int64_t>(i), l, l > 0.0 ? -std::log(l) : std::numeric_limits<double>::infinity()});
  }
}

inline Table entropy_table() { return {"entropy", {"realization", "step", "n", "value", "units"}, {}}; }

inline void add_entropy_rows(Table& t, const SpectrumRecord& rec, const std::vector<double>& ns,
                             EntropyUnits units) {
  for (double n : ns) {
    const double s = std::isinf(n) ? min_entropy(rec) : renyi(rec, n);
    t.add({static_cast<std::int64_t>(rec.realization), static_cast<std::int64_t>(rec.step), n,
           to_units(s, units), std::string(to_string(units))});
  }
}

inline Table power_table(const PowerSpectrum& p) {
  Table t{"power", {"k", "power"}, {}};
  for (std::size_t i = 0; i < p.k.size(); ++i) t.add({p.k[i], p.power[i]});
  return t;
}

// ---------------------------------------------------------------------------
// Manifest

struct Manifest {
  std::string command;
  nlohmann::json config;
  std::vector<std::string> outputs;
  nlohmann::json summary = nlohmann::json::object();
  double wall_clock_seconds = 0.0;
  std::string started_utc;
};

inline std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Writes `<prefix>.manifest.json`. Passing it back with --config re-runs the
/// same configuration.
inline std::string write_manifest(const Manifest& m, const std::string& prefix) {
  const nlohmann::json j = {{"schema_version", kSchemaVersion},
                            {"program", "qchannel"},
                            {"version", std::string(kVersion)},
                            {"command", m.command},
                            {"config", m.config},
                            {"outputs", m.outputs},
                            {"summary", m.summary},
                            {"started_utc", m.started_utc},
                            {"wall_clock_seconds", m.wall_clock_seconds}};
  const std::filesystem::path path = prefix + ".manifest.json";
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  os << j.dump(2) << '\n';
  return path.string();
}

}  // namespace qchannel
