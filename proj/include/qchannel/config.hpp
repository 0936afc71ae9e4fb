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

// config.hpp: run configuration for the batch front end.
//
// Settings are "section.key" strings. They are layered as built-in
// defaults, then a config file (INI, or JSON such as an emitted manifest),
// then command-line flags; later layers win. One field table drives the
// parser, the flag set and the manifest echo, so the three cannot drift.

#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qchannel/channel_exact.hpp"
#include "qchannel/gates.hpp"
#include "qchannel/slice_stream.hpp"

namespace qchannel {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class EngineKind { exact, lowrank, trajectory };

inline std::string_view to_string(EngineKind e) {
  switch (e) {
    case EngineKind::exact: return "exact";
    case EngineKind::lowrank: return "lowrank";
    case EngineKind::trajectory: return "trajectory";
  }
  return "?";
}

inline EngineKind parse_engine(std::string_view s) {
  for (auto e : {EngineKind::exact, EngineKind::lowrank, EngineKind::trajectory}) {
    if (s == to_string(e)) return e;
  }
  throw ConfigError("unknown engine '" + std::string(s) + "' (exact, lowrank, trajectory)");
}

enum class OutputFormat { csv, json };

inline const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> c{"spectrum", "purity",     "trajectory", "scan",
                                          "kicked-ising-check", "xxz", "validate"};
  return c;
}

inline const std::vector<std::string>& known_observables() {
  static const std::vector<std::string> o{"spectrum", "entropy", "purity"};
  return o;
}

struct RunConfig {
  std::string command = "spectrum";

  // [circuit]
  int q = 2;
  int depth = 8;
  int depth_max = 8;  // purity and scan accept a range "a..b"
  GateFamily model = GateFamily::haar;
  double J = std::numbers::pi / 4;
  double b = std::numbers::pi / 4;
  bool random_fields = true;  // h drawn per gate from h_lo..h_hi
  double h1 = 0.0, h2 = 0.0;
  double h_lo = 0.0, h_hi = 2.0 * std::numbers::pi;
  cplx eta{0.0, 1.5};
  double lambda = 0.7;
  bool reuse_gates = false;
  ProductStateKind initial_state = ProductStateKind::zeros;

  // [engine]
  EngineKind engine = EngineKind::exact;
  int rank = 64;
  bool adaptive_rank = false;
  std::optional<double> reference;  // adaptive K target; closed form for haar when absent
  std::size_t calibration_steps = 400;
  int rank_max = 512;
  std::size_t pairs = 1000;
  std::string ancilla = "auto";

  // [run]
  std::size_t steps = 64;
  std::size_t burn_in = 0;
  std::size_t realizations = 1;
  std::uint64_t seed = 1;
  std::size_t record_every = 1;
  int threads = 0;
  double max_memory_gb = 8.0;

  // [output]
  std::string path;  // prefix; empty means the command name
  OutputFormat format = OutputFormat::csv;
  std::vector<std::string> observables{"spectrum", "entropy"};
  std::vector<double> renyi{1.0, 2.0, std::numeric_limits<double>::infinity()};
  EntropyUnits units = EntropyUnits::nats;
  int bins = 60;
  double energy_max = 30.0;

  std::string output_prefix() const { return path.empty() ? command : path; }
  bool wants(std::string_view observable) const {
    for (const auto& o : observables)
      if (o == observable) return true;
    return false;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(a, b - a + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& key, std::string_view v) {
  std::string s = trim(v);
  if (s.size() > 1 && s[0] == '+') s.erase(0, 1);
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  if (s == "pi/4") return std::numbers::pi / 4;
  if (s == "-pi/4") return -std::numbers::pi / 4;
  double x = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
    throw ConfigError(key + ": expected a number, got '" + s + "'");
  }
  return x;
}

template <class Int>
Int parse_int(const std::string& key, std::string_view v) {
  const std::string s = trim(v);
  Int x{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || s[0] == '-' || r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + s + "'");
  }
  return x;
}

inline bool parse_bool(const std::string& key, std::string_view v) {
  const std::string s = trim(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + s + "'");
}

/// "1.5i", "-0.2+1.5i", "0.7".
inline cplx parse_complex(const std::string& key, std::string_view v) {
  std::string s = trim(v);
  if (s.empty()) throw ConfigError(key + ": empty complex number");
  if (s.back() != 'i') return {parse_double(key, s), 0.0};
  s.pop_back();
  // The split point is the last sign that is not the leading one or an exponent sign.
  std::size_t cut = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      cut = i;
      break;
    }
  }
  if (cut == std::string::npos) {
    if (s.empty() || s == "+") return {0.0, 1.0};
    if (s == "-") return {0.0, -1.0};
    return {0.0, parse_double(key, s)};
  }
  const std::string im = s.substr(cut);
  return {parse_double(key, s.substr(0, cut)),
          im == "+" ? 1.0 : im == "-" ? -1.0 : parse_double(key, im)};
}

inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline std::string format_complex(cplx z) {
  if (z.imag() == 0.0) return format_double(z.real());
  std::string im = format_double(z.imag()) + "i";
  if (z.real() == 0.0) return im;
  return format_double(z.real()) + (z.imag() < 0 ? "" : "+") + im;
}

}  // namespace detail

struct ConfigField {
  std::string key;   // section.key
  std::string flag;  // long flag without dashes
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

inline const std::vector<ConfigField>& config_fields() {
  using namespace detail;
  static const std::vector<ConfigField> fields = [] {
    std::vector<ConfigField> f;
    auto add = [&](std::string key, std::string flag, std::string help, auto set, auto get) {
      f.push_back({std::move(key), std::move(flag), std::move(help), set, get});
    };
    add("circuit.q", "q", "local dimension",
        [](RunConfig& c, const std::string& v) { c.q = parse_int<int>("circuit.q", v); },
        [](const RunConfig& c) { return std::to_string(c.q); });
    add("circuit.depth", "depth", "circuit depth t, or a range a..b for purity",
        [](RunConfig& c, const std::string& v) {
          const auto dots = v.find("..");
          if (dots == std::string::npos) {
            c.depth = c.depth_max = parse_int<int>("circuit.depth", v);
          } else {
            c.depth = parse_int<int>("circuit.depth", v.substr(0, dots));
            c.depth_max = parse_int<int>("circuit.depth", v.substr(dots + 2));
          }
        },
        [](const RunConfig& c) {
          return c.depth == c.depth_max ? std::to_string(c.depth)
                                        : std::to_string(c.depth) + ".." + std::to_string(c.depth_max);
        });
    add("circuit.model", "model", "haar | conserving | kicked-ising | xxz | fixed-random",
        [](RunConfig& c, const std::string& v) {
          try {
            c.model = parse_gate_family(trim(v));
          } catch (const std::exception& e) {
            throw ConfigError(std::string("circuit.model: ") + e.what());
          }
        },
        [](const RunConfig& c) { return std::string(to_string(c.model)); });
    add("circuit.J", "J", "kicked Ising coupling",
        [](RunConfig& c, const std::string& v) { c.J = parse_double("circuit.J", v); },
        [](const RunConfig& c) { return format_double(c.J); });
    add("circuit.b", "b", "kicked Ising transverse field",
        [](RunConfig& c, const std::string& v) { c.b = parse_double("circuit.b", v); },
        [](const RunConfig& c) { return format_double(c.b); });
    add("circuit.h", "fields", "kicked Ising longitudinal fields: random, h, or h1,h2",
        [](RunConfig& c, const std::string& v) {
          if (trim(v) == "random") {
            c.random_fields = true;
            return;
          }
          const auto parts = split(v, ',');
          if (parts.size() > 2) throw ConfigError("circuit.h: expected random, h or h1,h2");
          c.random_fields = false;
          c.h1 = parse_double("circuit.h", parts[0]);
          c.h2 = parts.size() == 2 ? parse_double("circuit.h", parts[1]) : c.h1;
        },
        [](const RunConfig& c) {
          return c.random_fields ? std::string("random") : format_double(c.h1) + "," + format_double(c.h2);
        });
    add("circuit.h_range", "h-range", "interval lo,hi for random fields",
        [](RunConfig& c, const std::string& v) {
          const auto parts = split(v, ',');
          if (parts.size() != 2) throw ConfigError("circuit.h_range: expected lo,hi");
          c.h_lo = parse_double("circuit.h_range", parts[0]);
          c.h_hi = parse_double("circuit.h_range", parts[1]);
        },
        [](const RunConfig& c) { return format_double(c.h_lo) + "," + format_double(c.h_hi); });
    add("circuit.eta", "eta", "XXZ anisotropy, e.g. 1.5i",
        [](RunConfig& c, const std::string& v) { c.eta = parse_complex("circuit.eta", v); },
        [](const RunConfig& c) { return format_complex(c.eta); });
    add("circuit.lambda", "lambda", "XXZ spectral parameter",
        [](RunConfig& c, const std::string& v) { c.lambda = parse_double("circuit.lambda", v); },
        [](const RunConfig& c) { return format_double(c.lambda); });
    add("circuit.reuse_gates", "reuse-gates", "random families: one gate per layer at every position",
        [](RunConfig& c, const std::string& v) { c.reuse_gates = parse_bool("circuit.reuse_gates", v); },
        [](const RunConfig& c) { return std::string(c.reuse_gates ? "true" : "false"); });
    add("circuit.initial_state", "init", "zeros | neel | random-product | random-bitstring",
        [](RunConfig& c, const std::string& v) {
          try {
            c.initial_state = parse_product_state(trim(v));
          } catch (const std::exception& e) {
            throw ConfigError(std::string("circuit.initial_state: ") + e.what());
          }
        },
        [](const RunConfig& c) { return std::string(to_string(c.initial_state)); });
    add("engine.kind", "engine", "exact | lowrank | trajectory",
        [](RunConfig& c, const std::string& v) { c.engine = parse_engine(trim(v)); },
        [](const RunConfig& c) { return std::string(to_string(c.engine)); });
    add("engine.rank", "rank", "low-rank K, or adaptive",
        [](RunConfig& c, const std::string& v) {
          if (trim(v) == "adaptive") {
            c.adaptive_rank = true;
          } else {
            c.adaptive_rank = false;
            c.rank = parse_int<int>("engine.rank", v);
          }
        },
        [](const RunConfig& c) { return c.adaptive_rank ? std::string("adaptive") : std::to_string(c.rank); });
    add("engine.reference", "reference", "adaptive K: target mean purity",
        [](RunConfig& c, const std::string& v) {
          if (trim(v).empty() || trim(v) == "none") {
            c.reference.reset();
          } else {
            c.reference = parse_double("engine.reference", v);
          }
        },
        [](const RunConfig& c) { return c.reference ? format_double(*c.reference) : std::string("none"); });
    add("engine.calibration_steps", "calibration-steps", "adaptive K: steps per trial",
        [](RunConfig& c, const std::string& v) {
          c.calibration_steps = parse_int<std::size_t>("engine.calibration_steps", v);
        },
        [](const RunConfig& c) { return std::to_string(c.calibration_steps); });
    add("engine.rank_max", "rank-max", "adaptive K: upper bound",
        [](RunConfig& c, const std::string& v) { c.rank_max = parse_int<int>("engine.rank_max", v); },
        [](const RunConfig& c) { return std::to_string(c.rank_max); });
    add("engine.pairs", "pairs", "trajectory pairs",
        [](RunConfig& c, const std::string& v) { c.pairs = parse_int<std::size_t>("engine.pairs", v); },
        [](const RunConfig& c) { return std::to_string(c.pairs); });
    add("engine.ancilla", "ancilla", "auto | maximally-mixed | random-pure | pure-zero",
        [](RunConfig& c, const std::string& v) {
          const std::string s = trim(v);
          if (s != "auto" && s != "maximally-mixed" && s != "random-pure" && s != "pure-zero") {
            throw ConfigError("engine.ancilla: unknown initialization '" + s + "'");
          }
          c.ancilla = s;
        },
        [](const RunConfig& c) { return c.ancilla; });
    add("run.steps", "steps", "channel steps L",
        [](RunConfig& c, const std::string& v) { c.steps = parse_int<std::size_t>("run.steps", v); },
        [](const RunConfig& c) { return std::to_string(c.steps); });
    add("run.burn_in", "burn-in", "unrecorded leading steps B",
        [](RunConfig& c, const std::string& v) { c.burn_in = parse_int<std::size_t>("run.burn_in", v); },
        [](const RunConfig& c) { return std::to_string(c.burn_in); });
    add("run.realizations", "realizations", "independent circuit realizations",
        [](RunConfig& c, const std::string& v) {
          c.realizations = parse_int<std::size_t>("run.realizations", v);
        },
        [](const RunConfig& c) { return std::to_string(c.realizations); });
    add("run.seed", "seed", "64-bit master seed",
        [](RunConfig& c, const std::string& v) { c.seed = parse_int<std::uint64_t>("run.seed", v); },
        [](const RunConfig& c) { return std::to_string(c.seed); });
    add("run.record_every", "record-every", "record every n-th post-burn-in step",
        [](RunConfig& c, const std::string& v) {
          c.record_every = parse_int<std::size_t>("run.record_every", v);
        },
        [](const RunConfig& c) { return std::to_string(c.record_every); });
    add("run.threads", "threads", "worker threads (0: QCHANNEL_THREADS or all cores)",
        [](RunConfig& c, const std::string& v) { c.threads = parse_int<int>("run.threads", v); },
        [](const RunConfig& c) { return std::to_string(c.threads); });
    add("run.max_memory_gb", "max-memory-gb", "refuse runs whose state estimate exceeds this",
        [](RunConfig& c, const std::string& v) { c.max_memory_gb = parse_double("run.max_memory_gb", v); },
        [](const RunConfig& c) { return format_double(c.max_memory_gb); });
    add("output.path", "out", "output prefix",
        [](RunConfig& c, const std::string& v) { c.path = trim(v); },
        [](const RunConfig& c) { return c.path; });
    add("output.format", "format", "csv | json",
        [](RunConfig& c, const std::string& v) {
          const std::string s = trim(v);
          if (s == "csv") {
            c.format = OutputFormat::csv;
          } else if (s == "json") {
            c.format = OutputFormat::json;
          } else {
            throw ConfigError("output.format: expected csv or json, got '" + s + "'");
          }
        },
        [](const RunConfig& c) { return std::string(c.format == OutputFormat::csv ? "csv" : "json"); });
    add("output.observables", "observables", "comma list of spectrum, entropy, purity",
        [](RunConfig& c, const std::string& v) {
          c.observables.clear();
          for (const auto& o : split(v, ',')) {
            if (o.empty()) continue;
            bool ok = false;
            for (const auto& k : known_observables()) ok = ok || o == k;
            if (!ok) throw ConfigError("output.observables: unknown observable '" + o + "'");
            c.observables.push_back(o);
          }
        },
        [](const RunConfig& c) {
          std::string s;
          for (const auto& o : c.observables) s += (s.empty() ? "" : ",") + o;
          return s;
        });
    add("output.renyi", "renyi", "comma list of Renyi indices (1 = von Neumann, inf = min-entropy)",
        [](RunConfig& c, const std::string& v) {
          c.renyi.clear();
          for (const auto& n : split(v, ',')) {
            const double x = parse_double("output.renyi", n);
            if (!(x > 0.0)) throw ConfigError("output.renyi: indices must be positive");
            c.renyi.push_back(x);
          }
        },
        [](const RunConfig& c) {
          std::string s;
          for (double n : c.renyi) s += (s.empty() ? "" : ",") + format_double(n);
          return s;
        });
    add("output.units", "units", "nats | bits",
        [](RunConfig& c, const std::string& v) {
          const std::string s = trim(v);
          if (s == "nats") {
            c.units = EntropyUnits::nats;
          } else if (s == "bits") {
            c.units = EntropyUnits::bits;
          } else {
            throw ConfigError("output.units: expected nats or bits, got '" + s + "'");
          }
        },
        [](const RunConfig& c) { return std::string(to_string(c.units)); });
    add("output.bins", "bins", "entanglement-energy histogram bins",
        [](RunConfig& c, const std::string& v) { c.bins = parse_int<int>("output.bins", v); },
        [](const RunConfig& c) { return std::to_string(c.bins); });
    add("output.energy_max", "energy-max", "histogram range is [0, energy_max)",
        [](RunConfig& c, const std::string& v) { c.energy_max = parse_double("output.energy_max", v); },
        [](const RunConfig& c) { return format_double(c.energy_max); });
    return f;
  }();
  return fields;
}

using Settings = std::map<std::string, std::string>;

/// Applies "section.key" settings in key order. Unknown keys are errors.
inline void apply_settings(RunConfig& c, const Settings& s) {
  for (const auto& [key, value] : s) {
    bool found = false;
    for (const auto& f : config_fields()) {
      if (f.key == key) {
        f.set(c, value);
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError("unknown setting '" + key + "'");
  }
}

inline Settings current_settings(const RunConfig& c) {
  Settings s;
  for (const auto& f : config_fields()) s[f.key] = f.get(c);
  return s;
}

struct ConfigFile {
  Settings settings;
  std::optional<std::string> command;  // present in manifests
};

namespace detail {

inline void flatten_json(const nlohmann::json& j, const std::string& prefix, Settings& out) {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      flatten_json(v, key, out);
    } else if (v.is_string()) {
      out[key] = v.get<std::string>();
    } else if (v.is_boolean()) {
      out[key] = v.get<bool>() ? "true" : "false";
    } else if (v.is_number_integer() || v.is_number_unsigned()) {
      out[key] = v.dump();
    } else if (v.is_number_float()) {
      out[key] = format_double(v.get<double>());
    } else if (v.is_array()) {
      std::string s;
      for (const auto& e : v) s += (s.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
      out[key] = s;
    } else {
      throw ConfigError("unsupported value for '" + key + "'");
    }
  }
}

}  // namespace detail

/// Reads an INI file ([section] key = value) or a JSON object. A JSON
/// manifest contributes its "config" object and its "command".
inline ConfigFile read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  ConfigFile out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
      throw ConfigError("config file '" + path + "': " + e.what());
    }
    if (j.contains("config") && j["config"].is_object()) {
      if (j.contains("command")) out.command = j["command"].get<std::string>();
      detail::flatten_json(j["config"], "", out.settings);
    } else {
      detail::flatten_json(j, "", out.settings);
    }
    return out;
  }
  boost::property_tree::ptree tree;
  try {
    std::istringstream is(text);
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const std::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config file '" + path + "': key '" + section + "' is outside a section");
    for (const auto& [key, value] : body) out.settings[section + "." + key] = value.data();
  }
  return out;
}

/// Nested {"section": {"key": "value"}} echo of the full configuration.
inline nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : current_settings(c)) {
    const auto dot = key.find('.');
    j[key.substr(0, dot)][key.substr(dot + 1)] = value;
  }
  return j;
}

inline std::string config_ini(const RunConfig& c) {
  std::string out, section;
  for (const auto& [key, value] : current_settings(c)) {
    const auto dot = key.find('.');
    if (key.substr(0, dot) != section) {
      section = key.substr(0, dot);
      out += (out.empty() ? "" : "\n") + ("[" + section + "]\n");
    }
    out += key.substr(dot + 1) + " = " + value + "\n";
  }
  return out;
}

inline std::size_t bond_dim_checked(int q, int depth) {
  double d = std::pow(static_cast<double>(q), depth - 1);
  if (d > 1e12) throw ConfigError("bond dimension q^(t-1) is too large");
  return static_cast<std::size_t>(std::llround(d));
}

/// Rough peak working-set estimate in bytes for one realization at depth t.
inline double estimate_bytes(const RunConfig& c, int depth) {
  const double d = static_cast<double>(bond_dim_checked(c.q, depth));
  const double qq = static_cast<double>(c.q) * c.q;
  constexpr double z = sizeof(cplx);
  switch (c.engine) {
    case EngineKind::exact: return 4.0 * d * d * z;
    case EngineKind::lowrank: {
      const double k = c.adaptive_rank ? c.rank_max : c.rank;
      const double m = std::min(qq * k, d);
      return (3.0 * d * qq * k + 2.0 * m * m) * z + (qq * k >= d ? 3.0 * d * d * z : 0.0);
    }
    case EngineKind::trajectory: return 4.0 * d * qq * z;
  }
  return 0.0;
}

/// Circuit description for one depth.
inline CircuitSpec circuit_spec(const RunConfig& c, int depth) {
  CircuitSpec s;
  s.family = c.model;
  s.q = c.q;
  s.depth = depth;
  s.initial_state = c.initial_state;
  s.kicked_ising = KickedIsingParams{c.J, c.b, c.h1, c.h2};
  s.random_fields = c.random_fields;
  s.field_lo = c.h_lo;
  s.field_hi = c.h_hi;
  s.xxz = XXZParams{c.eta, c.lambda};
  s.floquet = c.reuse_gates;
  return s;
}

/// Throws ConfigError describing the first problem found.
inline void validate(const RunConfig& c) {
  bool known = false;
  for (const auto& k : known_commands()) known = known || k == c.command;
  if (!known) throw ConfigError("unknown command '" + c.command + "'");
  if (c.q < 2) throw ConfigError("circuit.q must be >= 2");
  if (c.depth < 1) throw ConfigError("circuit.depth must be >= 1");
  if (c.depth_max < c.depth) throw ConfigError("circuit.depth range is empty");
  if (c.depth_max != c.depth && c.command != "purity" && c.command != "scan") {
    throw ConfigError("a depth range is only accepted by the purity and scan commands");
  }
  if (c.command != "validate" && c.command != "kicked-ising-check" && c.steps <= c.burn_in) {
    throw ConfigError("run.steps must exceed run.burn_in");
  }
  if (c.realizations < 1) throw ConfigError("run.realizations must be >= 1");
  if (c.record_every < 1) throw ConfigError("run.record_every must be >= 1");
  if (c.engine == EngineKind::lowrank && !c.adaptive_rank && c.rank < 1) {
    throw ConfigError("engine.rank must be >= 1");
  }
  if (c.adaptive_rank && c.engine != EngineKind::lowrank) {
    throw ConfigError("engine.rank = adaptive needs the lowrank engine");
  }
  if (c.adaptive_rank && !c.reference && !(c.model == GateFamily::haar)) {
    throw ConfigError("adaptive K needs engine.reference unless the model is haar");
  }
  if (c.engine == EngineKind::trajectory && c.pairs < 1) throw ConfigError("engine.pairs must be >= 1");
  if (c.bins < 1) throw ConfigError("output.bins must be >= 1");
  if (c.renyi.empty() && c.wants("entropy")) throw ConfigError("output.renyi is empty");
  if (!(c.h_hi > c.h_lo)) throw ConfigError("circuit.h_range must have lo < hi");

  // Engine-model compatibility.
  const bool trajectory = c.engine == EngineKind::trajectory;
  if (trajectory && (c.command == "spectrum" || c.command == "scan" || c.command == "xxz")) {
    throw ConfigError("command '" + c.command + "' needs the exact or lowrank engine");
  }
  if (c.command == "trajectory" && !trajectory) {
    throw ConfigError("the trajectory command runs the trajectory engine only (engine.kind = trajectory)");
  }
  if (c.command == "kicked-ising-check" && c.model != GateFamily::kicked_ising) {
    throw ConfigError("kicked-ising-check needs circuit.model = kicked-ising");
  }
  if (c.command == "kicked-ising-check" && c.steps < static_cast<std::size_t>(c.depth)) {
    throw ConfigError("kicked-ising-check needs run.steps >= circuit.depth to reach the stationary state");
  }
  if (c.command == "xxz" && c.model != GateFamily::xxz && c.model != GateFamily::fixed_random) {
    throw ConfigError("xxz compares translation-invariant circuits: model must be xxz or fixed-random");
  }
  if (c.model == GateFamily::xxz) {
    const cplx s = std::sin(c.eta + c.lambda);
    if (std::abs(s) < 1e-12) throw ConfigError("circuit.eta + circuit.lambda makes the XXZ gate singular");
    if (std::abs(c.eta.real()) > 1e-14) {
      throw ConfigError("circuit.eta must be purely imaginary for a unitary XXZ gate");
    }
  }
  if (c.ancilla == "maximally-mixed" && c.engine == EngineKind::trajectory) {
    throw ConfigError("the trajectory engine starts from a pure ancilla state");
  }
  try {
    for (int t = c.depth; t <= c.depth_max; ++t) circuit_spec(c, t).validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  // Resource guard, checked before anything is allocated.
  if (c.command != "kicked-ising-check" && c.command != "validate") {
    for (int t = c.depth; t <= c.depth_max; ++t) {
      const double need = estimate_bytes(c, t);
      if (need > c.max_memory_gb * 1e9) {
        std::ostringstream os;
        os << "depth " << t << " with the " << to_string(c.engine) << " engine needs about "
           << need / 1e9 << " GB, above run.max_memory_gb = " << c.max_memory_gb;
        throw ConfigError(os.str());
      }
    }
  }
}

}  // namespace qchannel
