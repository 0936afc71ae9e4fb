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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "qchannel/checks.hpp"
#include "qchannel/io.hpp"
#include "qchannel/qchannel.hpp"

namespace qchannel::cli {

Settings command_defaults(const std::string& command) {
  if (command == "purity") return {{"output.observables", "purity"}, {"run.burn_in", "16"}};
  if (command == "trajectory") {
    return {{"engine.kind", "trajectory"}, {"output.observables", "purity"}, {"run.steps", "40"}};
  }
  if (command == "scan") {
    return {{"run.steps", "5000"}, {"output.observables", "entropy"}, {"run.burn_in", "24"}};
  }
  if (command == "kicked-ising-check") {
    return {{"circuit.model", "kicked-ising"}, {"circuit.depth", "6"},
            {"circuit.initial_state", "random-bitstring"}, {"run.steps", "12"},
            {"run.realizations", "20"}, {"output.observables", "entropy"}};
  }
  if (command == "xxz") {
    return {{"circuit.model", "xxz"},         {"circuit.depth", "12"},
            {"circuit.initial_state", "neel"}, {"engine.ancilla", "pure-zero"},
            {"run.steps", "16"},               {"output.observables", "entropy"},
            {"output.renyi", "2,inf"}};
  }
  if (command == "validate") return {{"run.realizations", "200"}};
  return {};
}

std::uint64_t realization_seed(std::uint64_t master, int depth, std::size_t realization) {
  return derive_seed(derive_seed(master, static_cast<std::uint64_t>(depth)), realization);
}

namespace {

using SteadyClock = std::chrono::steady_clock;

// A recorded step of either density-matrix engine.
struct StateView {
  const AncillaState* dense = nullptr;
  const LowRankAncilla* low = nullptr;

  std::size_t step() const { return dense ? dense->step : low->step; }
  double purity() const { return dense ? dense->R.squaredNorm() : low->lambda.squaredNorm(); }
  double top_eigenvalue() const { return dense ? max_eigenvalue_hermitian(dense->R) : low->lambda(0); }
  SpectrumRecord record() const { return dense ? spectrum_record(*dense) : spectrum_record(*low); }
  double discarded() const { return low ? low->discarded_weight : 0.0; }
};

AncillaInit resolve_ancilla(const RunConfig& c) {
  if (c.ancilla != "auto") return parse_ancilla_init(c.ancilla);
  return c.engine == EngineKind::exact ? AncillaInit::maximally_mixed : AncillaInit::pure_zero;
}

CVector pure_start(AncillaInit mode, Eigen::Index d, Rng& rng) {
  if (mode == AncillaInit::random_pure) return haar_vector(d, rng);
  CVector v = CVector::Zero(d);
  v(0) = 1.0;
  return v;
}

// Runs realization r at the given depth and calls fn on every recorded step.
template <class Fn>
void for_each_recorded(const RunConfig& c, int depth, int rank, std::size_t r, Fn&& fn) {
  const std::uint64_t seed = realization_seed(c.seed, depth, r);
  SliceStream stream(circuit_spec(c, depth), seed);
  Rng init_rng(derive_seed(seed, 3));
  const Eigen::Index d = ipow(c.q, depth - 1);
  const RunMeta meta{std::string(to_string(c.model)), seed, depth, r};
  const AncillaInit mode = resolve_ancilla(c);
  const auto recorded = [&](std::size_t i) {
    return i > c.burn_in && (i - c.burn_in) % c.record_every == 0;
  };

  if (c.engine == EngineKind::exact) {
    AncillaState s = init_ancilla(mode, d, init_rng);
    s.meta = meta;
    for (std::size_t i = 1; i <= c.steps; ++i) {
      s = apply_channel(stream.next(), s);
      if (recorded(i)) fn(StateView{&s, nullptr});
    }
    return;
  }

  LowRankAncilla s;
  if (mode == AncillaInit::maximally_mixed) {
    if (d > rank) {
      throw ConfigError("the maximally mixed start has rank " + std::to_string(d) + " > K = " +
                        std::to_string(rank) + "; use engine.ancilla = pure-zero or random-pure");
    }
    s.lambda = RVector::Constant(d, 1.0 / static_cast<double>(d));
    s.vectors = CMatrix::Identity(d, d);
  } else {
    s = lowrank_from_pure(pure_start(mode, d, init_rng));
  }
  s.meta = meta;
  for (std::size_t i = 1; i <= c.steps; ++i) {
    s = apply_channel_lowrank(stream.next(), s, rank);
    if (recorded(i)) fn(StateView{nullptr, &s});
  }
}

double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return x.empty() ? std::numeric_limits<double>::quiet_NaN() : s / static_cast<double>(x.size());
}

// Standard error of the mean of independent samples.
double stderr_of(const std::vector<double>& x) {
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = mean_of(x);
  double s2 = 0.0;
  for (double v : x) s2 += (v - m) * (v - m);
  return std::sqrt(s2 / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
}

// Mean and standard error of a correlated series from 10 batch means.
std::pair<double, double> batch_estimate(const std::vector<double>& series) {
  constexpr std::size_t kBatches = 10;
  if (series.size() < 2 * kBatches) return {mean_of(series), std::numeric_limits<double>::quiet_NaN()};
  const std::size_t len = series.size() / kBatches;
  std::vector<double> means;
  for (std::size_t b = 0; b < kBatches; ++b) {
    means.push_back(mean_of(std::vector<double>(series.begin() + static_cast<std::ptrdiff_t>(b * len),
                                                series.begin() + static_cast<std::ptrdiff_t>((b + 1) * len))));
  }
  return {mean_of(series), stderr_of(means)};
}

double closed_form(const RunConfig& c, int depth) {
  return c.model == GateFamily::haar ? haar_mean_purity(c.q, depth) : std::numeric_limits<double>::quiet_NaN();
}

struct Context {
  const RunConfig& config;
  Manifest manifest;
  std::vector<std::string> outputs;

  void write(const Table& t) { manifest.outputs.push_back(write_table(t, config.output_prefix(), config.format)); }
};

// K for one depth: the configured value, or a calibration against the
// reference purity on an independent stream.
int resolve_rank(Context& ctx, int depth) {
  const RunConfig& c = ctx.config;
  if (c.engine != EngineKind::lowrank || !c.adaptive_rank) return c.rank;
  const double reference = c.reference ? *c.reference : haar_mean_purity(c.q, depth);
  RunConfig cal = c;
  cal.seed = derive_seed(c.seed, 0x63616c6962ULL);
  cal.burn_in = static_cast<std::size_t>(2 * depth);
  cal.steps = cal.burn_in + c.calibration_steps;
  cal.record_every = 1;
  cal.ancilla = "pure-zero";
  const RankCalibration rc = calibrate_rank(
      [&](int k) {
        std::vector<double> p;
        for_each_recorded(cal, depth, k, 0, [&](const StateView& v) { p.push_back(v.purity()); });
        return mean_of(p);
      },
      reference, 0.01, std::min(8, c.rank_max), c.rank_max, 2.0);
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& [k, p] : rc.history) trials.push_back({{"rank", k}, {"mean_purity", p}});
  ctx.manifest.summary["calibration"][std::to_string(depth)] = {
      {"rank", rc.rank}, {"converged", rc.converged}, {"reference", reference}, {"trials", trials}};
  if (!rc.converged) {
    std::cerr << "warning: adaptive K did not reach 1% of the reference at depth " << depth
              << "; using K = " << rc.rank << "\n";
  }
  return rc.rank;
}

int cmd_spectrum(Context& ctx) {
  const RunConfig& c = ctx.config;
  const int rank = resolve_rank(ctx, c.depth);
  std::vector<std::vector<SpectrumRecord>> records(c.realizations);
  std::vector<std::vector<std::pair<double, double>>> extras(c.realizations);  // purity, discarded
  parallel_for(c.realizations, c.threads, [&](std::size_t r) {
    for_each_recorded(c, c.depth, rank, r, [&](const StateView& v) {
      records[r].push_back(v.record());
      extras[r].emplace_back(v.purity(), v.discarded());
    });
  });

  Table spec = spectrum_table(), ent = entropy_table();
  Table pur{"purity", {"realization", "step", "purity", "discarded_weight"}, {}};
  std::vector<SpectrumRecord> all;
  std::vector<double> purities;
  for (std::size_t r = 0; r < c.realizations; ++r) {
    for (std::size_t i = 0; i < records[r].size(); ++i) {
      const auto& rec = records[r][i];
      if (c.wants("spectrum")) add_spectrum_rows(spec, rec);
      if (c.wants("entropy")) add_entropy_rows(ent, rec, c.renyi, c.units);
      pur.add({static_cast<std::int64_t>(r), static_cast<std::int64_t>(rec.step), extras[r][i].first,
               extras[r][i].second});
      purities.push_back(extras[r][i].first);
      all.push_back(rec);
    }
  }
  if (c.wants("spectrum")) {
    ctx.write(spec);
    const DosHistogram h = dos_histogram(all, c.bins, 0.0, c.energy_max);
    Table dos{"dos", {"energy_lo", "energy_hi", "count"}, {}};
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      dos.add({h.edges[b], h.edges[b + 1], static_cast<std::int64_t>(h.counts[b])});
    }
    ctx.write(dos);
  }
  if (c.wants("entropy")) ctx.write(ent);
  if (c.wants("purity")) ctx.write(pur);

  ctx.manifest.summary["records"] = all.size();
  ctx.manifest.summary["rank"] = c.engine == EngineKind::lowrank ? rank : static_cast<int>(ipow(c.q, c.depth - 1));
  ctx.manifest.summary["mean_purity"] = mean_of(purities);
  ctx.manifest.summary["closed_form_purity"] = closed_form(c, c.depth);
  return kOk;
}

int cmd_purity(Context& ctx) {
  const RunConfig& c = ctx.config;
  Table t{"purity", {"depth", "engine", "rank", "samples", "mean", "stderr", "closed_form"}, {}};
  for (int depth = c.depth; depth <= c.depth_max; ++depth) {
    double mean = 0.0, se = 0.0;
    std::int64_t samples = 0, rank = static_cast<std::int64_t>(ipow(c.q, depth - 1));
    if (c.engine == EngineKind::trajectory) {
      const std::uint64_t seed = derive_seed(c.seed, static_cast<std::uint64_t>(depth));
      Rng init_rng(derive_seed(seed, 3));
      const AncillaInit mode = c.ancilla == "auto" ? AncillaInit::pure_zero : resolve_ancilla(c);
      const CVector psi0 = pure_start(mode, ipow(c.q, depth - 1), init_rng);
      const auto f = pair_fidelities(circuit_spec(c, depth), psi0,
                                     PairOptions{c.steps, c.pairs, seed, c.threads});
      // Per pair, the average over recorded steps; pairs are independent.
      std::vector<double> per_pair;
      for (const auto& row : f) {
        std::vector<double> kept;
        for (std::size_t l = c.burn_in; l < row.size(); l += c.record_every) kept.push_back(row[l]);
        per_pair.push_back(mean_of(kept));
      }
      mean = mean_of(per_pair);
      se = stderr_of(per_pair);
      samples = static_cast<std::int64_t>(per_pair.size());
    } else {
      const int k = resolve_rank(ctx, depth);
      if (c.engine == EngineKind::lowrank) rank = k;
      std::vector<std::vector<double>> series(c.realizations);
      parallel_for(c.realizations, c.threads, [&](std::size_t r) {
        for_each_recorded(c, depth, k, r, [&](const StateView& v) { series[r].push_back(v.purity()); });
      });
      if (c.realizations > 1) {
        std::vector<double> means;
        for (const auto& s : series) means.push_back(mean_of(s));
        mean = mean_of(means);
        se = stderr_of(means);
        samples = static_cast<std::int64_t>(means.size());
      } else {
        std::tie(mean, se) = batch_estimate(series[0]);
        samples = static_cast<std::int64_t>(series[0].size());
      }
    }
    t.add({static_cast<std::int64_t>(depth), std::string(to_string(c.engine)), rank, samples, mean, se,
           closed_form(c, depth)});
    std::cerr << "depth " << depth << ": purity " << mean << " +- " << se << "\n";
  }
  ctx.write(t);
  ctx.manifest.summary["depths"] = c.depth_max - c.depth + 1;
  return kOk;
}

int cmd_trajectory(Context& ctx) {
  const RunConfig& c = ctx.config;
  const std::uint64_t seed = derive_seed(c.seed, static_cast<std::uint64_t>(c.depth));
  Rng init_rng(derive_seed(seed, 3));
  const AncillaInit mode = c.ancilla == "auto" ? AncillaInit::pure_zero : resolve_ancilla(c);
  const CVector psi0 = pure_start(mode, ipow(c.q, c.depth - 1), init_rng);
  const auto f = pair_fidelities(circuit_spec(c, c.depth), psi0, PairOptions{c.steps, c.pairs, seed, c.threads});
  const PurityEstimate est = summarize_pairs(f);
  Table t{"trajectory", {"step", "pairs", "mean", "stderr", "closed_form"}, {}};
  for (std::size_t l = 0; l < est.mean.size(); ++l) {
    t.add({static_cast<std::int64_t>(l + 1), static_cast<std::int64_t>(est.pairs), est.mean[l], est.stderr_[l],
           closed_form(c, c.depth)});
  }
  ctx.write(t);

  std::vector<double> per_pair;
  for (const auto& row : f) {
    std::vector<double> kept;
    for (std::size_t l = c.burn_in; l < row.size(); l += c.record_every) kept.push_back(row[l]);
    per_pair.push_back(mean_of(kept));
  }
  ctx.manifest.summary["stationary_purity"] = mean_of(per_pair);
  ctx.manifest.summary["stationary_stderr"] = stderr_of(per_pair);
  ctx.manifest.summary["closed_form_purity"] = closed_form(c, c.depth);
  return kOk;
}

int cmd_scan(Context& ctx) {
  const RunConfig& c = ctx.config;
  nlohmann::json per_depth = nlohmann::json::object();
  for (int depth = c.depth; depth <= c.depth_max; ++depth) {
    const int k = resolve_rank(ctx, depth);
    std::vector<double> series;
    Table s{"series_t" + std::to_string(depth), {"cut", "value", "units"}, {}};
    for_each_recorded(c, depth, k, 0, [&](const StateView& v) {
      const double smin = -std::log(v.top_eigenvalue());
      series.push_back(smin);
      s.add({static_cast<std::int64_t>(v.step()), to_units(smin, c.units), std::string(to_string(c.units))});
    });
    const PowerSpectrum p = power_spectrum(series);
    Table pt = power_table(p);
    pt.name = "power_t" + std::to_string(depth);
    ctx.write(s);
    ctx.write(pt);
    per_depth[std::to_string(depth)] = {{"cuts", series.size()},
                                        {"hwhm", p.hwhm},
                                        {"xi", p.xi_infinite ? nlohmann::json("inf") : nlohmann::json(p.xi)},
                                        {"smoothing", p.smoothing}};
    std::cerr << "depth " << depth << ": xi = " << p.xi << "\n";
  }
  ctx.manifest.summary["power_spectrum"] = per_depth;
  return kOk;
}

Table checks_table(const std::vector<CheckResult>& results) {
  Table t{"checks", {"check", "cases", "max_deviation", "tolerance", "status"}, {}};
  for (const auto& r : results) {
    t.add({r.name, static_cast<std::int64_t>(r.cases), r.max_deviation, r.tolerance,
           std::string(r.passed() ? "pass" : "FAIL")});
  }
  return t;
}

int report_checks(Context& ctx, const std::vector<CheckResult>& results) {
  ctx.write(checks_table(results));
  bool ok = true;
  for (const auto& r : results) {
    std::cout << (r.passed() ? "pass  " : "FAIL  ") << r.name << ": max deviation " << r.max_deviation
              << " over " << r.cases << " cases (tolerance " << r.tolerance << ")\n";
    ok = ok && r.passed();
  }
  ctx.manifest.summary["passed"] = ok;
  return ok ? kOk : kCheckFailed;
}

int cmd_kicked_ising(Context& ctx) {
  const RunConfig& c = ctx.config;
  if (!c.random_fields) {
    std::cerr << "note: kicked-ising-check always draws random longitudinal fields\n";
  }
  const auto results = check_kicked_ising(c.depth, c.J, c.b, static_cast<int>(c.realizations), c.seed, c.steps,
                                          c.renyi);
  // Entropies of the last state of the first realization, for inspection.
  CircuitSpec spec = circuit_spec(c, c.depth);
  spec.random_fields = true;
  const std::uint64_t first = derive_seed(c.seed, 0);
  SliceStream stream(spec, first);
  Rng rng(derive_seed(first, 3));
  AncillaState s = init_ancilla(AncillaInit::random_pure, ipow(2, c.depth - 1), rng);
  for (std::size_t i = 0; i < c.steps; ++i) s = apply_channel(stream.next(), s);
  Table ent = entropy_table();
  add_entropy_rows(ent, spectrum_record(s), c.renyi, c.units);
  ctx.write(ent);
  ctx.manifest.summary["expected_entropy"] = to_units((c.depth - 1) * std::log(2.0), c.units);
  return report_checks(ctx, results);
}

int cmd_xxz(Context& ctx) {
  const RunConfig& c = ctx.config;
  const int rank = resolve_rank(ctx, c.depth);
  std::vector<std::vector<SpectrumRecord>> records(c.realizations);
  parallel_for(c.realizations, c.threads, [&](std::size_t r) {
    for_each_recorded(c, c.depth, rank, r, [&](const StateView& v) { records[r].push_back(v.record()); });
  });
  Table spec = spectrum_table(), ent = entropy_table();
  Table over{"overshoot", {"realization", "plateau", "maximum", "step_of_maximum", "relative_overshoot"}, {}};
  nlohmann::json rel = nlohmann::json::array();
  for (std::size_t r = 0; r < c.realizations; ++r) {
    double best = -1.0;
    std::size_t at = 0;
    for (const auto& rec : records[r]) {
      if (c.wants("spectrum")) add_spectrum_rows(spec, rec);
      add_entropy_rows(ent, rec, c.renyi, c.units);
      const double smin = min_entropy(rec);
      if (smin > best) {
        best = smin;
        at = rec.step;
      }
    }
    const double plateau = min_entropy(records[r].back());
    const double ratio = plateau > 0.0 ? best / plateau - 1.0 : std::numeric_limits<double>::quiet_NaN();
    over.add({static_cast<std::int64_t>(r), to_units(plateau, c.units), to_units(best, c.units),
              static_cast<std::int64_t>(at), ratio});
    rel.push_back(ratio);
  }
  if (c.wants("spectrum")) ctx.write(spec);
  ctx.write(ent);
  ctx.write(over);
  ctx.manifest.summary["relative_overshoot"] = rel;
  return kOk;
}

int cmd_validate(Context& ctx) {
  const RunConfig& c = ctx.config;
  std::vector<CheckResult> results;
  for (int t = 1; t <= 3; ++t) {
    results.push_back(check_oracle_spectra(2, t, 4 * t, 5, derive_seed(c.seed, static_cast<std::uint64_t>(t))));
  }
  for (auto& r : check_canonical_suite(static_cast<int>(c.realizations), 6, derive_seed(c.seed, 10))) {
    results.push_back(std::move(r));
  }
  for (auto& r : check_kicked_ising(5, std::numbers::pi / 4, std::numbers::pi / 4, 5, derive_seed(c.seed, 11), 8,
                                    {1.0, 2.0, std::numeric_limits<double>::infinity()})) {
    r.name = "kicked Ising: " + r.name;
    results.push_back(std::move(r));
  }

  // The low-rank engine at full rank is the exact channel.
  CheckResult full{"low-rank at K = D vs exact", 0, 0.0, 1e-9};
  CircuitSpec spec;
  spec.depth = 5;
  spec.initial_state = ProductStateKind::random_product;
  for (std::uint64_t r = 0; r < 3; ++r) {
    SliceStream a(spec, derive_seed(c.seed, 20 + r)), b(spec, derive_seed(c.seed, 20 + r));
    Rng rng(derive_seed(c.seed, 30 + r));
    const CVector psi = haar_vector(16, rng);
    AncillaState exact{psi * psi.adjoint(), 0, {}};
    LowRankAncilla low = lowrank_from_pure(psi);
    for (int i = 0; i < 10; ++i) {
      exact = apply_channel(a.next(), exact);
      low = apply_channel_lowrank(b.next(), low, 16);
      full.record(spectrum_mismatch(eigvals_hermitian(exact.R), low.lambda));
    }
  }
  results.push_back(full);
  return report_checks(ctx, results);
}

}  // namespace

int run(const RunConfig& config) {
  const auto wall_start = std::chrono::system_clock::now();
  const auto start = SteadyClock::now();
  Context ctx{config, {}, {}};
  ctx.manifest.command = config.command;
  ctx.manifest.config = config_json(config);
  ctx.manifest.started_utc = utc_timestamp(wall_start);

  int code = kOk;
  const std::string& cmd = config.command;
  if (cmd == "spectrum") {
    code = cmd_spectrum(ctx);
  } else if (cmd == "purity") {
    code = cmd_purity(ctx);
  } else if (cmd == "trajectory") {
    code = cmd_trajectory(ctx);
  } else if (cmd == "scan") {
    code = cmd_scan(ctx);
  } else if (cmd == "kicked-ising-check") {
    code = cmd_kicked_ising(ctx);
  } else if (cmd == "xxz") {
    code = cmd_xxz(ctx);
  } else if (cmd == "validate") {
    code = cmd_validate(ctx);
  } else {
    throw ConfigError("unknown command '" + cmd + "'");
  }

  ctx.manifest.wall_clock_seconds = std::chrono::duration<double>(SteadyClock::now() - start).count();
  const std::string manifest = write_manifest(ctx.manifest, config.output_prefix());
  for (const auto& path : ctx.manifest.outputs) std::cout << "wrote " << path << "\n";
  std::cout << "wrote " << manifest << "\n";
  return code;
}

}  // namespace qchannel::cli
