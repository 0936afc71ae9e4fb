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

// analysis.hpp: entanglement observables computed from ancilla spectra.
//
// Entropies are in nats unless converted with to_units(). Entanglement
// energies are ε = −log λ.

#pragma once

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qchannel/linalg.hpp"

namespace qchannel {

/// Eigenvalues below this floor are excluded from entropies and histograms.
inline constexpr double kEigenvalueFloor = 1e-15;
/// Negative eigenvalues down to −kClampTolerance are rounding noise and clamp to 0.
inline constexpr double kClampTolerance = 1e-10;

struct SpectrumRecord {
  std::size_t step = 0;
  std::vector<double> eigenvalues;  // descending, ≥ 0
  std::uint64_t seed = 0;
  std::string model;
  int depth = 0;
  std::size_t realization = 0;
};

/// Builds a record from eigenvalues in any order: sorts descending, clamps
/// rounding negatives, and checks the unit-trace invariant to 1e-8.
inline SpectrumRecord make_spectrum_record(const RVector& eigenvalues, std::size_t step) {
  SpectrumRecord rec;
  rec.step = step;
  rec.eigenvalues.assign(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
  std::stable_sort(rec.eigenvalues.begin(), rec.eigenvalues.end(), std::greater<>());
  double total = 0.0;
  for (double& x : rec.eigenvalues) {
    if (x < -kClampTolerance) {
      std::ostringstream os;
      os << "make_spectrum_record: eigenvalue " << x << " is negative beyond tolerance";
      throw std::domain_error(os.str());
    }
    x = std::max(x, 0.0);
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-8) {
    std::ostringstream os;
    os << "make_spectrum_record: eigenvalues sum to " << total << ", expected 1";
    throw std::domain_error(os.str());
  }
  return rec;
}

enum class EntropyUnits { nats, bits };

inline std::string_view to_string(EntropyUnits u) { return u == EntropyUnits::nats ? "nats" : "bits"; }

inline double to_units(double nats, EntropyUnits u) {
  return u == EntropyUnits::nats ? nats : nats / std::numbers::ln2;
}

inline double purity(const SpectrumRecord& rec) {
  double p = 0.0;
  for (double x : rec.eigenvalues) p += x * x;
  return p;
}

/// Ensemble-mean purity of a half-infinite cut in a depth-t Haar brickwork:
/// each of the t − 1 gate layers the domain wall crosses contributes
/// 2q/(q² + 1).
inline double haar_mean_purity(int q, int depth) {
  const double k = 2.0 * q / (static_cast<double>(q) * q + 1.0);
  return std::pow(k, depth - 1);
}

inline double von_neumann(const SpectrumRecord& rec) {
  double s = 0.0;
  for (double x : rec.eigenvalues) {
    if (x >= kEigenvalueFloor) s -= x * std::log(x);
  }
  return s;
}

/// Rényi entropy S^(n) = log(Σ λⁿ)/(1 − n); n = 1 is the von Neumann limit.
inline double renyi(const SpectrumRecord& rec, double n) {
  if (!(n > 0.0)) throw std::invalid_argument("renyi: index must be positive");
  if (std::isinf(n)) {
    if (rec.eigenvalues.empty() || rec.eigenvalues.front() <= 0.0)
      throw std::invalid_argument("renyi: empty spectrum");
    return -std::log(rec.eigenvalues.front());
  }
  if (n == 1.0) return von_neumann(rec);
  double acc = 0.0;
  for (double x : rec.eigenvalues) {
    if (x >= kEigenvalueFloor) acc += std::pow(x, n);
  }
  return std::log(acc) / (1.0 - n);
}

/// S_∞ = −log λ_max.
inline double min_entropy(const SpectrumRecord& rec) {
  if (rec.eigenvalues.empty()) throw std::invalid_argument("min_entropy: empty spectrum");
  const double top = rec.eigenvalues.front();
  if (!(top > 0.0)) throw std::invalid_argument("min_entropy: largest eigenvalue is not positive");
  return -std::log(top);
}

/// ε_i = −log λ_i for eigenvalues at or above the floor.
inline std::vector<double> entanglement_energies(const SpectrumRecord& rec) {
  std::vector<double> e;
  for (double x : rec.eigenvalues) {
    if (x >= kEigenvalueFloor) e.push_back(-std::log(x));
  }
  return e;
}

struct EntropySeries {
  EntropyUnits units = EntropyUnits::nats;
  std::vector<double> orders;               // Rényi indices; +inf is S_∞
  std::vector<std::size_t> steps;           // one per record
  std::vector<std::vector<double>> values;  // values[record][order]
};

inline EntropySeries entropy_series(const std::vector<SpectrumRecord>& records,
                                    std::vector<double> orders,
                                    EntropyUnits units = EntropyUnits::nats) {
  EntropySeries out;
  out.units = units;
  out.orders = std::move(orders);
  for (const auto& rec : records) {
    out.steps.push_back(rec.step);
    std::vector<double> row;
    row.reserve(out.orders.size());
    for (double n : out.orders) row.push_back(to_units(renyi(rec, n), units));
    out.values.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Density of entanglement energies

struct DosHistogram {
  std::vector<double> edges;          // bins + 1
  std::vector<std::uint64_t> counts;  // per bin
  std::uint64_t below_floor = 0;      // eigenvalues < kEigenvalueFloor
  std::uint64_t out_of_range = 0;     // retained but outside [lo, hi)

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
};

inline DosHistogram dos_histogram(const std::vector<SpectrumRecord>& records, int bins,
                                  double energy_lo, double energy_hi) {
  if (bins < 1) throw std::invalid_argument("dos_histogram: bins must be >= 1");
  DosHistogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  const double width = (energy_hi - energy_lo) / bins;
  for (int i = 0; i <= bins; ++i) h.edges[static_cast<std::size_t>(i)] = energy_lo + i * width;
  for (const auto& rec : records) {
    for (double x : rec.eigenvalues) {
      if (x < kEigenvalueFloor) {
        ++h.below_floor;
        continue;
      }
      const double e = -std::log(x);
      if (!(width > 0.0) || e < energy_lo || e >= energy_hi) {
        ++h.out_of_range;
        continue;
      }
      auto bin = static_cast<std::size_t>((e - energy_lo) / width);
      bin = std::min(bin, h.counts.size() - 1);
      ++h.counts[bin];
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Spatial power spectrum

struct PowerSpectrum {
  std::vector<double> k;      // angular wavenumber 2πm/M, m = 0..M/2
  std::vector<double> power;  // |FFT|² of the mean-subtracted series, Σ = 1
  double hwhm = 0.0;          // half width at half maximum of the low-k peak
  double xi = 0.0;            // correlation length 1/hwhm, in cuts
  bool xi_infinite = false;   // constant series: no fluctuations to resolve
  int smoothing = 1;          // periodogram bins averaged per point
};

/// Smoothing width used for the HWHM estimate: M/200 bins, at least one.
inline int power_spectrum_smoothing(std::size_t m) {
  return std::max<int>(1, static_cast<int>(m / 200));
}

/// Power spectrum of a spatial series with a correlation length from the
/// width of the peak at small k.
///
/// The raw periodogram is averaged over consecutive groups of
/// power_spectrum_smoothing(M) bins (starting at m = 1, since m = 0 vanishes
/// after mean subtraction). The peak height is the first group's mean; the
/// HWHM is where the smoothed curve first drops to half of it, linearly
/// interpolated between group centers, and capped at π.
inline PowerSpectrum power_spectrum(const std::vector<double>& series) {
  const std::size_t m = series.size();
  if (m < 16) throw std::invalid_argument("power_spectrum: need at least 16 samples");
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(m);
  std::vector<double> centered(m);
  for (std::size_t i = 0; i < m; ++i) centered[i] = series[i] - mean;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, centered);

  PowerSpectrum out;
  const std::size_t half = m / 2;
  out.k.resize(half + 1);
  out.power.resize(half + 1);
  double total = 0.0;
  for (std::size_t i = 0; i <= half; ++i) {
    out.k[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
    out.power[i] = std::norm(spectrum[i]);
    total += out.power[i];
  }
  out.smoothing = power_spectrum_smoothing(m);
  double scale = 0.0;
  for (double x : series) scale = std::max(scale, std::abs(x));
  if (total <= 1e-24 * std::max(1.0, scale * scale) * static_cast<double>(m * m)) {
    std::fill(out.power.begin(), out.power.end(), 0.0);
    out.xi_infinite = true;
    out.xi = std::numeric_limits<double>::infinity();
    out.hwhm = 0.0;
    return out;
  }
  for (double& p : out.power) p /= total;

  const auto w = static_cast<std::size_t>(out.smoothing);
  std::vector<double> kc, pc;
  for (std::size_t start = 1; start + w <= half + 1; start += w) {
    double ks = 0.0, ps = 0.0;
    for (std::size_t i = start; i < start + w; ++i) {
      ks += out.k[i];
      ps += out.power[i];
    }
    kc.push_back(ks / static_cast<double>(w));
    pc.push_back(ps / static_cast<double>(w));
  }
  out.hwhm = std::numbers::pi;
  if (!pc.empty()) {
    const double target = 0.5 * pc.front();
    for (std::size_t g = 1; g < pc.size(); ++g) {
      if (pc[g] <= target) {
        const double f = (pc[g - 1] - target) / (pc[g - 1] - pc[g]);
        out.hwhm = kc[g - 1] + f * (kc[g] - kc[g - 1]);
        break;
      }
    }
  }
  out.xi = 1.0 / out.hwhm;
  return out;
}

// ---------------------------------------------------------------------------
// Sample moments

struct GaussianFit {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n − 1)
  double mean_stderr = 0.0;
  double skewness = 0.0;  // g₁ = m₃ / m₂^{3/2}
  bool skewness_defined = false;
};

inline GaussianFit gaussian_fit(const std::vector<double>& samples) {
  if (samples.size() < 100) throw std::invalid_argument("gaussian_fit: need at least 100 samples");
  GaussianFit f;
  f.n = samples.size();
  const auto n = static_cast<double>(f.n);
  for (double x : samples) f.mean += x;
  f.mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double x : samples) {
    const double d = x - f.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  f.stddev = std::sqrt(m2 * n / (n - 1.0));
  f.mean_stderr = f.stddev / std::sqrt(n);
  const double scale = std::max(1.0, std::abs(f.mean));
  if (std::sqrt(m2) > 1e-12 * scale) {
    f.skewness = m3 / std::pow(m2, 1.5);
    f.skewness_defined = true;
  } else {
    f.stddev = 0.0;
    f.mean_stderr = 0.0;
  }
  return f;
}

}  // namespace qchannel
