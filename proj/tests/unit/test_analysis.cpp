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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qchannel/analysis.hpp"
#include "qchannel/rng.hpp"

using namespace qchannel;

namespace {

SpectrumRecord record(std::vector<double> ev) {
  return make_spectrum_record(Eigen::Map<RVector>(ev.data(), static_cast<Eigen::Index>(ev.size())), 0);
}

SpectrumRecord random_record(int n, Rng& rng) {
  std::vector<double> ev(static_cast<std::size_t>(n));
  double s = 0.0;
  for (auto& x : ev) s += (x = -std::log(rng.uniform() + 1e-300));
  for (auto& x : ev) x /= s;
  return record(ev);
}

}  // namespace

TEST(Analysis, FlatSpectrumEntropies) {
  for (int t = 2; t <= 8; ++t) {
    const int d = 1 << (t - 1);
    const auto rec = record(std::vector<double>(static_cast<std::size_t>(d), 1.0 / d));
    const double expect = (t - 1) * std::log(2.0);
    for (double n : {0.5, 1.0, 2.0, 3.0}) EXPECT_NEAR(renyi(rec, n), expect, 1e-12);
    EXPECT_NEAR(min_entropy(rec), expect, 1e-12);
    EXPECT_NEAR(to_units(min_entropy(rec), EntropyUnits::bits), t - 1, 1e-12);
  }
}

TEST(Analysis, PureStateHasZeroEntropy) {
  const auto rec = record({1.0, 0.0, 0.0, 0.0});
  EXPECT_EQ(von_neumann(rec), 0.0);
  EXPECT_NEAR(renyi(rec, 2.0), 0.0, 1e-15);
  EXPECT_NEAR(min_entropy(rec), 0.0, 1e-15);
}

TEST(Analysis, RecordValidation) {
  const auto rec = record({0.2, -1e-12, 0.8});
  EXPECT_EQ(rec.eigenvalues.front(), 0.8);
  EXPECT_EQ(rec.eigenvalues.back(), 0.0);
  EXPECT_THROW(record({1.1, -0.1}), std::domain_error);
  EXPECT_THROW(record({0.5, 0.4}), std::domain_error);
  EXPECT_THROW(renyi(rec, 0.0), std::invalid_argument);
  SpectrumRecord empty;
  EXPECT_THROW(min_entropy(empty), std::invalid_argument);
}

TEST(Analysis, RenyiMonotoneAndPurityConsistent) {
  Rng rng(301);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rec = random_record(16, rng);
    double direct = 0.0;
    for (double x : rec.eigenvalues) direct += x * x;
    EXPECT_NEAR(std::exp(-renyi(rec, 2.0)), purity(rec), 1e-12);
    EXPECT_NEAR(purity(rec), direct, 1e-15);
    double prev = renyi(rec, 0.5);
    for (double n : {1.0, 1.5, 2.0, 3.0, 10.0}) {
      const double s = renyi(rec, n);
      EXPECT_LE(s, prev + 1e-10);
      prev = s;
    }
    EXPECT_LE(min_entropy(rec), prev + 1e-10);
    EXPECT_NEAR(renyi(rec, std::numeric_limits<double>::infinity()), min_entropy(rec), 1e-15);
  }
}

TEST(Analysis, EntropySeriesLayout) {
  const auto a = record({0.5, 0.5}), b = record({1.0, 0.0});
  const auto s = entropy_series({a, b}, {2.0, std::numeric_limits<double>::infinity()}, EntropyUnits::bits);
  ASSERT_EQ(s.values.size(), 2u);
  EXPECT_NEAR(s.values[0][0], 1.0, 1e-12);
  EXPECT_NEAR(s.values[0][1], 1.0, 1e-12);
  EXPECT_NEAR(s.values[1][1], 0.0, 1e-12);
}

TEST(Analysis, DosHistogramCounts) {
  const auto flat = record(std::vector<double>(8, 0.125));
  const auto h = dos_histogram({flat, flat}, 10, 0.0, 5.0);
  EXPECT_EQ(h.total(), 16u);
  const auto bin = static_cast<std::size_t>(std::log(8.0) / 0.5);
  EXPECT_EQ(h.counts[bin], 16u);
  const auto tiny = record({1.0 - 1e-17, 1e-17});
  const auto h2 = dos_histogram({tiny}, 4, 0.0, 1.0);
  EXPECT_EQ(h2.below_floor, 1u);
  EXPECT_EQ(h2.total() + h2.below_floor + h2.out_of_range, 2u);
  const auto empty = dos_histogram({flat}, 3, 1.0, 1.0);
  EXPECT_EQ(empty.total(), 0u);
}

TEST(Analysis, PowerSpectrumConstantAndWhiteNoise) {
  const auto c = power_spectrum(std::vector<double>(64, 3.0));
  EXPECT_TRUE(c.xi_infinite);
  for (double p : c.power) EXPECT_EQ(p, 0.0);
  EXPECT_THROW(power_spectrum(std::vector<double>(8, 1.0)), std::invalid_argument);

  Rng rng(302);
  std::vector<double> noise(4096);
  for (auto& x : noise) x = rng.normal();
  const auto w = power_spectrum(noise);
  double total = 0.0;
  for (double p : w.power) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
  // Flat: the low and high halves carry comparable weight.
  double low = 0.0, high = 0.0;
  const std::size_t half = w.power.size() / 2;
  for (std::size_t i = 1; i < w.power.size(); ++i) (i < half ? low : high) += w.power[i];
  EXPECT_NEAR(low / high, 1.0, 0.15);
}

TEST(Analysis, PowerSpectrumWidthTracksCorrelationLength) {
  // AR(1) series x_{n+1} = a x_n + noise have Lorentzian spectra whose width
  // shrinks as the correlation length −1/log a grows.
  Rng rng(303);
  auto ar = [&](double a) {
    std::vector<double> x(20000);
    double v = 0.0;
    for (auto& e : x) e = (v = a * v + rng.normal());
    return x;
  };
  const auto short_range = power_spectrum(ar(0.5));
  const auto long_range = power_spectrum(ar(0.9));
  EXPECT_GT(long_range.xi, short_range.xi);
  // HWHM of the AR(1) Lorentzian: cos k = 2 − (1 + a²)/(2a) ⇒ k ≈ 0.105 for a = 0.9.
  const double a = 0.9;
  const double k_half = std::acos(2.0 - (1 + a * a) / (2 * a));
  EXPECT_NEAR(long_range.hwhm, k_half, 0.35 * k_half);
}

TEST(Analysis, GaussianFitMoments) {
  Rng rng(304);
  std::vector<double> x(20000);
  for (auto& e : x) e = 2.0 + 0.5 * rng.normal();
  const auto f = gaussian_fit(x);
  EXPECT_NEAR(f.mean, 2.0, 3 * f.mean_stderr);
  EXPECT_NEAR(f.stddev, 0.5, 0.01);
  EXPECT_LT(std::abs(f.skewness), 0.05);
  EXPECT_TRUE(f.skewness_defined);
  const auto c = gaussian_fit(std::vector<double>(200, 1.0));
  EXPECT_FALSE(c.skewness_defined);
  EXPECT_EQ(c.stddev, 0.0);
  EXPECT_THROW(gaussian_fit(std::vector<double>(50, 1.0)), std::invalid_argument);
  std::vector<double> expo(20000);
  for (auto& e : expo) e = -std::log(rng.uniform() + 1e-300);
  EXPECT_NEAR(gaussian_fit(expo).skewness, 2.0, 0.3);
}
