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

#include "qchannel/oracle.hpp"

using namespace qchannel;

namespace {

BrickworkGrid haar_grid(int width, int depth, Rng& rng) {
  return BrickworkGrid(2, width, depth, [&](int, int) { return haar_unitary(4, rng); });
}

RVector nonzero(const RVector& v, double floor = 1e-12) {
  std::vector<double> keep;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) >= floor) keep.push_back(v(i));
  std::sort(keep.begin(), keep.end(), std::greater<>());
  return Eigen::Map<RVector>(keep.data(), static_cast<Eigen::Index>(keep.size()));
}

// Spectrum of the reduced state of sites [start, start + n).
RVector block_spectrum(const StateVector& psi, int start, int n) {
  const Eigen::Index left = ipow(2, start), mid = ipow(2, n), right = ipow(2, psi.width - start - n);
  CMatrix m(mid, left * right);
  for (Eigen::Index l = 0; l < left; ++l)
    for (Eigen::Index a = 0; a < mid; ++a)
      for (Eigen::Index r = 0; r < right; ++r) m(a, l * right + r) = psi.amplitudes((l * mid + a) * right + r);
  return eigvals_hermitian(m * m.adjoint());
}

}  // namespace

TEST(Oracle, IdentityGatesKeepProductState) {
  Rng rng(201);
  const auto init = make_product_state("random-product", 2, 6, rng);
  const BrickworkGrid grid(2, 6, 3, [](int, int) { return CMatrix::Identity(4, 4); });
  const auto psi = evolve_brickwork(init, grid);
  EXPECT_LT(max_abs(CMatrix(psi.amplitudes - product_state_vector(init).amplitudes)), 1e-14);
  const RVector spec = reduced_spectrum(psi, 3);
  EXPECT_NEAR(spec(0), 1.0, 1e-12);
}

TEST(Oracle, SwapLayerPermutesSites) {
  Rng rng(202);
  ProductState init{2, {basis_vector(2, 1), basis_vector(2, 0), basis_vector(2, 0), basis_vector(2, 1)}};
  const BrickworkGrid grid(2, 4, 1, [](int, int) { return gate_swap(2).matrix; });
  const auto psi = evolve_brickwork(init, grid);
  // 1001 → 0110
  EXPECT_NEAR(std::abs(psi.amplitudes(0b0110)), 1.0, 1e-14);
}

TEST(Oracle, BellPairAcrossCut) {
  StateVector psi;
  psi.q = 2;
  psi.width = 2;
  psi.amplitudes = CVector::Zero(4);
  psi.amplitudes(0) = psi.amplitudes(3) = 1.0 / std::sqrt(2.0);
  const RVector s = reduced_spectrum(psi, 1);
  EXPECT_NEAR(s(0), 0.5, 1e-14);
  EXPECT_NEAR(s(1), 0.5, 1e-14);
  EXPECT_THROW(reduced_spectrum(psi, 2), std::invalid_argument);
}

TEST(Oracle, NormPreservedAndGuardEnforced) {
  Rng rng(203);
  const auto grid = haar_grid(10, 4, rng);
  const auto psi = evolve_brickwork(make_product_state("zeros", 2, 10, rng), grid);
  EXPECT_NEAR(psi.amplitudes.norm(), 1.0, 1e-10);
  const BrickworkGrid wide(2, 16, 1, [](int, int) { return CMatrix::Identity(4, 4); });
  EXPECT_THROW(evolve_brickwork(make_product_state("zeros", 2, 16, rng), wide), ResourceLimit);
  EXPECT_NO_THROW(evolve_brickwork(make_product_state("zeros", 2, 16, rng), wide, 16));
}

TEST(Oracle, SelfDualKickedIsingFiniteRegion) {
  // A block of n sites with both ends on channel cuts, far from the chain
  // edges, carries min(2t − 2, n)·log 2 of entanglement.
  Rng rng(204);
  const int width = 14;
  for (int t = 1; t <= 3; ++t) {
    const BrickworkGrid grid(2, width, t, [&](int, int) {
      return gate_kicked_ising({std::numbers::pi / 4, std::numbers::pi / 4, rng.uniform(0, 6.28),
                                rng.uniform(0, 6.28)}).matrix;
    });
    const auto psi = evolve_brickwork(make_product_state("random-bitstring", 2, width, rng), grid, width);
    for (int n : {2, 4}) {
      const int start = (width - n) / 2 + ((width - n) / 2 - t - 1 + 8) % 2;
      ASSERT_TRUE(channel_cut(start, t, width));
      const RVector s = block_spectrum(psi, start, n);
      double ent = 0.0;
      for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-15) ent -= s(i) * std::log(s(i));
      EXPECT_NEAR(ent, std::min(2 * t - 2, n) * std::log(2.0), 1e-8) << "t=" << t << " n=" << n;
    }
  }
}

TEST(Oracle, GridSliceGateMapping) {
  // A single non-identity gate lands in exactly one slice at the expected layer.
  const CMatrix marker = gate_swap(2).matrix * std::complex<double>(0, 1);
  const BrickworkGrid grid(2, 12, 4, [&](int layer, int x) {
    return (layer == 3 && x == 6) ? marker : CMatrix::Identity(4, 4);
  });
  Rng rng(205);
  const auto init = make_product_state("zeros", 2, 12, rng);
  int hits = 0;
  for (int j = -4; j < 10; ++j) {
    const auto slice = grid_slice(grid, init, j);
    for (int layer = 1; layer <= 4; ++layer) {
      if (max_abs(slice.layer_gates()[layer - 1] - CMatrix::Identity(4, 4)) > 0) {
        ++hits;
        EXPECT_EQ(layer, 3);
        EXPECT_EQ(j, 2);  // x = 2j + ℓ − 1
      }
    }
  }
  EXPECT_EQ(hits, 1);
}

TEST(Oracle, ChannelSpectrumMatchesHalfCut) {
  Rng rng(206);
  for (int t = 1; t <= 3; ++t) {
    const int n = 4 * t;
    for (int trial = 0; trial < 5; ++trial) {
      const auto grid = haar_grid(n, t, rng);
      const auto init = make_product_state("random-product", 2, n, rng);
      const auto psi = evolve_brickwork(init, grid);
      for (int cut = 1; cut < n; ++cut) {
        if (!channel_cut(cut, t, n)) continue;
        const RVector a = nonzero(reduced_spectrum(psi, cut));
        const RVector b = nonzero(channel_spectrum_for_cut(grid, init, cut));
        ASSERT_EQ(a.size(), b.size()) << "t=" << t << " cut=" << cut;
        EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-8) << "t=" << t << " cut=" << cut;
      }
    }
  }
}
