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

#include "qchannel/channel_exact.hpp"
#include "qchannel/channel_lowrank.hpp"
#include "qchannel/slice_stream.hpp"

using namespace qchannel;

TEST(Truncate, FlatSpectrumHalved) {
  AncillaState r;
  r.R = CMatrix::Identity(4, 4) / 4.0;
  const auto lr = truncate(r, 2);
  ASSERT_EQ(lr.rank(), 2);
  EXPECT_NEAR(lr.lambda(0), 0.5, 1e-14);
  EXPECT_NEAR(lr.lambda(1), 0.5, 1e-14);
  EXPECT_NEAR(lr.discarded_weight, 0.5, 1e-14);
}

TEST(Truncate, FullRankIsIdentityOperation) {
  Rng rng(51);
  const auto r = init_ancilla(AncillaInit::random_pure, 8, rng);
  CircuitSpec spec;
  spec.depth = 4;
  SliceStream stream(spec, 52);
  const auto s = apply_channel(stream.next(), apply_channel(stream.next(), r));
  const auto lr = truncate(s, 8);
  EXPECT_LT(max_abs(lr.to_dense() - s.R), 1e-12);
  EXPECT_NEAR(lr.discarded_weight, 0.0, 1e-14);
  const auto again = truncate(lr, 100);
  EXPECT_EQ(again.rank(), lr.rank());
  EXPECT_TRUE(again.rank_saturated);
  EXPECT_THROW(truncate(lr, 0), std::invalid_argument);
}

TEST(LowRank, FullRankMatchesExactEngine) {
  for (int t = 2; t <= 4; ++t) {
    const Eigen::Index d = ipow(2, t - 1);
    CircuitSpec spec;
    spec.depth = t;
    spec.initial_state = ProductStateKind::random_product;
    SliceStream a(spec, 60 + t), b(spec, 60 + t);
    Rng rng(70);
    AncillaState ex = init_ancilla(AncillaInit::random_pure, d, rng);
    LowRankAncilla lr = truncate(ex, static_cast<int>(d));
    for (int step = 0; step < 10; ++step) {
      ex = apply_channel(a.next(), ex);
      lr = apply_channel_lowrank(b.next(), lr, static_cast<int>(d));
      const RVector ev = eigvals_hermitian(ex.R);
      for (Eigen::Index i = 0; i < lr.rank(); ++i) EXPECT_NEAR(lr.lambda(i), ev(i), 1e-8);
      EXPECT_LT(max_abs(lr.to_dense() - ex.R), 1e-8);
    }
  }
}

TEST(LowRank, StaysOrthonormalAndNormalized) {
  CircuitSpec spec;
  spec.depth = 7;
  SliceStream stream(spec, 80);
  Rng rng(81);
  LowRankAncilla lr = lowrank_from_pure(haar_vector(64, rng));
  for (int step = 0; step < 25; ++step) {
    lr = apply_channel_lowrank(stream.next(), lr, 12);
    EXPECT_NEAR(lr.lambda.sum(), 1.0, 1e-12);
    EXPECT_LT(unitarity_deviation(lr.vectors.adjoint() * lr.vectors), 1e-10);
    EXPECT_LT(max_abs(lr.vectors.adjoint() * lr.vectors - CMatrix::Identity(lr.rank(), lr.rank())), 1e-10);
    for (Eigen::Index i = 1; i < lr.rank(); ++i) EXPECT_GE(lr.lambda(i - 1), lr.lambda(i));
  }
}

TEST(LowRank, RankOneThroughDepthTwoHasAtMostFourTerms) {
  CircuitSpec spec;
  spec.depth = 2;
  spec.q = 3;
  SliceStream stream(spec, 90);
  Rng rng(91);
  const auto lr = apply_channel_lowrank(stream.next(), lowrank_from_pure(haar_vector(3, rng)), 50);
  EXPECT_LE(lr.rank(), 3);
  spec.q = 2;
  spec.depth = 4;
  SliceStream s2(spec, 92);
  const auto lr2 = apply_channel_lowrank(s2.next(), lowrank_from_pure(haar_vector(8, rng)), 50);
  EXPECT_LE(lr2.rank(), 4);
  EXPECT_TRUE(lr2.rank_saturated);
}

TEST(LowRank, SelfDualKeepsFlatSpectrum) {
  CircuitSpec spec;
  spec.family = GateFamily::kicked_ising;
  spec.random_fields = true;
  spec.depth = 5;
  SliceStream stream(spec, 93);
  AncillaState id;
  id.R = CMatrix::Identity(16, 16) / 16.0;
  LowRankAncilla lr = truncate(id, 16);
  for (int i = 0; i < 5; ++i) {
    lr = apply_channel_lowrank(stream.next(), lr, 16);
    for (Eigen::Index k = 0; k < lr.rank(); ++k) EXPECT_NEAR(lr.lambda(k), 1.0 / 16, 1e-10);
  }
}

TEST(LowRank, TopEigenvaluesMatchExactWhenRankIsAmple) {
  // K ≥ 4× the number of eigenvalues above 1e−6 recovers them to 1e−6 relative.
  const int t = 6;
  CircuitSpec spec;
  spec.depth = t;
  SliceStream a(spec, 94), b(spec, 94);
  Rng rng(95);
  const CVector psi = haar_vector(32, rng);
  AncillaState ex;
  ex.R = psi * psi.adjoint();
  LowRankAncilla lr = lowrank_from_pure(psi);
  for (int step = 0; step < 3; ++step) {
    ex = apply_channel(a.next(), ex);
    const RVector ev = eigvals_hermitian(ex.R);
    int big = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) big += ev(i) > 1e-6;
    lr = apply_channel_lowrank(b.next(), lr, std::min(32, 4 * big));
    for (Eigen::Index i = 0; i < big; ++i) EXPECT_NEAR(lr.lambda(i) / ev(i), 1.0, 1e-6);
  }
}

TEST(LowRank, DiscardedWeightShrinksWithRank) {
  const int t = 7;
  CircuitSpec spec;
  spec.depth = t;
  double prev = 1.0;
  for (int k : {4, 8, 16, 32, 64}) {
    SliceStream stream(spec, 96);
    Rng rng(97);
    LowRankAncilla lr = lowrank_from_pure(haar_vector(64, rng));
    double total = 0.0;
    for (int i = 0; i < 12; ++i) {
      lr = apply_channel_lowrank(stream.next(), lr, k);
      total += lr.discarded_weight;
    }
    EXPECT_LE(lr.discarded_weight, prev + 1e-12) << "K=" << k;
    prev = lr.discarded_weight;
    (void)total;
  }
  EXPECT_LT(prev, 1e-12);
}

TEST(LowRank, CalibrateRankStopsWhenWithinTolerance) {
  // Synthetic purity curve approaching 0.5 from above.
  auto curve = [](int k) { return 0.5 * (1.0 + 1.0 / k); };
  const auto cal = calibrate_rank(curve, 0.5, 0.01, 4, 512, 2.0);
  EXPECT_TRUE(cal.converged);
  EXPECT_EQ(cal.rank, 128);
  EXPECT_EQ(cal.history.front().first, 4);
  const auto capped = calibrate_rank(curve, 0.5, 1e-6, 4, 64, 2.0);
  EXPECT_FALSE(capped.converged);
  EXPECT_EQ(capped.rank, 64);
}

TEST(LowRank, RejectsDimensionMismatch) {
  CircuitSpec spec;
  spec.depth = 3;
  SliceStream stream(spec, 98);
  Rng rng(99);
  EXPECT_THROW(apply_channel_lowrank(stream.next(), lowrank_from_pure(haar_vector(8, rng)), 4),
               DimensionError);
}
