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

#include <numbers>

#include "oracles.hpp"
#include "qchannel/kraus.hpp"
#include "qchannel/slice_stream.hpp"

using namespace qchannel;

namespace {

std::vector<CMatrix> haar_layers(int q, int t, Rng& rng) {
  std::vector<CMatrix> g;
  for (int i = 0; i < t; ++i) g.push_back(haar_unitary(q * q, rng));
  return g;
}

}  // namespace

TEST(Kraus, MatchesBruteForceContraction) {
  Rng rng(21);
  for (int q : {2, 3}) {
    for (int t = 1; t <= (q == 2 ? 5 : 3); ++t) {
      const auto gates = haar_layers(q, t, rng);
      const CVector vl = haar_vector(q, rng), vr = haar_vector(q, rng);
      const auto slice = build_slice(gates, vl, vr);
      const auto ops = slice.kraus_operators();
      const auto ref = oracle_ref::brute_force_kraus(gates, vl, vr);
      ASSERT_EQ(ops.size(), ref.size());
      for (std::size_t s = 0; s < ops.size(); ++s) {
        EXPECT_LT(max_abs(ops[s] - ref[s]), 1e-12) << "q=" << q << " t=" << t << " s=" << s;
      }
    }
  }
}

TEST(Kraus, ApplyLegsMatchesKrausProducts) {
  Rng rng(22);
  const int t = 4;
  const auto slice = build_slice(haar_layers(2, t, rng), basis_vector(2, 0), basis_vector(2, 1));
  CMatrix phi(8, 3);
  for (Eigen::Index i = 0; i < phi.size(); ++i) phi(i) = rng.complex_normal();
  const CMatrix stacked = slice.apply_legs(phi);
  const auto ops = slice.kraus_operators();
  for (int s = 0; s < 4; ++s) EXPECT_LT(max_abs(stacked.middleRows(s * 8, 8) - ops[s] * phi), 1e-12);
}

TEST(Kraus, DepthTwoStackedUnitary) {
  // At t = 2 the stacked legs are U₂ acting on (w₁, b₁) with w₁ prepared by
  // gate 1: Σ_s A_s†A_s = I follows from unitarity of U₂ and the unit norm of
  // gate 1's output.
  Rng rng(23);
  const auto gates = haar_layers(2, 2, rng);
  const CVector vl = basis_vector(2, 0), vr = basis_vector(2, 0);
  const auto slice = build_slice(gates, vl, vr);
  const CVector out1 = gates[0] * kron(vl, vr);
  const auto ops = slice.kraus_operators();
  for (int s = 0; s < 4; ++s)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        cplx expect = 0.0;
        for (int w = 0; w < 2; ++w) expect += gates[1](s, w * 2 + b) * out1(a * 2 + w);
        EXPECT_LT(std::abs(ops[s](a, b) - expect), 1e-14);
      }
}

TEST(Kraus, CanonicalFormsAcrossFamilies) {
  // 200 slices over every gate family and depths up to 8.
  int count = 0;
  for (auto family : {GateFamily::haar, GateFamily::conserving, GateFamily::kicked_ising,
                      GateFamily::xxz, GateFamily::fixed_random}) {
    for (int t = 1; t <= 8; ++t) {
      for (int r = 0; r < 5; ++r, ++count) {
        CircuitSpec spec;
        spec.family = family;
        spec.depth = t;
        spec.initial_state = ProductStateKind::random_product;
        spec.random_fields = true;
        spec.kicked_ising = {0.4, 0.9, 0.0, 0.0};
        SliceStream stream(spec, derive_seed(500 + t, r));
        const auto slice = stream.next();
        EXPECT_LT(check_left_canonical(slice), 1e-10) << to_string(family) << " t=" << t;
        const auto mirrored = build_slice(slice.layer_gates(), slice.init_left(), slice.init_right(),
                                          Orientation::se_nw);
        EXPECT_LT(check_right_canonical(mirrored), 1e-10) << to_string(family) << " t=" << t;
      }
    }
  }
  EXPECT_EQ(count, 200);
}

TEST(Kraus, SelfDualKickedIsingIsBistochastic) {
  Rng rng(24);
  for (int t = 2; t <= 7; ++t) {
    std::vector<CMatrix> gates;
    for (int l = 0; l < t; ++l) {
      gates.push_back(gate_kicked_ising({std::numbers::pi / 4, std::numbers::pi / 4,
                                         rng.uniform(0, 6.28), rng.uniform(0, 6.28)})
                          .matrix);
    }
    const auto slice = build_slice(gates, basis_vector(2, 1), basis_vector(2, 0));
    EXPECT_LT(check_left_canonical(slice), 1e-10);
    EXPECT_LT(check_bistochastic(slice), 1e-10);
  }
}

TEST(Kraus, SeNwIsMirrorTranspose) {
  Rng rng(25);
  const auto gates = haar_layers(2, 3, rng);
  const CVector vl = haar_vector(2, rng), vr = haar_vector(2, rng);
  const auto se = build_slice(gates, vl, vr, Orientation::se_nw);
  std::vector<CMatrix> mirrored;
  const CMatrix sw = gate_swap(2).matrix;
  for (const auto& g : gates) mirrored.push_back(sw * g * sw);
  const auto ref = oracle_ref::brute_force_kraus(mirrored, vr, vl);
  const auto ops = se.kraus_operators();
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2)
      EXPECT_LT(max_abs(ops[s1 * 2 + s2] - ref[s2 * 2 + s1].transpose()), 1e-12);
  EXPECT_THROW(se.apply_legs(CMatrix::Identity(4, 4)), std::invalid_argument);
}

TEST(Kraus, RejectsBadShapes) {
  Rng rng(26);
  std::vector<CMatrix> gates{haar_unitary(4, rng), haar_unitary(9, rng)};
  EXPECT_THROW(build_slice(gates, basis_vector(2, 0), basis_vector(2, 0)), DimensionError);
  EXPECT_THROW(build_slice({haar_unitary(4, rng)}, basis_vector(3, 0), basis_vector(2, 0)),
               DimensionError);
  EXPECT_THROW(build_slice({haar_unitary(5, rng)}, basis_vector(2, 0), basis_vector(2, 0)),
               DimensionError);
  const auto slice = build_slice(haar_layers(2, 3, rng), basis_vector(2, 0), basis_vector(2, 0));
  EXPECT_THROW(slice.apply_legs(CMatrix::Identity(2, 2)), DimensionError);
}

TEST(SliceStream, ReproducibleAndFresh) {
  CircuitSpec spec;
  spec.depth = 3;
  SliceStream a(spec, 77), b(spec, 77);
  const auto s1 = a.next(), s2 = a.next();
  const auto r1 = b.next();
  EXPECT_EQ(max_abs(s1.layer_gates()[0] - r1.layer_gates()[0]), 0.0);
  EXPECT_GT(max_abs(s1.layer_gates()[0] - s2.layer_gates()[0]), 1e-3);
  EXPECT_FALSE(a.translation_invariant());
}

TEST(SliceStream, FloquetAndDeterministicFamiliesReuseGates) {
  CircuitSpec spec;
  spec.depth = 3;
  spec.floquet = true;
  SliceStream s(spec, 5);
  const auto x = s.next(), y = s.next();
  for (int l = 0; l < 3; ++l) EXPECT_EQ(max_abs(x.layer_gates()[l] - y.layer_gates()[l]), 0.0);
  EXPECT_GT(max_abs(x.layer_gates()[0] - x.layer_gates()[1]), 1e-3);

  spec.floquet = false;
  spec.family = GateFamily::fixed_random;
  SliceStream f(spec, 5);
  const auto z = f.next();
  EXPECT_EQ(max_abs(z.layer_gates()[0] - z.layer_gates()[2]), 0.0);
  EXPECT_TRUE(f.translation_invariant());
}

TEST(SliceStream, InitialStateDoesNotChangeGates) {
  CircuitSpec a, b;
  a.depth = b.depth = 4;
  b.initial_state = ProductStateKind::random_product;
  SliceStream sa(a, 9), sb(b, 9);
  for (int i = 0; i < 3; ++i) {
    const auto x = sa.next(), y = sb.next();
    EXPECT_EQ(max_abs(x.layer_gates()[3] - y.layer_gates()[3]), 0.0);
  }
}

TEST(SliceStream, RejectsUnsupportedCombos) {
  CircuitSpec spec;
  spec.family = GateFamily::kicked_ising;
  spec.q = 3;
  EXPECT_THROW(SliceStream(spec, 1), UnsupportedModel);
  spec.q = 2;
  spec.depth = 0;
  EXPECT_THROW(SliceStream(spec, 1), std::invalid_argument);
}
