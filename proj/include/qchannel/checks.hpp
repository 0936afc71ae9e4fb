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

// checks.hpp: self-check suites shared by the validate command and the
// acceptance runner: channel spectra against brute-force state vectors,
// canonical forms, and the kicked Ising identities.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "qchannel/analysis.hpp"
#include "qchannel/channel_exact.hpp"
#include "qchannel/gates.hpp"
#include "qchannel/kraus.hpp"
#include "qchannel/oracle.hpp"
#include "qchannel/rng.hpp"
#include "qchannel/slice_stream.hpp"

namespace qchannel {

struct CheckResult {
  std::string name;
  std::size_t cases = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;

  bool passed() const { return cases > 0 && max_deviation <= tolerance; }
  void record(double dev) {
    ++cases;
    if (std::isnan(max_deviation)) return;
    if (!(dev <= max_deviation)) max_deviation = dev;  // NaN sticks
  }
};

/// Largest eigenvalue mismatch between two descending spectra, counting
/// every eigenvalue at or above `floor` in either list.
inline double spectrum_mismatch(const RVector& a, const RVector& b, double floor = 1e-12) {
  const Eigen::Index n = std::max(a.size(), b.size());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = i < a.size() ? std::max(a(i), 0.0) : 0.0;
    const double y = i < b.size() ? std::max(b(i), 0.0) : 0.0;
    if (x < floor && y < floor) continue;
    worst = std::max(worst, std::abs(x - y));
  }
  return worst;
}

/// Channel spectra of random Haar circuits on N sites against the half-cut
/// spectra of the brute-force state, over every channel cut.
inline CheckResult check_oracle_spectra(int q, int depth, int width, int circuits, std::uint64_t seed,
                                        int max_width = kOracleMaxWidth, double tol = 1e-8) {
  CheckResult res{"oracle spectra t=" + std::to_string(depth) + " N=" + std::to_string(width), 0, 0.0, tol};
  for (int c = 0; c < circuits; ++c) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    const BrickworkGrid grid(q, width, depth, [&](int, int) { return gate_haar(q, rng).matrix; });
    const auto init = make_product_state(ProductStateKind::random_product, q, width, rng);
    const auto psi = evolve_brickwork(init, grid, max_width);
    for (int cut = 1; cut < width; ++cut) {
      if (!channel_cut(cut, depth, width)) continue;
      res.record(spectrum_mismatch(reduced_spectrum(psi, cut), channel_spectrum_for_cut(grid, init, cut)));
    }
  }
  return res;
}

/// Left-canonical SW-NE slices and right-canonical SE-NW slices over the
/// four gate families (fixed-random is a Haar gate and adds nothing here),
/// cycling depths 1..t_max.
inline std::vector<CheckResult> check_canonical_suite(int slices, int t_max, std::uint64_t seed,
                                                      double tol = 1e-10) {
  CheckResult left{"left-canonical (SW-NE)", 0, 0.0, tol};
  CheckResult right{"right-canonical (SE-NW)", 0, 0.0, tol};
  const GateFamily families[] = {GateFamily::haar, GateFamily::conserving, GateFamily::kicked_ising,
                                 GateFamily::xxz};
  for (int i = 0; i < slices; ++i) {
    CircuitSpec spec;
    spec.family = families[i % 4];
    spec.depth = 1 + (i / 4) % t_max;
    spec.initial_state = ProductStateKind::random_product;
    spec.random_fields = true;
    spec.kicked_ising = {0.4, 0.9, 0.0, 0.0};
    SliceStream stream(spec, derive_seed(seed, static_cast<std::uint64_t>(i)));
    const KrausSlice slice = stream.next();
    left.record(check_left_canonical(slice));
    const KrausSlice mirrored =
        build_slice(slice.layer_gates(), slice.init_left(), slice.init_right(), Orientation::se_nw);
    right.record(check_right_canonical(mirrored));
  }
  return {left, right};
}

/// Kicked Ising identities at coupling J and field b with random longitudinal
/// fields and Z-basis product states. At |J| = |b| = π/4 every deviation
/// vanishes and all Rényi entropies equal (t − 1)·log q.
inline std::vector<CheckResult> check_kicked_ising(int depth, double j, double b, int slices,
                                                   std::uint64_t seed, std::size_t steps,
                                                   const std::vector<double>& renyi_indices,
                                                   double tol = 1e-10) {
  CircuitSpec spec;
  spec.family = GateFamily::kicked_ising;
  spec.depth = depth;
  spec.kicked_ising = {j, b, 0.0, 0.0};
  spec.random_fields = true;
  spec.initial_state = ProductStateKind::random_bitstring;

  CheckResult canonical{"left-canonical", 0, 0.0, tol};
  CheckResult bistochastic{"bistochastic", 0, 0.0, tol};
  CheckResult dual{"dual-unitary", 0, 0.0, tol};
  CheckResult fixed{"fixes I/D", 0, 0.0, tol};
  CheckResult flat{"entropies = (t-1) log 2", 0, 0.0, tol};

  const Eigen::Index d = ipow(2, depth - 1);
  const CMatrix mixed = CMatrix::Identity(d, d) / static_cast<double>(d);
  const double target = (depth - 1) * std::log(2.0);
  for (int s = 0; s < slices; ++s) {
    const std::uint64_t realization = derive_seed(seed, static_cast<std::uint64_t>(s));
    SliceStream stream(spec, realization);
    Rng rng(derive_seed(realization, 3));
    AncillaState state = init_ancilla(AncillaInit::random_pure, d, rng);
    for (std::size_t i = 1; i <= steps; ++i) {
      const KrausSlice slice = stream.next();
      if (i == 1) {
        canonical.record(check_left_canonical(slice));
        bistochastic.record(check_bistochastic(slice));
        for (const auto& g : slice.layer_gates()) dual.record(check_dual_unitarity(Gate{2, g, ""}));
        fixed.record(max_abs(apply_channel(slice, mixed) - mixed));
      }
      state = apply_channel(slice, state);
      if (i >= static_cast<std::size_t>(depth)) {
        const SpectrumRecord rec = spectrum_record(state);
        for (double n : renyi_indices) flat.record(std::abs(renyi(rec, n) - target));
      }
    }
  }
  return {canonical, bistochastic, dual, fixed, flat};
}

}  // namespace qchannel
