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

// slice_stream.hpp: the sequence of slices met as the cut moves left.
//
// The diagonals of a brickwork partition its gates, so consecutive slices
// never share a gate. For random circuits every slice therefore gets fresh
// gates. Floquet circuits (the same gate per layer at every position) reuse
// one set of layer gates; fully deterministic circuits reuse one slice.

#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qchannel/gates.hpp"
#include "qchannel/kraus.hpp"
#include "qchannel/rng.hpp"

namespace qchannel {

struct CircuitSpec {
  GateFamily family = GateFamily::haar;
  int q = 2;
  int depth = 2;
  ProductStateKind initial_state = ProductStateKind::zeros;

  KickedIsingParams kicked_ising;
  /// Draw h₁, h₂ uniformly from [field_lo, field_hi) for every gate.
  bool random_fields = false;
  double field_lo = 0.0;
  double field_hi = 2.0 * std::numbers::pi;

  XXZParams xxz;

  /// Random families: draw one gate per layer and reuse it at every position.
  bool floquet = false;

  void validate() const {
    if (q < 2) throw std::invalid_argument("CircuitSpec: q must be >= 2");
    if (depth < 1) throw std::invalid_argument("CircuitSpec: depth must be >= 1");
    if ((family == GateFamily::kicked_ising || family == GateFamily::xxz ||
         family == GateFamily::conserving) && q != 2) {
      throw UnsupportedModel("CircuitSpec: family '" + std::string(to_string(family)) +
                             "' is defined for q = 2 only");
    }
  }
};

class SliceStream {
 public:
  /// Gates and initial-state vectors come from independent streams derived
  /// from `seed`, so changing the initial state leaves the gates unchanged.
  SliceStream(CircuitSpec spec, std::uint64_t seed)
      : spec_(std::move(spec)),
        seed_(seed),
        gate_rng_(derive_seed(seed, 1)),
        state_rng_(derive_seed(seed, 2)) {
    spec_.validate();
    if (spec_.family == GateFamily::fixed_random) {
      // One gate tiled over the whole circuit.
      fixed_.assign(static_cast<std::size_t>(spec_.depth), draw_gate());
    } else if (gates_fixed()) {
      for (int layer = 0; layer < spec_.depth; ++layer) fixed_.push_back(draw_gate());
    }
  }

  const CircuitSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t emitted() const { return emitted_; }

  /// Gates are the same at every position.
  bool gates_fixed() const {
    switch (spec_.family) {
      case GateFamily::xxz:
      case GateFamily::fixed_random: return true;
      case GateFamily::kicked_ising: return spec_.floquet || !spec_.random_fields;
      default: return spec_.floquet;
    }
  }

  /// Every slice is identical.
  bool translation_invariant() const {
    return gates_fixed() && (spec_.initial_state == ProductStateKind::zeros ||
                             spec_.initial_state == ProductStateKind::neel);
  }

  /// The next slice to the left.
  KrausSlice next() {
    ++emitted_;
    if (translation_invariant()) {
      if (!cached_) cached_ = build();
      return *cached_;
    }
    return build();
  }

 private:
  CMatrix draw_gate() {
    switch (spec_.family) {
      case GateFamily::haar:
      case GateFamily::fixed_random: return gate_haar(spec_.q, gate_rng_).matrix;
      case GateFamily::conserving: return gate_conserving(spec_.q, gate_rng_).matrix;
      case GateFamily::kicked_ising: {
        KickedIsingParams p = spec_.kicked_ising;
        if (spec_.random_fields) {
          p.h1 = gate_rng_.uniform(spec_.field_lo, spec_.field_hi);
          p.h2 = gate_rng_.uniform(spec_.field_lo, spec_.field_hi);
        }
        return gate_kicked_ising(p).matrix;
      }
      case GateFamily::xxz: return gate_xxz(spec_.xxz).matrix;
    }
    throw std::logic_error("SliceStream: bad family");
  }

  KrausSlice build() {
    std::vector<CMatrix> gates;
    if (gates_fixed()) {
      gates = fixed_;
    } else {
      gates.reserve(static_cast<std::size_t>(spec_.depth));
      for (int layer = 0; layer < spec_.depth; ++layer) gates.push_back(draw_gate());
    }
    // Slice sites are (2j, 2j+1): the left one is even for the Néel pattern.
    CVector left = product_site_vector(spec_.initial_state, spec_.q, 0, state_rng_);
    CVector right = product_site_vector(spec_.initial_state, spec_.q, 1, state_rng_);
    return build_slice(std::move(gates), std::move(left), std::move(right));
  }

  CircuitSpec spec_;
  std::uint64_t seed_;
  Rng gate_rng_;
  Rng state_rng_;
  std::vector<CMatrix> fixed_;
  std::optional<KrausSlice> cached_;
  std::size_t emitted_ = 0;
};

}  // namespace qchannel
