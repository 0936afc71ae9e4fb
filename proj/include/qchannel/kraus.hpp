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

// kraus.hpp: Kraus operators from one diagonal slice of a brickwork circuit.
//
// Geometry (SW-NE slice j of a depth-t brickwork, layers ℓ = 1..t bottom-up).
// Gate ℓ of the slice acts on sites (2j + ℓ − 1, 2j + ℓ). Gate 1 takes the two
// initial-state vectors of sites 2j, 2j+1. For ℓ ≥ 2 gate ℓ takes the right
// output of gate ℓ−1 on its left leg and bond leg b_{t−ℓ+1} on its right leg.
// Its left output leaves the slice as bond leg a_{t−ℓ}; its right output
// feeds gate ℓ+1. Gate t emits the physical pair (s₁, s₂). Bond legs a_k of
// slice j are the b_k legs of slice j−1, so
//
//   A_{(s₁s₂); a₁…a_{t−1}, b₁…b_{t−1}},   D = q^{t−1},
//
// with a₁/b₁ (the topmost legs) the most significant digit. Applying the
// channel R ↦ Σ_s A_s R A_s† moves the entanglement cut one slice (two sites)
// to the left.

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qchannel/gates.hpp"
#include "qchannel/linalg.hpp"
#include "qchannel/register_ops.hpp"

namespace qchannel {

enum class Orientation { sw_ne, se_nw };

class KrausSlice {
 public:
  int q() const { return q_; }
  int depth() const { return depth_; }
  Eigen::Index bond_dim() const { return ipow(q_, depth_ - 1); }
  Eigen::Index num_operators() const { return static_cast<Eigen::Index>(q_) * q_; }
  Orientation orientation() const { return orientation_; }

  /// Gates bottom (layer 1) to top (layer t).
  const std::vector<CMatrix>& layer_gates() const { return gates_; }
  const CVector& init_left() const { return init_left_; }
  const CVector& init_right() const { return init_right_; }

  /// The accessors below describe the SW-NE tensors used by the engines (for
  /// an SE-NW slice, those of its mirror image).
  ///
  /// U₁(v_left ⊗ v_right) as a q×q matrix: row = left output (bond leg
  /// a_{t−1}), column = right output (feeds gate 2).
  const CMatrix& bottom_state() const { return bottom_; }

  /// Gate ℓ (2 ≤ ℓ ≤ t−1) with its legs regrouped for the middle-out
  /// channel: M[(a, w_in), (w_out, b)] = U[(a, w_out), (w_in, b)].
  const CMatrix& dual_gate(int layer) const { return dual_[static_cast<std::size_t>(layer)]; }

  /// Stacked isometry applied to the columns of `phi` (D × K):
  /// returns (q²·D) × K with block s = s₁·q + s₂ holding A_s·phi.
  CMatrix apply_legs(const CMatrix& phi) const;

  /// The q² Kraus matrices, A_{s₁s₂} at index s₁·q + s₂.
  std::vector<CMatrix> kraus_operators() const;

 private:
  friend KrausSlice build_slice(std::vector<CMatrix> gates, CVector init_left, CVector init_right,
                                Orientation orientation);
  KrausSlice() = default;
  CMatrix legs_impl(const CMatrix& phi) const;

  int q_ = 2;
  int depth_ = 1;
  Orientation orientation_ = Orientation::sw_ne;
  std::vector<CMatrix> gates_;
  CVector init_left_, init_right_;
  CMatrix bottom_;
  std::vector<CMatrix> dual_;     // indexed by layer, entries 2..t-1 used
  std::vector<CMatrix> swapped_;  // SWAP·U·SWAP, same indexing
  CMatrix top_;                   // U_t·SWAP
};

namespace detail {

inline CMatrix swap_matrix(int q) { return gate_swap(q).matrix; }

inline CMatrix regroup_dual(const CMatrix& u, int q) {
  CMatrix m(q * q, q * q);
  for (int a = 0; a < q; ++a)
    for (int wo = 0; wo < q; ++wo)
      for (int wi = 0; wi < q; ++wi)
        for (int b = 0; b < q; ++b) m(a * q + wi, wo * q + b) = u(a * q + wo, wi * q + b);
  return m;
}

// Left-right mirror of a SW-NE slice, used to realize SE-NW slices.
inline std::vector<CMatrix> mirrored_gates(const std::vector<CMatrix>& gates, int q) {
  const CMatrix sw = swap_matrix(q);
  std::vector<CMatrix> out;
  out.reserve(gates.size());
  for (const auto& g : gates) out.push_back(sw * g * sw);
  return out;
}

}  // namespace detail

/// Builds the slice from its t layer gates (bottom first) and the two
/// initial-state vectors entering gate 1.
inline KrausSlice build_slice(std::vector<CMatrix> gates, CVector init_left, CVector init_right,
                              Orientation orientation = Orientation::sw_ne) {
  if (gates.empty()) throw DimensionError("build_slice: a slice needs at least one gate");
  const Eigen::Index qq = gates.front().rows();
  int q = 1;
  while (static_cast<Eigen::Index>(q) * q < qq) ++q;
  if (static_cast<Eigen::Index>(q) * q != qq) {
    throw DimensionError("build_slice: gate size " + shape_string(gates.front()) +
                         " is not q^2 x q^2");
  }
  for (const auto& g : gates) {
    if (g.rows() != qq || g.cols() != qq) {
      throw DimensionError("build_slice: gates have inconsistent shapes (" +
                           shape_string(gates.front()) + " vs " + shape_string(g) + ")");
    }
  }
  if (init_left.size() != q || init_right.size() != q) {
    throw DimensionError("build_slice: initial-state vectors must have dimension q");
  }

  KrausSlice s;
  s.q_ = q;
  s.depth_ = static_cast<int>(gates.size());
  s.orientation_ = orientation;
  s.gates_ = std::move(gates);
  s.init_left_ = std::move(init_left);
  s.init_right_ = std::move(init_right);

  // Engines always work on the SW-NE form; an SE-NW slice is its mirror.
  std::vector<CMatrix> work = s.gates_;
  CVector vl = s.init_left_, vr = s.init_right_;
  if (orientation == Orientation::se_nw) {
    work = detail::mirrored_gates(s.gates_, q);
    std::swap(vl, vr);
  }
  const CVector bottom = work.front() * kron(vl, vr);
  s.bottom_.resize(q, q);
  for (int a = 0; a < q; ++a)
    for (int w = 0; w < q; ++w) s.bottom_(a, w) = bottom(a * q + w);

  const CMatrix sw = detail::swap_matrix(q);
  s.dual_.assign(work.size() + 1, CMatrix());
  s.swapped_.assign(work.size() + 1, CMatrix());
  for (int layer = 2; layer < s.depth_; ++layer) {
    const CMatrix& u = work[static_cast<std::size_t>(layer - 1)];
    s.dual_[static_cast<std::size_t>(layer)] = detail::regroup_dual(u, q);
    s.swapped_[static_cast<std::size_t>(layer)] = sw * u * sw;
  }
  s.top_ = work.back() * sw;
  return s;
}

inline CMatrix KrausSlice::apply_legs(const CMatrix& phi) const {
  if (orientation_ != Orientation::sw_ne) {
    throw std::invalid_argument("apply_legs: channel engines need a SW-NE slice");
  }
  return legs_impl(phi);
}

inline CMatrix KrausSlice::legs_impl(const CMatrix& phi) const {
  const Eigen::Index d = bond_dim();
  if (phi.rows() != d) {
    throw DimensionError("apply_legs: input has " + std::to_string(phi.rows()) +
                         " rows, bond dimension is " + std::to_string(d));
  }
  const int q = q_;
  const Eigen::Index qq = static_cast<Eigen::Index>(q) * q;
  if (depth_ == 1) {
    CMatrix out(qq, phi.cols());
    for (Eigen::Index s = 0; s < qq; ++s) out.row(s) = bottom_(s / q, s % q) * phi.row(0);
    return out;
  }
  // Register layout before gate ℓ: [b₁ … b_{t−ℓ+1}, w_{ℓ−1}, a_{t−ℓ+1} … a_{t−1}].
  const int n = depth_ + 1;
  CMatrix x(d * qq, phi.cols());
  for (Eigen::Index b = 0; b < d; ++b) {
    for (int w = 0; w < q; ++w)
      for (int a = 0; a < q; ++a) x.row(b * qq + w * q + a) = bottom_(a, w) * phi.row(b);
  }
  std::vector<DigitOp> ops;
  ops.reserve(static_cast<std::size_t>(depth_ - 1));
  for (int layer = 2; layer < depth_; ++layer) ops.push_back({&swapped_[static_cast<std::size_t>(layer)], depth_ - layer, 2});
  ops.push_back({&top_, 0, 2});
  apply_rows_sequence(x, ops, q, n);
  return x;
}

inline std::vector<CMatrix> KrausSlice::kraus_operators() const {
  const Eigen::Index d = bond_dim();
  const Eigen::Index qq = num_operators();
  const CMatrix stacked = legs_impl(CMatrix::Identity(d, d));
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(qq));
  if (orientation_ == Orientation::se_nw) {
    // The internal tensors describe the mirror image: A_{s₁s₂} = (A^mirror_{s₂s₁})ᵀ.
    for (int s1 = 0; s1 < q_; ++s1)
      for (int s2 = 0; s2 < q_; ++s2) out.push_back(stacked.middleRows((s2 * q_ + s1) * d, d).transpose());
    return out;
  }
  for (Eigen::Index s = 0; s < qq; ++s) out.push_back(stacked.middleRows(s * d, d));
  return out;
}

// ---------------------------------------------------------------------------
// Canonical-form and duality checks

/// ‖Σ_s A_s†A_s − I‖_max.
inline double check_left_canonical(std::span<const CMatrix> ops) {
  if (ops.empty()) return 0.0;
  CMatrix acc = CMatrix::Zero(ops.front().cols(), ops.front().cols());
  for (const auto& a : ops) acc.noalias() += a.adjoint() * a;
  return max_abs(acc - CMatrix::Identity(acc.rows(), acc.cols()));
}

/// ‖Σ_s A_s A_s† − I‖_max.
inline double check_right_canonical(std::span<const CMatrix> ops) {
  if (ops.empty()) return 0.0;
  CMatrix acc = CMatrix::Zero(ops.front().rows(), ops.front().rows());
  for (const auto& a : ops) acc.noalias() += a * a.adjoint();
  return max_abs(acc - CMatrix::Identity(acc.rows(), acc.cols()));
}

inline double check_left_canonical(const KrausSlice& k) {
  const auto ops = k.kraus_operators();
  return check_left_canonical(std::span<const CMatrix>(ops));
}

inline double check_right_canonical(const KrausSlice& k) {
  const auto ops = k.kraus_operators();
  return check_right_canonical(std::span<const CMatrix>(ops));
}

/// Unitality of the channel: a slice that is both left and right canonical
/// defines a bistochastic channel.
inline double check_bistochastic(const KrausSlice& k) { return check_right_canonical(k); }

/// Space-time reshuffle Ũ_{(a,b),(c,d)} = U_{(a,c),(b,d)}.
inline CMatrix dual_reshuffle(const CMatrix& u, int q) {
  CMatrix d(q * q, q * q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      for (int c = 0; c < q; ++c)
        for (int e = 0; e < q; ++e) d(a * q + b, c * q + e) = u(a * q + c, b * q + e);
  return d;
}

/// ‖Ũ†Ũ − I‖_max for the reshuffled gate.
inline double check_dual_unitarity(const Gate& g) {
  return unitarity_deviation(dual_reshuffle(g.matrix, g.q));
}

}  // namespace qchannel
