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

// oracle.hpp: brute-force state vectors of finite brickwork circuits.
//
// Sites 0..N−1, site 0 the most significant digit. Layer ℓ (1-based) holds
// gates on (x, x+1) for x ≡ ℓ−1 (mod 2); gates that would leave the chain
// are absent. The harness at the bottom reads the same circuit as a stream
// of slices so the two engines can be compared cut by cut.

#pragma once

#include <Eigen/SVD>

#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qchannel/channel_exact.hpp"
#include "qchannel/gates.hpp"
#include "qchannel/kraus.hpp"
#include "qchannel/linalg.hpp"
#include "qchannel/register_ops.hpp"

namespace qchannel {

/// Default width limit for q = 2; larger widths must be requested explicitly.
inline constexpr int kOracleMaxWidth = 14;

class ResourceLimit : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct StateVector {
  int q = 2;
  int width = 0;
  CVector amplitudes;
};

class BrickworkGrid {
 public:
  /// `make_gate(layer, x)` supplies the gate on sites (x, x+1).
  BrickworkGrid(int q, int width, int depth, const std::function<CMatrix(int, int)>& make_gate)
      : q_(q), width_(width), depth_(depth) {
    if (width < 2) throw std::invalid_argument("BrickworkGrid: width must be >= 2");
    if (depth < 1) throw std::invalid_argument("BrickworkGrid: depth must be >= 1");
    gates_.resize(static_cast<std::size_t>(depth));
    for (int layer = 1; layer <= depth; ++layer) {
      auto& row = gates_[static_cast<std::size_t>(layer - 1)];
      row.resize(static_cast<std::size_t>(width));
      for (int x = (layer - 1) % 2; x + 1 < width; x += 2) row[static_cast<std::size_t>(x)] = make_gate(layer, x);
    }
  }

  int q() const { return q_; }
  int width() const { return width_; }
  int depth() const { return depth_; }

  bool has_gate(int layer, int x) const {
    return layer >= 1 && layer <= depth_ && x >= 0 && x + 1 < width_ && ((x - (layer - 1)) % 2 == 0);
  }

  /// Gate on (x, x+1) at `layer`; identity where the grid has none.
  CMatrix gate(int layer, int x) const {
    if (!has_gate(layer, x)) return CMatrix::Identity(q_ * q_, q_ * q_);
    return gates_[static_cast<std::size_t>(layer - 1)][static_cast<std::size_t>(x)];
  }

 private:
  int q_, width_, depth_;
  std::vector<std::vector<CMatrix>> gates_;
};

inline StateVector product_state_vector(const ProductState& init) {
  StateVector s;
  s.q = init.q;
  s.width = init.width();
  CVector v = CVector::Ones(1);
  for (const auto& site : init.site_vectors) v = kron(v, site);
  s.amplitudes = v;
  return s;
}

inline StateVector evolve_brickwork(const ProductState& init, const BrickworkGrid& grid,
                                    int max_width = kOracleMaxWidth) {
  if (init.width() != grid.width() || init.q != grid.q()) {
    throw DimensionError("evolve_brickwork: initial state does not match the grid");
  }
  if (grid.width() % 2 != 0) throw std::invalid_argument("evolve_brickwork: width must be even");
  const double log_size = grid.width() * std::log2(static_cast<double>(grid.q()));
  if (grid.width() > max_width || log_size > 30.0) {
    std::ostringstream os;
    os << "evolve_brickwork: width " << grid.width() << " exceeds the oracle limit " << max_width;
    throw ResourceLimit(os.str());
  }
  StateVector s = product_state_vector(init);
  CMatrix amp = s.amplitudes;
  for (int layer = 1; layer <= grid.depth(); ++layer) {
    for (int x = (layer - 1) % 2; x + 1 < grid.width(); x += 2) {
      apply_rows(amp, grid.gate(layer, x), grid.q(), grid.width(), x, 2);
    }
  }
  s.amplitudes = amp.col(0);
  return s;
}

/// Eigenvalues of the reduced density matrix of sites [0, cut), descending.
inline RVector reduced_spectrum(const StateVector& psi, int cut) {
  if (cut < 1 || cut >= psi.width) throw std::invalid_argument("reduced_spectrum: cut out of range");
  const Eigen::Index left = ipow(psi.q, cut);
  const Eigen::Index right = ipow(psi.q, psi.width - cut);
  // Site 0 is most significant, so amplitudes reshape row-major to left × right.
  CMatrix m(left, right);
  for (Eigen::Index i = 0; i < left; ++i)
    for (Eigen::Index j = 0; j < right; ++j) m(i, j) = psi.amplitudes(i * right + j);
  Eigen::BDCSVD<CMatrix> svd(m);
  const RVector sv = svd.singularValues();
  return sv.cwiseAbs2();
}

// ---------------------------------------------------------------------------
// Slice view of a finite grid

/// The SW-NE slice j' of an (implicitly infinite) circuit that equals the
/// grid inside it and the identity outside, with |0⟩ as the missing sites'
/// initial state.
inline KrausSlice grid_slice(const BrickworkGrid& grid, const ProductState& init, int j) {
  const int t = grid.depth();
  std::vector<CMatrix> gates;
  gates.reserve(static_cast<std::size_t>(t));
  for (int layer = 1; layer <= t; ++layer) gates.push_back(grid.gate(layer, 2 * j + layer - 1));
  auto site = [&](int x) {
    return (x >= 0 && x < init.width()) ? init.site_vectors[static_cast<std::size_t>(x)]
                                        : basis_vector(init.q, 0);
  };
  return build_slice(std::move(gates), site(2 * j), site(2 * j + 1));
}

/// Cuts (number of sites on the left) whose reduced spectrum is an ancilla
/// state of the channel: c ≡ t + 1 (mod 2), 1 ≤ c < N.
inline bool channel_cut(int cut, int depth, int width) {
  return cut >= 1 && cut < width && ((cut - depth - 1) % 2 == 0);
}

/// Spectrum of the channel state R for cut `cut` of the grid, from t − 1
/// channel steps starting at the maximally mixed state. After t − 1 steps R
/// no longer depends on its starting point.
inline RVector channel_spectrum_for_cut(const BrickworkGrid& grid, const ProductState& init, int cut) {
  const int t = grid.depth();
  if (!channel_cut(cut, t, grid.width())) {
    throw std::invalid_argument("channel_spectrum_for_cut: cut parity does not match the depth");
  }
  const int j = (cut - t - 1) / 2;
  const Eigen::Index d = ipow(grid.q(), t - 1);
  CMatrix r = CMatrix::Identity(d, d) / static_cast<double>(d);
  for (int jj = j + t - 1; jj >= j + 1; --jj) r = apply_channel(grid_slice(grid, init, jj), r);
  return eigvals_hermitian(r);
}

}  // namespace qchannel
