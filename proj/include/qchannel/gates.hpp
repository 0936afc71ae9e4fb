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

// gates.hpp: two-site gate families and single-site initial states.
//
// Basis convention: the two-site computational basis is ordered 00, 01, 10, 11
// (left site most significant). Spin variables a ∈ {+1, −1} map to bits by
// a = 1 − 2·bit, so |0⟩ is the Z = +1 state.

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qchannel/linalg.hpp"
#include "qchannel/rng.hpp"

namespace qchannel {

class UnsupportedModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Gate {
  int q = 2;
  CMatrix matrix;  // q² × q²
  std::string label;

  double unitarity_deviation() const { return qchannel::unitarity_deviation(matrix); }
};

enum class GateFamily { haar, conserving, kicked_ising, xxz, fixed_random };

inline std::string_view to_string(GateFamily f) {
  switch (f) {
    case GateFamily::haar: return "haar";
    case GateFamily::conserving: return "conserving";
    case GateFamily::kicked_ising: return "kicked-ising";
    case GateFamily::xxz: return "xxz";
    case GateFamily::fixed_random: return "fixed-random";
  }
  return "?";
}

inline GateFamily parse_gate_family(std::string_view s) {
  for (auto f : {GateFamily::haar, GateFamily::conserving, GateFamily::kicked_ising,
                 GateFamily::xxz, GateFamily::fixed_random}) {
    if (s == to_string(f)) return f;
  }
  throw UnsupportedModel("unknown gate family '" + std::string(s) + "'");
}

struct KickedIsingParams {
  double J = std::numbers::pi / 4;
  double b = std::numbers::pi / 4;
  double h1 = 0.0;
  double h2 = 0.0;

  bool self_dual() const {
    constexpr double quarter = std::numbers::pi / 4;
    return std::abs(std::abs(J) - quarter) <= 1e-12 && std::abs(std::abs(b) - quarter) <= 1e-12;
  }
};

struct XXZParams {
  cplx eta{0.0, 1.5};
  double lambda = 0.7;

  /// η purely imaginary and λ real: the gate is unitary.
  bool unitary_regime() const { return std::abs(eta.real()) <= 1e-14; }
};

inline Gate gate_identity(int q) {
  return {q, CMatrix::Identity(q * q, q * q), "identity"};
}

inline Gate gate_swap(int q) {
  CMatrix m = CMatrix::Zero(q * q, q * q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) m(j * q + i, i * q + j) = 1.0;
  return {q, m, "swap"};
}

inline Gate gate_haar(int q, Rng& rng) {
  if (q < 1) throw std::invalid_argument("gate_haar: q must be >= 1");
  return {q, haar_unitary(q * q, rng), "haar"};
}

/// Random U(1)-symmetric qubit gate: independent phases on |00⟩ and |11⟩,
/// a Haar 2×2 block on span{|01⟩, |10⟩}. The block is drawn first.
inline Gate gate_conserving(int q, Rng& rng) {
  if (q != 2) throw UnsupportedModel("gate_conserving: only q = 2 is supported");
  const CMatrix block = haar_unitary(2, rng);
  const double phi0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double phi3 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = std::polar(1.0, phi0);
  m.block(1, 1, 2, 2) = block;
  m(3, 3) = std::polar(1.0, phi3);
  return {2, m, "conserving"};
}

/// Kicked-Ising brick U = I·(K⊗K)·I in the closed form
/// U_{ab,cd} = −(sin 2b / 2)·exp(−iJ(ab+cd) − iJ̃(ac+bd))·exp(−ih₁(a+c)/2 − ih₂(b+d)/2)
/// with J̃ = −π/4 − (i/2)·log tan b. (a,b) label outputs, (c,d) inputs.
inline Gate gate_kicked_ising(const KickedIsingParams& p) {
  const double s2b = std::sin(2.0 * p.b);
  if (std::abs(s2b) < 1e-12) {
    throw std::invalid_argument("gate_kicked_ising: sin(2b) = 0, the dual coupling is singular");
  }
  const cplx i1{0.0, 1.0};
  const cplx dual_J = -std::numbers::pi / 4 - 0.5 * i1 * std::log(cplx{std::tan(p.b), 0.0});
  CMatrix m(4, 4);
  auto spin = [](int bit) { return 1.0 - 2.0 * bit; };
  for (int row = 0; row < 4; ++row) {
    const double a = spin(row >> 1), b = spin(row & 1);
    for (int col = 0; col < 4; ++col) {
      const double c = spin(col >> 1), d = spin(col & 1);
      const cplx phase = -i1 * p.J * (a * b + c * d) - i1 * dual_J * (a * c + b * d) -
                         i1 * (p.h1 * (a + c) + p.h2 * (b + d)) / 2.0;
      m(row, col) = -0.5 * s2b * std::exp(phase);
    }
  }
  std::ostringstream label;
  label << "kicked-ising(J=" << p.J << ",b=" << p.b << ",h1=" << p.h1 << ",h2=" << p.h2 << ")";
  return {2, m, label.str()};
}

/// Integrable Trotter brick of the XXZ chain.
inline Gate gate_xxz(const XXZParams& p) {
  const cplx denom = std::sin(p.eta + p.lambda);
  if (std::abs(denom) < 1e-14) {
    throw std::invalid_argument("gate_xxz: sin(eta + lambda) = 0");
  }
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(3, 3) = 1.0;
  m(1, 1) = m(2, 2) = std::sin(p.eta) / denom;
  m(1, 2) = m(2, 1) = std::sin(cplx{p.lambda, 0.0}) / denom;
  std::ostringstream label;
  label << "xxz(eta=" << p.eta.real() << (p.eta.imag() < 0 ? "" : "+") << p.eta.imag()
        << "i,lambda=" << p.lambda << ")";
  if (!p.unitary_regime()) label << "[non-unitary]";
  return {2, m, label.str()};
}

/// Total-number operator n₁ + n₂ on two qubits (n = bit value).
inline CMatrix number_operator_2site() {
  CMatrix n = CMatrix::Zero(4, 4);
  n(1, 1) = 1.0;
  n(2, 2) = 1.0;
  n(3, 3) = 2.0;
  return n;
}

// ---------------------------------------------------------------------------
// Product states

enum class ProductStateKind { zeros, neel, random_product, random_bitstring };

inline std::string_view to_string(ProductStateKind k) {
  switch (k) {
    case ProductStateKind::zeros: return "zeros";
    case ProductStateKind::neel: return "neel";
    case ProductStateKind::random_product: return "random-product";
    case ProductStateKind::random_bitstring: return "random-bitstring";
  }
  return "?";
}

inline ProductStateKind parse_product_state(std::string_view s) {
  for (auto k : {ProductStateKind::zeros, ProductStateKind::neel,
                 ProductStateKind::random_product, ProductStateKind::random_bitstring}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown initial-state tag '" + std::string(s) + "'");
}

inline CVector basis_vector(int q, int level) {
  CVector v = CVector::Zero(q);
  v(level) = 1.0;
  return v;
}

/// State of site `x` for a given generator. Random kinds consume `rng`.
inline CVector product_site_vector(ProductStateKind kind, int q, long long x, Rng& rng) {
  switch (kind) {
    case ProductStateKind::zeros: return basis_vector(q, 0);
    case ProductStateKind::neel: return basis_vector(q, static_cast<int>(((x % 2) + 2) % 2));
    case ProductStateKind::random_bitstring:
      return basis_vector(q, static_cast<int>(rng.below(static_cast<std::uint64_t>(q))));
    case ProductStateKind::random_product: return haar_vector(q, rng);
  }
  throw std::logic_error("product_site_vector: bad kind");
}

struct ProductState {
  int q = 2;
  std::vector<CVector> site_vectors;

  int width() const { return static_cast<int>(site_vectors.size()); }
};

inline ProductState make_product_state(ProductStateKind kind, int q, int width, Rng& rng) {
  if (width < 1) throw std::invalid_argument("make_product_state: width must be >= 1");
  ProductState s{q, {}};
  s.site_vectors.reserve(static_cast<std::size_t>(width));
  for (int x = 0; x < width; ++x) s.site_vectors.push_back(product_site_vector(kind, q, x, rng));
  return s;
}

inline ProductState make_product_state(std::string_view tag, int q, int width, Rng& rng) {
  return make_product_state(parse_product_state(tag), q, width, rng);
}

}  // namespace qchannel
