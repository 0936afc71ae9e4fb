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

// Reference implementations used only by the tests. They favour directness
// over speed and share no code paths with the library kernels.

#pragma once

#include <vector>

#include "qchannel/linalg.hpp"

namespace qchannel::oracle_ref {

inline CMatrix naive_multiply(const CMatrix& a, const CMatrix& b) {
  CMatrix c = CMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

inline CMatrix naive_kron(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < b.rows(); ++k)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return c;
}

inline std::vector<int> digits_of(long long x, int q, int n) {
  std::vector<int> d(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    d[static_cast<std::size_t>(i)] = static_cast<int>(x % q);
    x /= q;
  }
  return d;
}

/// Kraus operators of a SW-NE slice by brute-force summation over every
/// internal leg, written directly from the slice geometry:
///
///   A_{s₁s₂}[a; b] = Σ_{w, c} U₁[(a_{t−1}, w₁), (c₁, c₂)] v_l[c₁] v_r[c₂]
///                    · Π_{ℓ=2}^{t−1} U_ℓ[(a_{t−ℓ}, w_ℓ), (w_{ℓ−1}, b_{t−ℓ+1})]
///                    · U_t[(s₁, s₂), (w_{t−1}, b₁)]
inline std::vector<CMatrix> brute_force_kraus(const std::vector<CMatrix>& gates, const CVector& vl,
                                              const CVector& vr) {
  const int t = static_cast<int>(gates.size());
  const int q = static_cast<int>(vl.size());
  long long dim = 1;
  for (int i = 0; i < t - 1; ++i) dim *= q;
  std::vector<CMatrix> out(static_cast<std::size_t>(q * q), CMatrix::Zero(dim, dim));
  if (t == 1) {
    for (int s1 = 0; s1 < q; ++s1)
      for (int s2 = 0; s2 < q; ++s2)
        for (int c1 = 0; c1 < q; ++c1)
          for (int c2 = 0; c2 < q; ++c2)
            out[static_cast<std::size_t>(s1 * q + s2)](0, 0) +=
                gates[0](s1 * q + s2, c1 * q + c2) * vl(c1) * vr(c2);
    return out;
  }
  long long wcount = 1;
  for (int i = 0; i < t - 1; ++i) wcount *= q;
  for (int s1 = 0; s1 < q; ++s1)
    for (int s2 = 0; s2 < q; ++s2)
      for (long long ai = 0; ai < dim; ++ai)
        for (long long bi = 0; bi < dim; ++bi) {
          const auto a = digits_of(ai, q, t - 1);  // a[k-1] = a_k
          const auto b = digits_of(bi, q, t - 1);
          cplx acc = 0.0;
          for (long long wi = 0; wi < wcount; ++wi) {
            const auto w = digits_of(wi, q, t - 1);  // w[l-1] = w_l
            cplx bottom = 0.0;
            for (int c1 = 0; c1 < q; ++c1)
              for (int c2 = 0; c2 < q; ++c2)
                bottom += gates[0](a[t - 2] * q + w[0], c1 * q + c2) * vl(c1) * vr(c2);
            cplx term = bottom;
            for (int l = 2; l <= t - 1; ++l) {
              term *= gates[static_cast<std::size_t>(l - 1)](
                  a[t - l - 1] * q + w[l - 1], w[l - 2] * q + b[t - l]);
            }
            term *= gates[static_cast<std::size_t>(t - 1)](s1 * q + s2, w[t - 2] * q + b[0]);
            acc += term;
          }
          out[static_cast<std::size_t>(s1 * q + s2)](ai, bi) = acc;
        }
  return out;
}

inline CMatrix kraus_sum(const std::vector<CMatrix>& ops, const CMatrix& r) {
  CMatrix out = CMatrix::Zero(ops.front().rows(), ops.front().rows());
  for (const auto& a : ops) out += naive_multiply(naive_multiply(a, r), a.adjoint());
  return out;
}

}  // namespace qchannel::oracle_ref
