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

// register_ops.hpp: local operators on q-ary digit registers.
//
// A register of n digits indexes q^n basis states with digit 0 the most
// significant. These kernels apply an operator on `width` consecutive digits
// to the row register (Y ← K·Y) or, adjointly, to the column register
// (Y ← Y·K†) of a column-major matrix without forming the q^n × q^n
// embedding I ⊗ K ⊗ I.

#pragma once

#include <cstddef>
#include <immintrin.h>
#include <stdexcept>
#include <vector>

#include "qchannel/linalg.hpp"

namespace qchannel {

inline Eigen::Index ipow(Eigen::Index base, int exp) {
  Eigen::Index r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

namespace detail {

// Complex multiply-accumulate on interleaved (re, im) lanes:
// c·x = fmaddsub(re(c), x, im(c)·swap(x)).
#if defined(__AVX512F__)
inline constexpr int kLanes = 4;
using simd_t = __m512d;
inline simd_t simd_load(const cplx* p) { return _mm512_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void simd_store(cplx* p, simd_t v) { _mm512_storeu_pd(reinterpret_cast<double*>(p), v); }
inline simd_t simd_zero() { return _mm512_setzero_pd(); }
inline simd_t simd_cmul_add(simd_t acc, double cr, double ci, simd_t x) {
  const simd_t swapped = _mm512_permute_pd(x, 0x55);
  return _mm512_add_pd(acc, _mm512_fmaddsub_pd(_mm512_set1_pd(cr), x, _mm512_mul_pd(_mm512_set1_pd(ci), swapped)));
}
#elif defined(__AVX2__) && defined(__FMA__)
inline constexpr int kLanes = 2;
using simd_t = __m256d;
inline simd_t simd_load(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void simd_store(cplx* p, simd_t v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }
inline simd_t simd_zero() { return _mm256_setzero_pd(); }
inline simd_t simd_cmul_add(simd_t acc, double cr, double ci, simd_t x) {
  const simd_t swapped = _mm256_permute_pd(x, 0x5);
  return _mm256_add_pd(acc, _mm256_fmaddsub_pd(_mm256_set1_pd(cr), x, _mm256_mul_pd(_mm256_set1_pd(ci), swapped)));
}
#else
inline constexpr int kLanes = 0;
#endif

// In place: each position i of a slab loads its m inputs and writes its m
// outputs, so no scratch copy is needed.
template <int M>
void apply_middle_fixed(cplx* data, Eigen::Index inner, Eigen::Index outer, const CMatrix& op) {
  double cr[M][M], ci[M][M];
  for (int p = 0; p < M; ++p)
    for (int pp = 0; pp < M; ++pp) {
      cr[p][pp] = op(p, pp).real();
      ci[p][pp] = op(p, pp).imag();
    }
  const Eigen::Index slab = inner * M;
  for (Eigen::Index g = 0; g < outer; ++g) {
    cplx* blk = data + g * slab;
    Eigen::Index i = 0;
#if defined(__AVX512F__) || (defined(__AVX2__) && defined(__FMA__))
    for (; i + kLanes <= inner; i += kLanes) {
      simd_t x[M];
      for (int pp = 0; pp < M; ++pp) x[pp] = simd_load(blk + pp * inner + i);
      for (int p = 0; p < M; ++p) {
        simd_t acc = simd_zero();
        for (int pp = 0; pp < M; ++pp) acc = simd_cmul_add(acc, cr[p][pp], ci[p][pp], x[pp]);
        simd_store(blk + p * inner + i, acc);
      }
    }
#endif
    for (; i < inner; ++i) {
      cplx x[M];
      for (int pp = 0; pp < M; ++pp) x[pp] = blk[pp * inner + i];
      for (int p = 0; p < M; ++p) {
        double re = 0.0, im = 0.0;
        for (int pp = 0; pp < M; ++pp) {
          re += cr[p][pp] * x[pp].real() - ci[p][pp] * x[pp].imag();
          im += cr[p][pp] * x[pp].imag() + ci[p][pp] * x[pp].real();
        }
        blk[p * inner + i] = {re, im};
      }
    }
  }
}

// data viewed as a 3-tensor [inner, m, outer] (inner fastest). For each outer
// slab, X(inner, p) ← Σ_p' op(p, p') X(inner, p').
inline void apply_middle(cplx* data, Eigen::Index inner, Eigen::Index m, Eigen::Index outer,
                         const CMatrix& op) {
  switch (m) {
    case 2: return apply_middle_fixed<2>(data, inner, outer, op);
    case 3: return apply_middle_fixed<3>(data, inner, outer, op);
    case 4: return apply_middle_fixed<4>(data, inner, outer, op);
    default: break;
  }
  if (inner == 1) {
    Eigen::Map<CMatrix> z(data, m, outer);
    z = (op * z).eval();
    return;
  }
  const Eigen::Index slab = inner * m;
  CMatrix tmp(inner, m);
  const CMatrix opt = op.transpose();
  for (Eigen::Index g = 0; g < outer; ++g) {
    Eigen::Map<CMatrix> x(data + g * slab, inner, m);
    tmp.noalias() = x * opt;
    x = tmp;
  }
}

inline void check_register(const CMatrix& op, Eigen::Index q, int n_digits, int pos, int width,
                           Eigen::Index register_size, const char* who) {
  const Eigen::Index m = ipow(q, width);
  if (op.rows() != m || op.cols() != m) {
    throw DimensionError(std::string(who) + ": operator is " + shape_string(op) +
                         ", expected q^width square");
  }
  if (pos < 0 || pos + width > n_digits) {
    throw DimensionError(std::string(who) + ": digit window out of range");
  }
  if (register_size != ipow(q, n_digits)) {
    throw DimensionError(std::string(who) + ": register size does not match q^n");
  }
}

}  // namespace detail

/// Y ← (I ⊗ op ⊗ I)·Y, op acting on row digits [pos, pos + width).
inline void apply_rows(CMatrix& y, const CMatrix& op, int q, int n_digits, int pos, int width) {
  detail::check_register(op, q, n_digits, pos, width, y.rows(), "apply_rows");
  const Eigen::Index inner = ipow(q, n_digits - pos - width);
  const Eigen::Index outer = ipow(q, pos) * y.cols();
  detail::apply_middle(y.data(), inner, op.rows(), outer, op);
}

/// Y ← Y·(I ⊗ op ⊗ I)†, op acting on column digits [pos, pos + width).
inline void apply_cols_adjoint(CMatrix& y, const CMatrix& op, int q, int n_digits, int pos,
                               int width) {
  detail::check_register(op, q, n_digits, pos, width, y.cols(), "apply_cols_adjoint");
  const Eigen::Index inner = y.rows() * ipow(q, n_digits - pos - width);
  const Eigen::Index outer = ipow(q, pos);
  detail::apply_middle(y.data(), inner, op.rows(), outer, op.conjugate());
}

/// Y ← K·Y·K† with K = I ⊗ op ⊗ I on both registers.
inline void conjugate_by(CMatrix& y, const CMatrix& op, int q, int n_digits, int pos, int width) {
  apply_rows(y, op, q, n_digits, pos, width);
  apply_cols_adjoint(y, op, q, n_digits, pos, width);
}

/// An operator on row digits [pos, pos + width).
struct DigitOp {
  const CMatrix* op;
  int pos;
  int width;
};

/// Applies `ops` in order to the row register of every column. Columns are
/// independent, so the sweep runs over column blocks small enough to stay
/// in cache while the whole sequence is applied.
inline void apply_rows_sequence(CMatrix& y, const std::vector<DigitOp>& ops, int q, int n_digits,
                                std::size_t block_bytes = std::size_t{1} << 19) {
  for (const auto& o : ops) detail::check_register(*o.op, q, n_digits, o.pos, o.width, y.rows(), "apply_rows_sequence");
  const Eigen::Index rows = y.rows();
  const auto col_bytes = static_cast<std::size_t>(rows) * sizeof(cplx);
  const Eigen::Index block = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(block_bytes / col_bytes));
  for (Eigen::Index c0 = 0; c0 < y.cols(); c0 += block) {
    const Eigen::Index nc = std::min(block, y.cols() - c0);
    cplx* data = y.data() + c0 * rows;
    for (const auto& o : ops) {
      const Eigen::Index inner = ipow(q, n_digits - o.pos - o.width);
      detail::apply_middle(data, inner, o.op->rows(), ipow(q, o.pos) * nc, *o.op);
    }
  }
}

/// Y ← K·Y·K† with K the ordered product of `ops`.
inline void conjugate_by_sequence(CMatrix& y, const std::vector<DigitOp>& ops, int q, int n_digits) {
  apply_rows_sequence(y, ops, q, n_digits);
  CMatrix z = y.adjoint();
  apply_rows_sequence(z, ops, q, n_digits);
  y = z.adjoint();
}

}  // namespace qchannel
