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

// linalg.hpp: dense complex matrices, Hermitian eigensolver, Haar sampling.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qchannel/rng.hpp"

namespace qchannel {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Eigenvalues below this are reported but treated as numerically null.
inline constexpr double kNumericalNull = 1e-14;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class HermiticityError : public std::invalid_argument {
 public:
  HermiticityError(const std::string& what, double deviation)
      : std::invalid_argument(what), deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

inline std::string shape_string(const CMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

/// Largest entry modulus; zero for empty matrices.
inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline CMatrix multiply(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("multiply: inner dimensions differ (" + shape_string(a) + " * " +
                         shape_string(b) + ")");
  }
  return a * b;
}

/// Kronecker product, a-index major: (a ⊗ b)(i*br + k, j*bc + l) = a(i,j) b(k,l).
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// ‖U†U − I‖_max.
inline double unitarity_deviation(const CMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
}

inline double hermiticity_deviation(const CMatrix& m) { return max_abs(m - m.adjoint()); }

struct HermitianEig {
  RVector eigenvalues;   // descending
  CMatrix eigenvectors;  // columns, matching eigenvalues

  /// Count of eigenvalues below kNumericalNull in magnitude.
  Eigen::Index numerically_null() const {
    return std::count_if(eigenvalues.data(), eigenvalues.data() + eigenvalues.size(),
                         [](double x) { return std::abs(x) < kNumericalNull; });
  }
};

namespace detail {

inline void require_square(const CMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(who) + ": matrix is not square (" + shape_string(m) + ")");
  }
}

inline void require_hermitian(const CMatrix& m, double tol, const char* who) {
  const double dev = hermiticity_deviation(m);
  if (dev > tol * std::max(1.0, max_abs(m))) {
    std::ostringstream os;
    os << who << ": matrix is not Hermitian (max |M - M^dagger| = " << dev << ")";
    throw HermiticityError(os.str(), dev);
  }
}

// Descending order; equal values keep the solver's (ascending) order reversed
// consistently, so truncation is reproducible.
inline std::vector<Eigen::Index> descending_order(const RVector& ascending) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(ascending.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return ascending(a) > ascending(b); });
  return idx;
}

}  // namespace detail

/// Full eigendecomposition of a Hermitian matrix, eigenvalues descending.
/// The input is symmetrized as (M + M†)/2 before solving.
inline HermitianEig eig_hermitian(const CMatrix& m, double hermitian_tol = 1e-10) {
  detail::require_square(m, "eig_hermitian");
  detail::require_hermitian(m, hermitian_tol, "eig_hermitian");
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: solver failed");
  const auto order = detail::descending_order(solver.eigenvalues());
  HermitianEig out;
  out.eigenvalues.resize(m.rows());
  out.eigenvectors.resize(m.rows(), m.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    out.eigenvalues(i) = solver.eigenvalues()(order[k]);
    out.eigenvectors.col(i) = solver.eigenvectors().col(order[k]);
  }
  return out;
}

/// Eigenvalues only, descending. Cheaper than eig_hermitian for large inputs.
inline RVector eigvals_hermitian(const CMatrix& m, double hermitian_tol = 1e-10) {
  detail::require_square(m, "eigvals_hermitian");
  detail::require_hermitian(m, hermitian_tol, "eigvals_hermitian");
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigvals_hermitian: solver failed");
  return solver.eigenvalues().reverse();
}

/// Haar-distributed n×n unitary: QR of a complex Ginibre matrix with the
/// phases of diag(R) moved into Q.
inline CMatrix haar_unitary(Eigen::Index n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("haar_unitary: n must be >= 1");
  CMatrix z(n, n);
  // Fill row by row so the draw order matches the semantic (row-major) order.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0) ? d / mag : cplx{1.0, 0.0};
  }
  return q;
}

/// Haar-random unit vector in C^n.
inline CVector haar_vector(Eigen::Index n, Rng& rng) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

/// Largest eigenvalue of a Hermitian matrix by Lanczos with full
/// reorthogonalization. Small inputs go to the dense solver.
inline double max_eigenvalue_hermitian(const CMatrix& m, double tol = 1e-13, int max_iter = 300) {
  detail::require_square(m, "max_eigenvalue_hermitian");
  const Eigen::Index n = m.rows();
  if (n <= 64) return eigvals_hermitian(m)(0);
  detail::require_hermitian(m, 1e-10, "max_eigenvalue_hermitian");
  const int kmax = static_cast<int>(std::min<Eigen::Index>(max_iter, n));
  CMatrix v(n, kmax + 1);
  std::vector<double> alpha, beta;
  // Fixed pseudo-random start: deterministic and generic.
  Rng rng(0x6c616e637a6f73ULL);
  v.col(0) = haar_vector(n, rng);
  double theta = 0.0;
  for (int k = 0; k < kmax; ++k) {
    CVector w = m * v.col(k);
    alpha.push_back(v.col(k).dot(w).real());
    for (int pass = 0; pass < 2; ++pass) w -= v.leftCols(k + 1) * (v.leftCols(k + 1).adjoint() * w);
    const double b = w.norm();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(Eigen::Map<RVector>(alpha.data(), k + 1),
                               Eigen::Map<RVector>(beta.data(), k), Eigen::ComputeEigenvectors);
    theta = tri.eigenvalues()(k);
    const double resid = b * std::abs(tri.eigenvectors()(k, k));
    if (resid <= tol * std::max(std::abs(theta), 1e-300) || b < 1e-300) return theta;
    beta.push_back(b);
    v.col(k + 1) = w / b;
  }
  return theta;
}

}  // namespace qchannel
