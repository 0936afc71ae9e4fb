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

// channel_lowrank.hpp: rank-K propagation of the ancilla state.
//
// R ≈ Σ_k λ_k |k⟩⟨k|. One step sends every √λ_k|k⟩ through every Kraus leg,
// giving the q²K columns of W with R' = W W†. The nonzero spectrum of R'
// is that of the Gram matrix G = W†W, so the top K eigenpairs come from a
// q²K-dimensional problem. A Rayleigh-Ritz pass on the orthonormalized
// candidate vectors restores orthonormality lost to small eigenvalues.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qchannel/analysis.hpp"
#include "qchannel/channel_exact.hpp"
#include "qchannel/kraus.hpp"
#include "qchannel/linalg.hpp"

namespace qchannel {

struct LowRankAncilla {
  RVector lambda;   // K weights, descending, Σ = 1
  CMatrix vectors;  // D × K, orthonormal columns
  std::size_t step = 0;
  RunMeta meta;
  double discarded_weight = 0.0;  // trace removed by the last truncation
  bool rank_saturated = false;    // fewer than K nonzero eigenvalues were available

  Eigen::Index rank() const { return lambda.size(); }
  Eigen::Index dim() const { return vectors.rows(); }

  CMatrix to_dense() const {
    return vectors * lambda.cast<cplx>().asDiagonal() * vectors.adjoint();
  }
};

namespace detail {

// Keeps the leading `k` of descending eigenpairs, dropping non-positive
// ones, and renormalizes to unit trace.
inline LowRankAncilla keep_leading(const RVector& values, const CMatrix& vecs, int k) {
  if (k < 1) throw std::invalid_argument("truncate: K must be >= 1");
  double total = 0.0;
  Eigen::Index positive = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) > 0.0) {
      total += values(i);
      ++positive;
    }
  }
  if (!(total > 0.0)) throw std::domain_error("truncate: state has no positive weight");
  LowRankAncilla out;
  const Eigen::Index keep = std::min<Eigen::Index>(k, positive);
  out.rank_saturated = positive < k;
  out.lambda = values.head(keep);
  out.vectors = vecs.leftCols(keep);
  const double kept = out.lambda.sum();
  out.discarded_weight = std::max(0.0, (total - kept) / total);
  out.lambda /= kept;
  return out;
}

}  // namespace detail

/// Top-K eigenpairs of a full ancilla state, renormalized.
inline LowRankAncilla truncate(const AncillaState& r, int k) {
  const auto e = eig_hermitian(r.R);
  LowRankAncilla out = detail::keep_leading(e.eigenvalues, e.eigenvectors, k);
  out.step = r.step;
  out.meta = r.meta;
  return out;
}

/// Further truncation of a low-rank state; K ≥ rank leaves it unchanged.
inline LowRankAncilla truncate(const LowRankAncilla& r, int k) {
  LowRankAncilla out = detail::keep_leading(r.lambda, r.vectors, k);
  out.step = r.step;
  out.meta = r.meta;
  return out;
}

inline LowRankAncilla lowrank_from_pure(const CVector& psi) {
  LowRankAncilla out;
  out.lambda = RVector::Ones(1);
  out.vectors = psi / psi.norm();
  return out;
}

/// One channel step on a rank-K state, truncated back to K.
inline LowRankAncilla apply_channel_lowrank(const KrausSlice& k, const LowRankAncilla& r, int rank) {
  if (rank < 1) throw std::invalid_argument("apply_channel_lowrank: K must be >= 1");
  const Eigen::Index d = k.bond_dim();
  if (r.dim() != d) {
    throw DimensionError("apply_channel_lowrank: state dimension " + std::to_string(r.dim()) +
                         " does not match bond dimension " + std::to_string(d));
  }
  const Eigen::Index kin = r.rank();
  const Eigen::Index ns = k.num_operators();

  CMatrix phi = r.vectors;
  for (Eigen::Index c = 0; c < kin; ++c) phi.col(c) *= std::sqrt(std::max(r.lambda(c), 0.0));
  const CMatrix stacked = k.apply_legs(phi);
  const Eigen::Index m = ns * kin;
  CMatrix w(d, m);
  for (Eigen::Index s = 0; s < ns; ++s) w.middleCols(s * kin, kin) = stacked.middleRows(s * d, d);

  if (m >= d) {
    // The mixture spans the whole space: diagonalize R' = W W† directly.
    CMatrix dense(d, d);
    dense.noalias() = w * w.adjoint();
    const auto e = eig_hermitian(dense, 1e-8);
    LowRankAncilla out = detail::keep_leading(e.eigenvalues, e.eigenvectors, rank);
    out.step = r.step + 1;
    out.meta = r.meta;
    return out;
  }

  // Candidate subspace from the Gram matrix.
  CMatrix gram(m, m);
  gram.noalias() = w.adjoint() * w;
  Eigen::SelfAdjointEigenSolver<CMatrix> gsolve(0.5 * (gram + gram.adjoint()));
  if (gsolve.info() != Eigen::Success) throw std::runtime_error("apply_channel_lowrank: Gram solve failed");
  const double total = std::max(0.0, gram.trace().real());
  const double floor = 1e-15 * std::max(total, 1e-300);
  Eigen::Index avail = 0;
  for (Eigen::Index i = 0; i < m; ++i) avail += gsolve.eigenvalues()(i) > floor;
  avail = std::min(avail, d);
  if (avail == 0) throw std::domain_error("apply_channel_lowrank: channel output has no weight");
  const Eigen::Index keep = std::min<Eigen::Index>(rank, avail);
  // Eigen sorts ascending: the top `keep` are the trailing columns.
  CMatrix cand = w * gsolve.eigenvectors().rightCols(keep);

  // Rayleigh-Ritz on span(cand): orthonormalize, project R' = W W†, rediagonalize.
  Eigen::HouseholderQR<CMatrix> qr(cand);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(d, keep);
  const CMatrix proj = q.adjoint() * w;
  CMatrix small(keep, keep);
  small.noalias() = proj * proj.adjoint();
  const auto e = eig_hermitian(small, 1e-8);

  LowRankAncilla out;
  out.lambda = e.eigenvalues.cwiseMax(0.0);
  out.vectors = q * e.eigenvectors;
  const double kept = out.lambda.sum();
  out.discarded_weight = total > 0.0 ? std::max(0.0, (total - kept) / total) : 0.0;
  out.rank_saturated = avail < rank;
  out.lambda /= kept;
  out.step = r.step + 1;
  out.meta = r.meta;
  return out;
}

inline SpectrumRecord spectrum_record(const LowRankAncilla& s) {
  SpectrumRecord rec = make_spectrum_record(s.lambda, s.step);
  rec.seed = s.meta.seed;
  rec.model = s.meta.model;
  rec.depth = s.meta.depth;
  rec.realization = s.meta.realization;
  return rec;
}

/// Low-rank counterpart of run_exact. The sink also receives the discarded
/// weight of each recorded step.
template <SliceSource Source>
LowRankAncilla run_lowrank(Source& source, LowRankAncilla r0, int rank, const RunOptions& opt,
                           const std::function<void(const SpectrumRecord&, double)>& sink) {
  if (opt.burn_in > opt.steps) throw std::invalid_argument("run_lowrank: burn-in exceeds step count");
  if (opt.record_every < 1) throw std::invalid_argument("run_lowrank: record_every must be >= 1");
  LowRankAncilla s = std::move(r0);
  for (std::size_t i = 1; i <= opt.steps; ++i) {
    s = apply_channel_lowrank(source.next(), s, rank);
    if (i > opt.burn_in && (i - opt.burn_in) % opt.record_every == 0) {
      sink(spectrum_record(s), s.discarded_weight);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Rank calibration

struct RankCalibration {
  int rank = 0;
  double mean_purity = 0.0;
  bool converged = false;
  std::vector<std::pair<int, double>> history;  // (K, mean purity) per trial
};

/// Grows K geometrically from `k_start` until the mean purity returned by
/// `mean_purity_at(K)` is within `rel_tol` of `reference`, or K passes k_max.
inline RankCalibration calibrate_rank(const std::function<double(int)>& mean_purity_at,
                                      double reference, double rel_tol, int k_start, int k_max,
                                      double growth = 1.5) {
  if (k_start < 1 || k_max < k_start) throw std::invalid_argument("calibrate_rank: bad K range");
  if (!(growth > 1.0)) throw std::invalid_argument("calibrate_rank: growth must exceed 1");
  RankCalibration cal;
  int k = k_start;
  while (true) {
    const double p = mean_purity_at(k);
    cal.history.emplace_back(k, p);
    cal.rank = k;
    cal.mean_purity = p;
    if (std::abs(p - reference) <= rel_tol * std::abs(reference)) {
      cal.converged = true;
      return cal;
    }
    if (k >= k_max) return cal;
    k = std::min(k_max, std::max(k + 1, static_cast<int>(std::ceil(k * growth))));
  }
}

}  // namespace qchannel
