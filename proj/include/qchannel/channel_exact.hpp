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

// channel_exact.hpp: the transfer channel on a full D×D ancilla state.
//
// R lives on the bond legs b₁…b_{t−1} of the current slice (b₁ most
// significant). One step evaluates R' = Σ_s A_s R A_s† without forming A_s:
// the top gate and its conjugate cancel once the physical pair is traced, so
// b₁ is traced out and a fresh identity leg takes its place; the remaining
// gates are then applied top-down as operators acting sideways, and gate 1
// closes the last leg with its contracted initial state.

#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qchannel/analysis.hpp"
#include "qchannel/kraus.hpp"
#include "qchannel/linalg.hpp"
#include "qchannel/register_ops.hpp"
#include "qchannel/rng.hpp"

namespace qchannel {

class InvalidState : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunMeta {
  std::string model;
  std::uint64_t seed = 0;
  int depth = 0;
  std::size_t realization = 0;
};

struct AncillaState {
  CMatrix R;
  std::size_t step = 0;
  RunMeta meta;

  Eigen::Index dim() const { return R.rows(); }
};

/// Throws InvalidState unless R is Hermitian, unit-trace and positive to `tol`.
inline void validate_ancilla(const CMatrix& r, double tol = 1e-10) {
  if (r.rows() != r.cols() || r.rows() < 1) {
    throw InvalidState("ancilla state must be a non-empty square matrix, got " + shape_string(r));
  }
  std::ostringstream os;
  const double herm = hermiticity_deviation(r);
  if (herm > tol) {
    os << "ancilla state is not Hermitian (deviation " << herm << ")";
    throw InvalidState(os.str());
  }
  const cplx tr = r.trace();
  if (std::abs(tr - 1.0) > tol) {
    os << "ancilla state has trace " << tr.real() << (tr.imag() < 0 ? "" : "+") << tr.imag()
       << "i, expected 1";
    throw InvalidState(os.str());
  }
  const RVector ev = eigvals_hermitian(r, tol);
  if (ev(ev.size() - 1) < -tol) {
    os << "ancilla state has negative eigenvalue " << ev(ev.size() - 1);
    throw InvalidState(os.str());
  }
}

enum class AncillaInit { maximally_mixed, random_pure, pure_zero, given };

inline AncillaInit parse_ancilla_init(std::string_view s) {
  if (s == "maximally-mixed") return AncillaInit::maximally_mixed;
  if (s == "random-pure") return AncillaInit::random_pure;
  if (s == "pure-zero") return AncillaInit::pure_zero;
  if (s == "given") return AncillaInit::given;
  throw std::invalid_argument("unknown ancilla initialization '" + std::string(s) + "'");
}

/// `given` must be supplied for AncillaInit::given and is validated.
inline AncillaState init_ancilla(AncillaInit mode, Eigen::Index dim, Rng& rng,
                                 const CMatrix* given = nullptr) {
  if (dim < 1) throw std::invalid_argument("init_ancilla: dimension must be >= 1");
  AncillaState s;
  switch (mode) {
    case AncillaInit::maximally_mixed:
      s.R = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
      return s;
    case AncillaInit::random_pure: {
      const CVector v = haar_vector(dim, rng);
      s.R = v * v.adjoint();
      return s;
    }
    case AncillaInit::pure_zero:
      s.R = CMatrix::Zero(dim, dim);
      s.R(0, 0) = 1.0;
      return s;
    case AncillaInit::given:
      if (given == nullptr) throw std::invalid_argument("init_ancilla: no matrix given");
      if (given->rows() != dim) {
        throw DimensionError("init_ancilla: given matrix is " + shape_string(*given) +
                             ", expected dimension " + std::to_string(dim));
      }
      validate_ancilla(*given);
      s.R = *given;
      return s;
  }
  throw std::invalid_argument("init_ancilla: bad mode");
}

/// Tr over the most significant q-digit of a (q·d)×(q·d) matrix.
inline CMatrix partial_trace_leading(const CMatrix& r, int q) {
  const Eigen::Index d = r.rows() / q;
  CMatrix out = CMatrix::Zero(d, d);
  for (int x = 0; x < q; ++x) out += r.block(x * d, x * d, d, d);
  return out;
}

/// One application of the channel of `k` to a D×D matrix.
inline CMatrix apply_channel(const KrausSlice& k, const CMatrix& r) {
  if (k.orientation() != Orientation::sw_ne) {
    throw std::invalid_argument("apply_channel: channel engines need a SW-NE slice");
  }
  const Eigen::Index d = k.bond_dim();
  if (r.rows() != d || r.cols() != d) {
    throw DimensionError("apply_channel: state is " + shape_string(r) + ", slice bond dimension is " +
                         std::to_string(d));
  }
  const int q = k.q();
  const int t = k.depth();
  if (t == 1) return r;
  const CMatrix& phi = k.bottom_state();
  if (t == 2) return r.trace() * (phi * phi.adjoint());

  const CMatrix reduced = partial_trace_leading(r, q);
  const Eigen::Index dr = reduced.rows();
  CMatrix y = CMatrix::Zero(d, d);
  for (int x = 0; x < q; ++x) y.block(x * dr, x * dr, dr, dr) = reduced;

  const int n = t - 1;
  std::vector<DigitOp> ops;
  ops.reserve(static_cast<std::size_t>(t - 1));
  for (int m = 0; m <= t - 3; ++m) ops.push_back({&k.dual_gate(t - 1 - m), m, 2});
  ops.push_back({&phi, n - 1, 1});
  conjugate_by_sequence(y, ops, q, n);
  return y;
}

inline AncillaState apply_channel(const KrausSlice& k, const AncillaState& r) {
  AncillaState out;
  out.R = apply_channel(k, r.R);
  out.step = r.step + 1;
  out.meta = r.meta;
  return out;
}

/// Spectrum of R as a record (symmetrized, clamped, sorted descending).
inline SpectrumRecord spectrum_record(const AncillaState& s) {
  SpectrumRecord rec = make_spectrum_record(eigvals_hermitian(s.R), s.step);
  rec.seed = s.meta.seed;
  rec.model = s.meta.model;
  rec.depth = s.meta.depth;
  rec.realization = s.meta.realization;
  return rec;
}

template <class S>
concept SliceSource = requires(S s) {
  { s.next() } -> std::convertible_to<KrausSlice>;
};

struct RunOptions {
  std::size_t steps = 0;    // L
  std::size_t burn_in = 0;  // B
  std::size_t record_every = 1;
};

/// Applies `steps` channel steps from r0 and calls `sink` with the spectrum
/// after every post-burn-in step whose index (counted from 1) is a multiple
/// of record_every past the burn-in. Returns the final state.
template <SliceSource Source>
AncillaState run_exact(Source& source, AncillaState r0, const RunOptions& opt,
                       const std::function<void(const SpectrumRecord&)>& sink) {
  if (opt.burn_in > opt.steps) throw std::invalid_argument("run_exact: burn-in exceeds step count");
  if (opt.record_every < 1) throw std::invalid_argument("run_exact: record_every must be >= 1");
  AncillaState s = std::move(r0);
  for (std::size_t i = 1; i <= opt.steps; ++i) {
    s = apply_channel(source.next(), s);
    if (i > opt.burn_in && (i - opt.burn_in) % opt.record_every == 0) sink(spectrum_record(s));
  }
  return s;
}

template <SliceSource Source>
std::vector<SpectrumRecord> run_exact(Source& source, AncillaState r0, std::size_t steps,
                                      std::size_t burn_in) {
  std::vector<SpectrumRecord> out;
  run_exact(source, std::move(r0), RunOptions{steps, burn_in, 1},
            [&](const SpectrumRecord& r) { out.push_back(r); });
  return out;
}

}  // namespace qchannel
