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

// trajectory.hpp: stochastic unraveling of the channel.
//
// A trajectory samples one physical pair per step with probability
// w_s = ‖A_s ψ‖² and carries the normalized conditional state. Averaging
// |⟨ψ|ψ'⟩|² over two trajectories of the same circuit estimates tr R².

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qchannel/channel_exact.hpp"
#include "qchannel/kraus.hpp"
#include "qchannel/linalg.hpp"
#include "qchannel/parallel.hpp"
#include "qchannel/rng.hpp"
#include "qchannel/slice_stream.hpp"

namespace qchannel {

struct Trajectory {
  CVector psi;
  double logp = 0.0;
  std::size_t length = 0;
  bool keep_history = false;
  std::vector<int> history;  // sampled symbols s₁·q + s₂
  double last_weight_sum = 1.0;

  static Trajectory start(const CVector& psi0, bool keep_history = false) {
    Trajectory t;
    t.psi = psi0 / psi0.norm();
    t.keep_history = keep_history;
    return t;
  }
};

/// Branch weights w_s = ‖A_s ψ‖² and the unnormalized branches A_s ψ.
struct BranchWeights {
  std::vector<double> weights;
  CMatrix branches;  // D × q², column s = A_s ψ
};

inline BranchWeights branch_weights(const KrausSlice& k, const CVector& psi) {
  const Eigen::Index d = k.bond_dim();
  const Eigen::Index ns = k.num_operators();
  const CMatrix stacked = k.apply_legs(psi);
  BranchWeights b;
  b.branches.resize(d, ns);
  b.weights.resize(static_cast<std::size_t>(ns));
  for (Eigen::Index s = 0; s < ns; ++s) {
    b.branches.col(s) = stacked.block(s * d, 0, d, 1);
    b.weights[static_cast<std::size_t>(s)] = b.branches.col(s).squaredNorm();
  }
  return b;
}

inline void step_trajectory(const KrausSlice& k, Trajectory& tr, Rng& rng) {
  if (tr.psi.size() != k.bond_dim()) {
    throw DimensionError("step_trajectory: state dimension " + std::to_string(tr.psi.size()) +
                         " does not match bond dimension " + std::to_string(k.bond_dim()));
  }
  const BranchWeights b = branch_weights(k, tr.psi);
  double total = 0.0;
  for (double w : b.weights) total += w;
  tr.last_weight_sum = total;
  if (!(total > 1e-300)) {
    std::ostringstream os;
    os << "step_trajectory: all branch weights vanish at step " << tr.length + 1;
    throw std::domain_error(os.str());
  }
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t pick = b.weights.size() - 1;
  for (std::size_t s = 0; s < b.weights.size(); ++s) {
    acc += b.weights[s];
    if (u < acc && b.weights[s] > 0.0) {
      pick = s;
      break;
    }
  }
  while (b.weights[pick] <= 0.0) --pick;  // u landed on the rounding tail
  const double w = b.weights[pick];
  tr.psi = b.branches.col(static_cast<Eigen::Index>(pick)) / std::sqrt(w);
  tr.logp += std::log(w);
  ++tr.length;
  if (tr.keep_history) tr.history.push_back(static_cast<int>(pick));
}

// ---------------------------------------------------------------------------
// Pair-fidelity purity estimate

struct PairOptions {
  std::size_t length = 0;   // L: fidelities recorded at l = 1..L
  std::size_t pairs = 0;
  std::uint64_t master_seed = 0;
  int threads = 0;          // 0: default_threads()
};

/// Seeds used by pair p: the circuit stream and the two sampling streams.
struct PairSeeds {
  std::uint64_t circuit, first, second;
};

inline PairSeeds pair_seeds(std::uint64_t master, std::size_t pair) {
  const std::uint64_t base = derive_seed(master, pair);
  return {derive_seed(base, 0), derive_seed(base, 1), derive_seed(base, 2)};
}

struct PurityEstimate {
  std::vector<double> mean;    // per length l = 1..L
  std::vector<double> stderr_; // standard error of the mean
  std::size_t pairs = 0;
};

/// Fidelities F[p][l−1] = |⟨ψ_l|ψ'_l⟩|² of pair p. Each pair draws its own
/// circuit from `spec` (disorder average) and runs both trajectories on it.
inline std::vector<std::vector<double>> pair_fidelities(const CircuitSpec& spec, const CVector& psi0,
                                                        const PairOptions& opt) {
  if (opt.pairs < 1) throw std::invalid_argument("estimate_purity_pairs: need at least one pair");
  std::vector<std::vector<double>> f(opt.pairs);
  parallel_for(opt.pairs, opt.threads, [&](std::size_t p) {
    const PairSeeds seeds = pair_seeds(opt.master_seed, p);
    SliceStream stream(spec, seeds.circuit);
    Rng ra(seeds.first), rb(seeds.second);
    Trajectory a = Trajectory::start(psi0), b = Trajectory::start(psi0);
    auto& row = f[p];
    row.reserve(opt.length);
    for (std::size_t l = 0; l < opt.length; ++l) {
      const KrausSlice slice = stream.next();
      step_trajectory(slice, a, ra);
      step_trajectory(slice, b, rb);
      row.push_back(std::norm(a.psi.dot(b.psi)));
    }
  });
  return f;
}

inline PurityEstimate summarize_pairs(const std::vector<std::vector<double>>& f) {
  PurityEstimate est;
  est.pairs = f.size();
  if (f.empty()) return est;
  const std::size_t len = f.front().size();
  est.mean.assign(len, 0.0);
  est.stderr_.assign(len, 0.0);
  const auto n = static_cast<double>(f.size());
  for (std::size_t l = 0; l < len; ++l) {
    double s = 0.0, s2 = 0.0;
    for (const auto& row : f) {
      s += row[l];
      s2 += row[l] * row[l];
    }
    const double m = s / n;
    est.mean[l] = m;
    est.stderr_[l] = n > 1 ? std::sqrt(std::max(0.0, (s2 - n * m * m) / (n - 1.0)) / n) : 0.0;
  }
  return est;
}

inline PurityEstimate estimate_purity_pairs(const CircuitSpec& spec, const CVector& psi0,
                                            const PairOptions& opt) {
  return summarize_pairs(pair_fidelities(spec, psi0, opt));
}

// ---------------------------------------------------------------------------
// Ergodic average along one trajectory

/// (1/L) Σ_l |ψ_l⟩⟨ψ_l| over L steps of a translation-invariant slice, after
/// `burn_in` unrecorded steps.
inline AncillaState estimate_ancilla_ergodic(const KrausSlice& k, const CVector& psi0, std::size_t length,
                                             std::size_t burn_in, Rng& rng) {
  if (length < 1) throw std::invalid_argument("estimate_ancilla_ergodic: length must be >= 1");
  Trajectory tr = Trajectory::start(psi0);
  for (std::size_t i = 0; i < burn_in; ++i) step_trajectory(k, tr, rng);
  const Eigen::Index d = k.bond_dim();
  CMatrix acc = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < length; ++i) {
    step_trajectory(k, tr, rng);
    acc.selfadjointView<Eigen::Lower>().rankUpdate(tr.psi, 1.0);
  }
  AncillaState out;
  out.R = acc.selfadjointView<Eigen::Lower>();
  out.R /= static_cast<double>(length);
  out.step = burn_in + length;
  return out;
}

}  // namespace qchannel
