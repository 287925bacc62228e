// Copyright 2026 The lculab Authors
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

#pragma once

// Reversible Markov chains with a marked set: validation, the discriminant
// and its Hamiltonian on the unmarked block, exact hitting times, and the
// classical random-walk estimator.
//
// Transition matrices are column-stochastic: P(s', s) = Pr(s' | s).

#include <cstdint>
#include <vector>

#include "lculab/operators.hpp"
#include "lculab/random.hpp"

namespace lculab {

inline constexpr double kStochasticTolerance = 1e-12;
inline constexpr double kDetailedBalanceTolerance = 1e-10;
inline constexpr double kEigenvalueTolerance = 1e-10;

class MarkovChain {
 public:
  Index n_states() const { return p_.rows(); }
  const RealMatrix& transition() const { return p_; }
  const RealVector& stationary() const { return pi_; }
  /// Largest number of nonzero entries in any row or column.
  Index sparsity() const { return d_; }
  double probability(Index to, Index from) const { return p_(to, from); }

 private:
  friend MarkovChain validate_chain(const RealMatrix& p);
  RealMatrix p_;
  RealVector pi_;
  Index d_ = 0;
};

/// Checks, in order: square, nonnegative, columns sum to 1; irreducible;
/// aperiodic; detailed balance; eigenvalues >= -1e-10. The stationary
/// distribution is the eigenvector at eigenvalue 1, normalized to sum 1.
MarkovChain validate_chain(const RealMatrix& p);
/// Complex input must be real to 1e-12.
MarkovChain validate_chain(const ComplexMatrix& p);

/// (P + 1) / 2.
RealMatrix lazify(const RealMatrix& p);

class MarkedPartition {
 public:
  MarkedPartition(MarkovChain chain, std::vector<Index> marked);

  const MarkovChain& chain() const { return chain_; }
  /// Sorted.
  const std::vector<Index>& marked() const { return marked_; }
  /// Sorted complement of marked().
  const std::vector<Index>& unmarked() const { return unmarked_; }
  bool is_marked(Index s) const { return is_marked_[static_cast<std::size_t>(s)]; }

  const RealMatrix& p_uu() const { return p_uu_; }
  const RealMatrix& p_um() const { return p_um_; }
  const RealMatrix& p_mu() const { return p_mu_; }
  const RealMatrix& p_mm() const { return p_mm_; }
  double pi_u() const { return pi_u_; }
  double pi_m() const { return pi_m_; }
  /// pi restricted to U, divided by pi_U.
  const RealVector& pi_u_state() const { return pi_u_vec_; }
  /// pi restricted to M, divided by pi_M.
  const RealVector& pi_m_state() const { return pi_m_vec_; }

 private:
  MarkovChain chain_;
  std::vector<Index> marked_;
  std::vector<Index> unmarked_;
  std::vector<bool> is_marked_;
  RealMatrix p_uu_, p_um_, p_mu_, p_mm_;
  double pi_u_ = 0.0, pi_m_ = 0.0;
  RealVector pi_u_vec_, pi_m_vec_;
};

struct DiscriminantPair {
  /// S(s, s') = sqrt(Pr(s|s') Pr(s'|s)).
  HermitianOperator s;
  /// 1 - S.
  HermitianOperator h_bar;
  /// 1 - S restricted to U.
  HermitianOperator h;
  /// Smallest eigenvalue of h.
  double delta = 0.0;
  /// sqrt(pi(s)) / sqrt(pi_U) on U.
  RealVector sqrt_pi_u;
};

DiscriminantPair discriminant(const MarkedPartition& mp);

/// pi_U <1_U| (1 - P_UU)^{-1} |pi_U>.
double exact_hitting_time_resolvent(const MarkedPartition& mp);
/// pi_U <sqrt(pi_U)| H^{-1} |sqrt(pi_U)>.
double exact_hitting_time_inverse(const DiscriminantPair& dp, const MarkedPartition& mp);
/// Pr(t > t') = pi_U <1_U| P_UU^{t'} |pi_U>.
double survival_probability(const MarkedPartition& mp, std::int64_t t_prime);
/// 2 pi_U <1_U| P_UU (1 - P_UU)^{-2} |pi_U> + t_h - t_h^2.
double exact_variance(const MarkedPartition& mp);

struct McConfig {
  double c_m = 16.0;
  std::int64_t max_steps = 1'000'000'000;
  int jobs = 1;
};

struct McEstimate {
  double estimate = 0.0;
  std::int64_t samples_used = 0;
  std::int64_t steps_used = 0;
  double sample_variance = 0.0;
};

/// Averages M = ceil(c_M sigma^2 / eps^2) walks started from pi and stopped
/// on the marked set. Walk i draws from make_rng(seed, i), so results do not
/// depend on the number of jobs.
McEstimate classical_mc_estimate(const MarkedPartition& mp, double epsilon, std::uint64_t seed,
                                 const McConfig& cfg = {});
/// Hitting times of `samples` independent walks, walk i seeded by (seed, i).
std::vector<std::int64_t> sample_hitting_times(const MarkedPartition& mp, std::int64_t samples,
                                               std::uint64_t seed);

/// Lazy walk on an n-cycle: stay with 1 - p, move to each neighbor with p/2.
/// Requires n >= 3 and 0 < p <= 1/2.
RealMatrix lazy_cycle(Index n, double p);
/// Delta of lazy_cycle(n, p) with the given marked set. The chain is
/// (1 - p) 1 + p W for the simple walk W, so Delta is linear in p; it is
/// evaluated as 2 p Delta(1/2), which stays accurate for tiny p.
double lazy_cycle_delta(Index n, double p, const std::vector<Index>& marked);
/// Random reversible chain: a connected symmetric weighted graph (a ring plus
/// extra edges with probability edge_probability), normalized column-wise and
/// then lazified.
RealMatrix random_reversible_chain(Index n, Rng& rng, double edge_probability = 0.3);
/// Symmetric chain with off-diagonal weights drawn from {1/8, 1/16, 1/32} on
/// a random connected graph with at most `max_degree` neighbors per state;
/// diagonal >= 1/2.
RealMatrix dyadic_symmetric_chain(Index n, Rng& rng, int max_degree = 3);

}  // namespace lculab
