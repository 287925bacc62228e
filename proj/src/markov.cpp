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

#include "lculab/markov.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>
#include <thread>

#include "lculab/error.hpp"

namespace lculab {

namespace {

std::vector<Index> bfs_levels(const RealMatrix& p, bool reverse) {
  const Index n = p.rows();
  std::vector<Index> level(static_cast<std::size_t>(n), -1);
  std::queue<Index> q;
  level[0] = 0;
  q.push(0);
  while (!q.empty()) {
    const Index u = q.front();
    q.pop();
    for (Index v = 0; v < n; ++v) {
      const double w = reverse ? p(u, v) : p(v, u);
      if (w > 0.0 && level[static_cast<std::size_t>(v)] < 0) {
        level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
  return level;
}

RealVector stationary_vector(const RealMatrix& p) {
  Eigen::EigenSolver<RealMatrix> es(p);
  if (es.info() != Eigen::Success) throw InternalError("validate_chain: eigensolver failed");
  Index best = 0;
  for (Index i = 1; i < p.rows(); ++i) {
    if (std::abs(es.eigenvalues()(i) - 1.0) < std::abs(es.eigenvalues()(best) - 1.0)) best = i;
  }
  RealVector v = es.eigenvectors().col(best).real();
  v /= v.sum();
  // One refinement step: the stationary vector solves (P - 1) v = 0, sum v = 1.
  const Index n = p.rows();
  RealMatrix a = p - RealMatrix::Identity(n, n);
  a.row(n - 1).setOnes();
  RealVector rhs = RealVector::Zero(n);
  rhs(n - 1) = 1.0;
  RealVector refined = a.partialPivLu().solve(rhs);
  if (refined.allFinite() && (refined - v).cwiseAbs().maxCoeff() < 1e-6) v = refined;
  return v;
}

}  // namespace

MarkovChain validate_chain(const RealMatrix& p) {
  const Index n = p.rows();
  if (n == 0 || p.cols() != n) throw DimensionError("validate_chain: matrix must be square");
  if (n > kMaxDimension) throw DimensionError("validate_chain: too many states");
  if (!p.allFinite()) throw ValidationError("validate_chain: non-finite entry");
  if (p.minCoeff() < 0.0) throw ValidationError("validate_chain: negative transition probability");
  for (Index c = 0; c < n; ++c) {
    const double s = p.col(c).sum();
    if (std::abs(s - 1.0) > kStochasticTolerance) {
      throw ValidationError("validate_chain: column " + std::to_string(c) + " sums to " +
                            std::to_string(s) + ", not 1 (not stochastic)");
    }
  }
  const auto fwd = bfs_levels(p, false);
  const auto bwd = bfs_levels(p, true);
  for (Index v = 0; v < n; ++v) {
    if (fwd[static_cast<std::size_t>(v)] < 0 || bwd[static_cast<std::size_t>(v)] < 0) {
      throw ValidationError("validate_chain: chain is reducible");
    }
  }
  bool aperiodic = false;
  for (Index v = 0; v < n && !aperiodic; ++v) aperiodic = p(v, v) > 0.0;
  if (!aperiodic) {
    Index g = 0;
    for (Index u = 0; u < n; ++u) {
      for (Index v = 0; v < n; ++v) {
        if (p(v, u) > 0.0) {
          g = std::gcd(g, std::abs(fwd[static_cast<std::size_t>(u)] + 1 -
                                   fwd[static_cast<std::size_t>(v)]));
        }
      }
    }
    if (g != 1) throw ValidationError("validate_chain: chain is periodic (period " +
                                      std::to_string(g) + ")");
  }

  MarkovChain chain;
  chain.p_ = p;
  chain.pi_ = stationary_vector(p);
  if (chain.pi_.minCoeff() <= 0.0) {
    throw ValidationError("validate_chain: stationary distribution not positive");
  }
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      if (std::abs(chain.pi_(a) * p(b, a) - chain.pi_(b) * p(a, b)) > kDetailedBalanceTolerance) {
        throw ValidationError("validate_chain: detailed balance fails (irreversible) at (" +
                              std::to_string(a) + ", " + std::to_string(b) + ")");
      }
    }
  }
  RealMatrix s(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) s(a, b) = std::sqrt(p(a, b) * p(b, a));
  }
  const double lmin = Eigen::SelfAdjointEigenSolver<RealMatrix>(s, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .minCoeff();
  if (lmin < -kEigenvalueTolerance) {
    throw ValidationError("validate_chain: negative eigenvalue " + std::to_string(lmin) +
                          " (lazify the chain)");
  }
  Index d = 0;
  for (Index i = 0; i < n; ++i) {
    Index row = 0, col = 0;
    for (Index j = 0; j < n; ++j) {
      row += p(i, j) != 0.0;
      col += p(j, i) != 0.0;
    }
    d = std::max({d, row, col});
  }
  chain.d_ = d;
  return chain;
}

MarkovChain validate_chain(const ComplexMatrix& p) {
  if (p.size() > 0 && p.imag().cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("validate_chain: transition matrix must be real");
  }
  return validate_chain(RealMatrix(p.real()));
}

RealMatrix lazify(const RealMatrix& p) {
  if (p.rows() != p.cols()) throw DimensionError("lazify: matrix must be square");
  return (p + RealMatrix::Identity(p.rows(), p.cols())) / 2.0;
}

MarkedPartition::MarkedPartition(MarkovChain chain, std::vector<Index> marked)
    : chain_(std::move(chain)), marked_(std::move(marked)) {
  const Index n = chain_.n_states();
  std::sort(marked_.begin(), marked_.end());
  if (std::adjacent_find(marked_.begin(), marked_.end()) != marked_.end()) {
    throw ValidationError("MarkedPartition: duplicate marked state");
  }
  is_marked_.assign(static_cast<std::size_t>(n), false);
  for (Index m : marked_) {
    if (m < 0 || m >= n) throw ValidationError("MarkedPartition: marked state out of range");
    is_marked_[static_cast<std::size_t>(m)] = true;
  }
  for (Index s = 0; s < n; ++s) {
    if (!is_marked_[static_cast<std::size_t>(s)]) unmarked_.push_back(s);
  }
  if (marked_.empty() || unmarked_.empty()) {
    throw ValidationError("MarkedPartition: marked set must be a nonempty proper subset");
  }
  const auto block = [&](const std::vector<Index>& rows, const std::vector<Index>& cols) {
    RealMatrix b(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        b(static_cast<Index>(i), static_cast<Index>(j)) = chain_.transition()(rows[i], cols[j]);
      }
    }
    return b;
  };
  p_uu_ = block(unmarked_, unmarked_);
  p_um_ = block(unmarked_, marked_);
  p_mu_ = block(marked_, unmarked_);
  p_mm_ = block(marked_, marked_);
  if (p_um_.maxCoeff() <= 0.0 || p_mu_.maxCoeff() <= 0.0) {
    throw ValidationError("MarkedPartition: P_UM and P_MU must be nonzero");
  }
  const RealVector& pi = chain_.stationary();
  pi_u_vec_.resize(static_cast<Index>(unmarked_.size()));
  pi_m_vec_.resize(static_cast<Index>(marked_.size()));
  for (std::size_t i = 0; i < unmarked_.size(); ++i) pi_u_vec_(static_cast<Index>(i)) = pi(unmarked_[i]);
  for (std::size_t i = 0; i < marked_.size(); ++i) pi_m_vec_(static_cast<Index>(i)) = pi(marked_[i]);
  pi_u_ = pi_u_vec_.sum();
  pi_m_ = pi_m_vec_.sum();
  pi_u_vec_ /= pi_u_;
  pi_m_vec_ /= pi_m_;
}

DiscriminantPair discriminant(const MarkedPartition& mp) {
  const RealMatrix& p = mp.chain().transition();
  const Index n = p.rows();
  RealMatrix s(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) s(a, b) = std::sqrt(p(a, b) * p(b, a));
  }
  const auto& u = mp.unmarked();
  const Index nu = static_cast<Index>(u.size());
  RealMatrix h(nu, nu);
  for (Index i = 0; i < nu; ++i) {
    for (Index j = 0; j < nu; ++j) h(i, j) = (i == j ? 1.0 : 0.0) - s(u[i], u[j]);
  }
  DiscriminantPair dp{HermitianOperator(s),
                      HermitianOperator(RealMatrix(RealMatrix::Identity(n, n) - s)),
                      HermitianOperator(h), 0.0, RealVector()};
  dp.delta = dp.h.min_eigenvalue();
  dp.sqrt_pi_u = mp.pi_u_state().cwiseSqrt();
  return dp;
}

double exact_hitting_time_resolvent(const MarkedPartition& mp) {
  const Index nu = mp.p_uu().rows();
  const RealMatrix a = RealMatrix::Identity(nu, nu) - mp.p_uu();
  Eigen::FullPivLU<RealMatrix> lu(a);
  if (!lu.isInvertible()) throw SingularityError("exact_hitting_time_resolvent: 1 - P_UU singular");
  return mp.pi_u() * lu.solve(mp.pi_u_state()).sum();
}

double exact_hitting_time_inverse(const DiscriminantPair& dp, const MarkedPartition& mp) {
  if (!(dp.delta > 0.0)) throw SingularityError("exact_hitting_time_inverse: H is singular");
  const RealMatrix h = dp.h.matrix().real();
  Eigen::LLT<RealMatrix> llt(h);
  if (llt.info() != Eigen::Success) {
    throw SingularityError("exact_hitting_time_inverse: H is not positive definite");
  }
  return mp.pi_u() * dp.sqrt_pi_u.dot(llt.solve(dp.sqrt_pi_u));
}

double survival_probability(const MarkedPartition& mp, std::int64_t t_prime) {
  if (t_prime < 0) throw ValidationError("survival_probability: t' must be >= 0");
  RealVector v = mp.pi_u_state();
  RealMatrix base = mp.p_uu();
  for (std::int64_t e = t_prime; e > 0; e >>= 1) {
    if (e & 1) v = base * v;
    if (e > 1) base = base * base;
  }
  return mp.pi_u() * v.sum();
}

double exact_variance(const MarkedPartition& mp) {
  const Index nu = mp.p_uu().rows();
  const RealMatrix a = RealMatrix::Identity(nu, nu) - mp.p_uu();
  Eigen::FullPivLU<RealMatrix> lu(a);
  if (!lu.isInvertible()) throw SingularityError("exact_variance: 1 - P_UU singular");
  const RealVector r1 = lu.solve(mp.pi_u_state());
  const RealVector r2 = lu.solve(r1);
  const double th = mp.pi_u() * r1.sum();
  const double v = 2.0 * mp.pi_u() * (mp.p_uu() * r2).sum() + th - th * th;
  return std::max(v, 0.0);
}

namespace {

struct WalkTables {
  // For each state, the cumulative distribution over its successors.
  std::vector<std::vector<double>> cdf;
  std::vector<std::vector<Index>> next;
  std::vector<double> start_cdf;
};

WalkTables walk_tables(const MarkedPartition& mp) {
  const RealMatrix& p = mp.chain().transition();
  const Index n = p.rows();
  WalkTables w;
  w.cdf.resize(static_cast<std::size_t>(n));
  w.next.resize(static_cast<std::size_t>(n));
  for (Index c = 0; c < n; ++c) {
    double acc = 0.0;
    for (Index r = 0; r < n; ++r) {
      if (p(r, c) > 0.0) {
        acc += p(r, c);
        w.cdf[static_cast<std::size_t>(c)].push_back(acc);
        w.next[static_cast<std::size_t>(c)].push_back(r);
      }
    }
    w.cdf[static_cast<std::size_t>(c)].back() = 1.0;
  }
  double acc = 0.0;
  for (Index s = 0; s < n; ++s) {
    acc += mp.chain().stationary()(s);
    w.start_cdf.push_back(acc);
  }
  w.start_cdf.back() = 1.0;
  return w;
}

std::size_t draw(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::int64_t one_walk(const MarkedPartition& mp, const WalkTables& w, Rng& rng,
                      std::int64_t budget) {
  auto s = static_cast<Index>(draw(w.start_cdf, uniform01(rng)));
  std::int64_t t = 0;
  while (!mp.is_marked(s)) {
    if (++t > budget) throw TimeoutError("classical walk exceeded the step cap");
    const auto k = static_cast<std::size_t>(s);
    s = w.next[k][draw(w.cdf[k], uniform01(rng))];
  }
  return t;
}

}  // namespace

std::vector<std::int64_t> sample_hitting_times(const MarkedPartition& mp, std::int64_t samples,
                                               std::uint64_t seed) {
  const WalkTables w = walk_tables(mp);
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(samples, 0)));
  for (std::int64_t i = 0; i < samples; ++i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    out.push_back(one_walk(mp, w, rng, 1'000'000'000));
  }
  return out;
}

McEstimate classical_mc_estimate(const MarkedPartition& mp, double epsilon, std::uint64_t seed,
                                 const McConfig& cfg) {
  if (!(epsilon > 0.0)) throw ValidationError("classical_mc_estimate: epsilon must be > 0");
  if (!(cfg.c_m > 0.0)) throw ValidationError("classical_mc_estimate: c_M must be > 0");
  const double var = exact_variance(mp);
  const double m_real = std::max(1.0, std::ceil(cfg.c_m * var / (epsilon * epsilon)));
  if (m_real > static_cast<double>(cfg.max_steps)) {
    throw TimeoutError("classical_mc_estimate: sample count exceeds the step cap");
  }
  const auto m = static_cast<std::int64_t>(m_real);
  const WalkTables w = walk_tables(mp);

  const int jobs = std::max(1, cfg.jobs);
  std::atomic<std::int64_t> steps{0};
  std::atomic<bool> timed_out{false};
  std::vector<std::int64_t> sums(static_cast<std::size_t>(jobs), 0);
  std::vector<double> sq(static_cast<std::size_t>(jobs), 0.0);
  const auto worker = [&](int job) {
    std::int64_t local = 0;
    double local_sq = 0.0;
    for (std::int64_t i = job; i < m && !timed_out; i += jobs) {
      Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
      std::int64_t t = 0;
      try {
        t = one_walk(mp, w, rng, cfg.max_steps - steps.load());
      } catch (const TimeoutError&) {
        timed_out = true;
        return;
      }
      if (steps.fetch_add(t) + t > cfg.max_steps) {
        timed_out = true;
        return;
      }
      local += t;
      local_sq += static_cast<double>(t) * static_cast<double>(t);
    }
    sums[static_cast<std::size_t>(job)] = local;
    sq[static_cast<std::size_t>(job)] = local_sq;
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker, j);
    for (auto& th : pool) th.join();
  }
  if (timed_out) {
    throw TimeoutError("classical_mc_estimate: exceeded " + std::to_string(cfg.max_steps) +
                       " steps");
  }
  McEstimate r;
  const std::int64_t total = std::accumulate(sums.begin(), sums.end(), std::int64_t{0});
  double total_sq = 0.0;
  for (double v : sq) total_sq += v;
  r.samples_used = m;
  r.steps_used = total;
  r.estimate = static_cast<double>(total) / static_cast<double>(m);
  r.sample_variance =
      m > 1 ? (total_sq - static_cast<double>(m) * r.estimate * r.estimate) / static_cast<double>(m - 1)
            : 0.0;
  return r;
}

RealMatrix lazy_cycle(Index n, double p) {
  if (n < 3) throw ValidationError("lazy_cycle: need at least 3 states");
  if (!(p > 0.0) || p > 0.5) throw ValidationError("lazy_cycle: move probability must lie in (0, 1/2]");
  RealMatrix m = RealMatrix::Zero(n, n);
  for (Index s = 0; s < n; ++s) {
    m(s, s) = 1.0 - p;
    m((s + 1) % n, s) += p / 2.0;
    m((s + n - 1) % n, s) += p / 2.0;
  }
  return m;
}

double lazy_cycle_delta(Index n, double p, const std::vector<Index>& marked) {
  if (!(p > 0.0) || p > 0.5) throw ValidationError("lazy_cycle_delta: p must lie in (0, 1/2]");
  const MarkedPartition mp(validate_chain(lazy_cycle(n, 0.5)), marked);
  return 2.0 * p * discriminant(mp).delta;
}

RealMatrix random_reversible_chain(Index n, Rng& rng, double edge_probability) {
  if (n < 2) throw ValidationError("random_reversible_chain: need at least 2 states");
  RealMatrix w = RealMatrix::Zero(n, n);
  for (Index s = 0; s < n; ++s) {
    const Index t = (s + 1) % n;
    if (t == s) continue;
    const double x = 0.1 + uniform01(rng);
    w(s, t) = w(t, s) = x;
  }
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      const double coin = uniform01(rng);
      const double x = 0.1 + uniform01(rng);
      if (coin < edge_probability && w(a, b) == 0.0) w(a, b) = w(b, a) = x;
    }
  }
  RealMatrix p(n, n);
  for (Index c = 0; c < n; ++c) p.col(c) = w.col(c) / w.col(c).sum();
  return lazify(p);
}

RealMatrix dyadic_symmetric_chain(Index n, Rng& rng, int max_degree) {
  if (n < 2) throw ValidationError("dyadic_symmetric_chain: need at least 2 states");
  if (max_degree < 2 || max_degree > 4) {
    throw ValidationError("dyadic_symmetric_chain: max_degree must lie in [2, 4]");
  }
  static constexpr double kWeights[] = {0.125, 0.0625, 0.03125};
  RealMatrix p = RealMatrix::Zero(n, n);
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  const auto add = [&](Index a, Index b) {
    if (a == b || p(a, b) != 0.0) return;
    if (degree[static_cast<std::size_t>(a)] >= max_degree ||
        degree[static_cast<std::size_t>(b)] >= max_degree) {
      return;
    }
    const double w = kWeights[static_cast<std::size_t>(rng() % 3)];
    p(a, b) = p(b, a) = w;
    ++degree[static_cast<std::size_t>(a)];
    ++degree[static_cast<std::size_t>(b)];
  };
  for (Index s = 0; s + 1 < n; ++s) add(s, s + 1);
  for (Index k = 0; k < n; ++k) {
    add(static_cast<Index>(rng() % static_cast<std::uint64_t>(n)),
        static_cast<Index>(rng() % static_cast<std::uint64_t>(n)));
  }
  for (Index c = 0; c < n; ++c) p(c, c) = 1.0 - p.col(c).sum();
  return p;
}

}  // namespace lculab
